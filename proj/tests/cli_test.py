#!/usr/bin/env python3
"""End-to-end checks of the icsguard command line: python3 cli_test.py BINARY FIXTURES."""

import csv
import json
import os
import subprocess
import sys
import tempfile
import unittest

BINARY = None
FIXTURES = None


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("ICSGUARD_SEED", None)
    if env:
        full_env.update(env)
    return subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env, timeout=300)


def fixture(name):
    return os.path.join(FIXTURES, name + ".model")


class Analyze(unittest.TestCase):
    def test_case2_text_report(self):
        r = run("analyze", fixture("case2"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("critical nodes: {a, c}", r.stdout)
        self.assertIn("critical measures: {s1, s3}", r.stdout)
        self.assertIn("total cost: 7\n", r.stdout)

    def test_wtn_extended_json(self):
        r = run("analyze", fixture("wtn-extended"), "--format", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads(r.stdout)
        self.assertEqual(report["total_cost"], 15)
        self.assertEqual(report["critical_nodes"], ["a1", "s2"])
        self.assertEqual(report["critical_measures"], ["A3-1", "B1-1", "B2-1", "F1-1", "F1-2"])
        self.assertEqual(set(report), {"target", "critical_nodes", "critical_measures", "total_cost", "stats"})
        self.assertEqual(
            set(report["stats"]), {"encode_ms", "solve_ms", "vars", "clauses", "sat_calls", "cores"}
        )

    def test_check_oracle_agrees(self):
        for name in ("case1", "case2", "wtn-base", "wtn-extended"):
            r = run("analyze", fixture(name), "--check-oracle")
            self.assertEqual(r.returncode, 0, name + r.stderr)
            self.assertIn("oracle agrees", r.stderr)

    def test_dot_output_and_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            dot = os.path.join(tmp, "out.dot")
            wcnf = os.path.join(tmp, "out.wcnf")
            r = run("analyze", fixture("case2"), "-f", "dot", "-o", dot, "--export-wcnf", wcnf)
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertEqual(r.stdout, "")
            with open(dot) as f:
                text = f.read()
            self.assertTrue(text.startswith("digraph model {"))
            self.assertEqual(text.count("color=red"), 4)
            with open(wcnf) as f:
                header = [line for line in f if line.startswith("p ")]
            self.assertEqual(len(header), 1)
            self.assertTrue(header[0].startswith("p wcnf "))

    def test_missing_file(self):
        r = run("analyze", "missing.file")
        self.assertEqual(r.returncode, 2)

    def test_syntax_error_has_location(self):
        with tempfile.NamedTemporaryFile("w", suffix=".model", delete=False) as f:
            f.write('{\n  "target": "a",\n  "nodes": [\n')
            path = f.name
        try:
            r = run("analyze", path)
            self.assertEqual(r.returncode, 2)
            self.assertIn("line 4", r.stderr)
        finally:
            os.unlink(path)

    def test_validation_error(self):
        with tempfile.NamedTemporaryFile("w", suffix=".model", delete=False) as f:
            json.dump({"nodes": [{"id": "a", "kind": "sensor"}], "edges": [["a", "a"]], "target": "a"}, f)
            path = f.name
        try:
            r = run("analyze", path)
            self.assertEqual(r.returncode, 2)
        finally:
            os.unlink(path)

    def test_unknown_field_strict_and_lenient(self):
        with tempfile.NamedTemporaryFile("w", suffix=".model", delete=False) as f:
            json.dump({"nodes": [{"id": "a", "kind": "sensor", "cost": 2}], "target": "a", "extra": 1}, f)
            path = f.name
        try:
            self.assertEqual(run("analyze", path).returncode, 2)
            r = run("analyze", path, "--lenient")
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("warning", r.stderr)
        finally:
            os.unlink(path)

    def test_indestructible_target(self):
        with tempfile.NamedTemporaryFile("w", suffix=".model", delete=False) as f:
            json.dump({"nodes": [{"id": "a", "kind": "sensor", "cost": "inf"}], "target": "a"}, f)
            path = f.name
        try:
            r = run("analyze", path)
            self.assertEqual(r.returncode, 1)
            self.assertNotIn("inf", r.stdout)
        finally:
            os.unlink(path)

    def test_oracle_guard(self):
        with tempfile.TemporaryDirectory() as tmp:
            big = os.path.join(tmp, "big.model")
            self.assertEqual(run("gen", "--size", "200", "--out", big).returncode, 0)
            self.assertEqual(run("analyze", big, "--check-oracle").returncode, 2)
            self.assertEqual(run("analyze", big).returncode, 0)


class Gen(unittest.TestCase):
    def test_reference_configuration(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "g.model")
            args = ["gen", "--size", "1000", "--config", "60,20,20", "--measures", "5", "--overlap", "0.5",
                    "--seed", "7", "--out", out]
            r = run(*args)
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("nodes:", r.stdout)
            self.assertIn("instances:", r.stdout)
            with open(out) as f:
                first = f.read()
            self.assertEqual(run("analyze", out).returncode, 0)
            self.assertEqual(run(*args).returncode, 0)
            with open(out) as f:
                self.assertEqual(f.read(), first)

    def test_single_node(self):
        r = run("gen", "--size", "1", "--config", "100,0,0", "--measures", "0", "--seed", "1")
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(r.stdout)
        self.assertEqual(len(doc["nodes"]), 1)
        self.assertEqual(doc["edges"], [])
        self.assertEqual(doc["target"], doc["nodes"][0]["id"])

    def test_seed_from_environment(self):
        a = run("gen", "--size", "50", "--measures", "1", env={"ICSGUARD_SEED": "11"}).stdout
        b = run("gen", "--size", "50", "--measures", "1", "--seed", "11").stdout
        c = run("gen", "--size", "50", "--measures", "1", "--seed", "12").stdout
        self.assertEqual(a, b)
        self.assertNotEqual(a, c)

    def test_bad_composition(self):
        self.assertEqual(run("gen", "--size", "10", "--config", "50,20,20").returncode, 2)
        self.assertEqual(run("gen", "--size", "10", "--config", "garbage").returncode, 2)
        self.assertEqual(run("gen", "--size", "10", "--overlap", "2").returncode, 2)


class Bench(unittest.TestCase):
    def read(self, path):
        with open(path) as f:
            return list(csv.DictReader(f))

    def test_measure_sweep(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "b.csv")
            r = run("bench", "--sizes", "1000", "--measures", "1,5,7,10", "--overlaps", "0", "--trials", "10",
                    "--out", out, "--workers", "4")
            self.assertEqual(r.returncode, 0, r.stderr)
            rows = self.read(out)
            self.assertEqual(len(rows), 40)
            self.assertTrue(all(row["status"] == "optimal" for row in rows))
            self.assertEqual(len(self.read(out + ".summary.csv")), 4)

    def test_overlap_sweep(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "b.csv")
            r = run("bench", "--sizes", "100", "--measures", "5", "--overlaps", "0,0.5,1", "--trials", "3",
                    "--out", out)
            self.assertEqual(r.returncode, 0, r.stderr)
            rows = self.read(out)
            self.assertEqual(len(rows), 9)
            self.assertEqual(
                list(rows[0]),
                ["n", "x", "p", "trial", "encode_ms", "solve_ms", "total_cost", "vars", "clauses", "status"],
            )
            again = os.path.join(tmp, "c.csv")
            run("bench", "--sizes", "100", "--measures", "5", "--overlaps", "0,0.5,1", "--trials", "3",
                "--out", again)
            self.assertEqual([r["total_cost"] for r in rows], [r["total_cost"] for r in self.read(again)])

    def test_empty_grid(self):
        r = run("bench")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout, "n,x,p,trial,encode_ms,solve_ms,total_cost,vars,clauses,status\n")

    def test_all_timeouts(self):
        r = run("bench", "--sizes", "3000", "--measures", "5", "--overlaps", "0", "--timeout", "0.000001")
        self.assertEqual(r.returncode, 1)
        self.assertIn("timeout", r.stdout)


class Usage(unittest.TestCase):
    def test_no_subcommand(self):
        self.assertEqual(run().returncode, 2)

    def test_help(self):
        r = run("--help")
        self.assertEqual(r.returncode, 0)
        self.assertIn("analyze", r.stdout)


if __name__ == "__main__":
    if len(sys.argv) < 3:
        print("usage: cli_test.py BINARY FIXTURES", file=sys.stderr)
        sys.exit(2)
    BINARY, FIXTURES = sys.argv[1], sys.argv[2]
    unittest.main(argv=[sys.argv[0], "-v"])

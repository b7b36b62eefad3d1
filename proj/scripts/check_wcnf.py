#!/usr/bin/env python3
"""Solve a classic WCNF file with an external exact solver and print the optimum.

Uses RC2 from python-sat when available, otherwise a 0/1 integer program
through scipy.optimize.milp. Exit status 1 means the hard clauses are
unsatisfiable, 2 that no solver backend is installed.
"""

import sys


def read_wcnf(path):
    hard, soft, top = [], [], None
    n_vars = 0
    with open(path) as f:
        for line in f:
            parts = line.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                n_vars, top = int(parts[2]), int(parts[4])
                continue
            weight = int(parts[0])
            lits = [int(x) for x in parts[1:-1]]
            (hard if weight >= top else soft).append((weight, lits))
    return n_vars, [lits for _, lits in hard], soft


def solve_rc2(n_vars, hard, soft):
    from pysat.examples.rc2 import RC2
    from pysat.formula import WCNF

    w = WCNF()
    for lits in hard:
        w.append(lits)
    for weight, lits in soft:
        w.append(lits, weight=weight)
    with RC2(w) as rc2:
        return None if rc2.compute() is None else rc2.cost


def solve_milp(n_vars, hard, soft):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    # Variables: x_1..x_n, then one violation indicator per soft clause.
    n = n_vars + len(soft)
    rows, lower = [], []
    clauses = [(lits, None) for lits in hard] + [(lits, n_vars + i) for i, (_, lits) in enumerate(soft)]
    for lits, slack in clauses:
        row = np.zeros(n)
        neg = 0
        for lit in lits:
            if lit > 0:
                row[lit - 1] += 1
            else:
                row[-lit - 1] -= 1
                neg += 1
        if slack is not None:
            row[slack] = 1
        rows.append(row)
        lower.append(1 - neg)
    cost = np.zeros(n)
    for i, (weight, _) in enumerate(soft):
        cost[n_vars + i] = weight
    constraints = [LinearConstraint(np.array(rows), lower, np.inf)] if rows else []
    res = milp(cost, constraints=constraints, integrality=np.ones(n), bounds=Bounds(0, 1))
    if res.status == 2:
        return None
    if res.status != 0:
        raise RuntimeError(res.message)
    return int(round(res.fun))


def main():
    if len(sys.argv) != 2:
        print("usage: check_wcnf.py FILE", file=sys.stderr)
        return 2
    n_vars, hard, soft = read_wcnf(sys.argv[1])
    for backend in (solve_rc2, solve_milp):
        try:
            value = backend(n_vars, hard, soft)
        except ImportError:
            continue
        if value is None:
            print("UNSAT")
            return 1
        print(value)
        print(f"backend: {backend.__name__[6:]}")
        return 0
    print("no MaxSAT backend available (install python-sat or scipy)", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())

#include "icsguard/formula.hpp"

#include <stdexcept>

namespace icsguard {

Formula::Ref Formula::push(Node node) {
  nodes_.push_back(std::move(node));
  root_ = static_cast<Ref>(nodes_.size() - 1);
  return root_;
}

Formula::Ref Formula::var(std::string_view token) {
  std::string key(token);
  if (auto it = vars_.find(key); it != vars_.end()) {
    return it->second;
  }
  Ref ref = push({Op::var, key, {}});
  vars_.emplace(std::move(key), ref);
  return ref;
}

Formula::Ref Formula::negation(Ref child) { return push({Op::negation, {}, {child}}); }

Formula::Ref Formula::conjunction(std::vector<Ref> children) {
  if (children.empty()) throw std::invalid_argument("conjunction needs at least one child");
  return push({Op::conjunction, {}, std::move(children)});
}

Formula::Ref Formula::disjunction(std::vector<Ref> children) {
  if (children.empty()) throw std::invalid_argument("disjunction needs at least one child");
  return push({Op::disjunction, {}, std::move(children)});
}

std::vector<std::string> Formula::variables() const {
  std::vector<std::string> out;
  if (nodes_.empty()) return out;
  std::vector<bool> reach(nodes_.size(), false);
  reach[root_] = true;
  for (Ref r = root_ + 1; r-- > 0;) {
    if (!reach[r]) continue;
    for (Ref c : nodes_[r].children) reach[c] = true;
  }
  for (Ref r = 0; r <= root_; ++r) {
    if (reach[r] && nodes_[r].op == Op::var) out.push_back(nodes_[r].token);
  }
  return out;
}

bool Formula::evaluate(const std::function<bool(std::string_view)>& value) const {
  if (nodes_.empty()) throw std::logic_error("evaluating an empty formula");
  std::vector<char> v(root_ + 1, 0);
  for (Ref r = 0; r <= root_; ++r) {
    const Node& n = nodes_[r];
    switch (n.op) {
      case Op::var: v[r] = value(n.token); break;
      case Op::negation: v[r] = !v[n.children[0]]; break;
      case Op::conjunction: {
        bool all = true;
        for (Ref c : n.children) all = all && v[c];
        v[r] = all;
        break;
      }
      case Op::disjunction: {
        bool any = false;
        for (Ref c : n.children) any = any || v[c];
        v[r] = any;
        break;
      }
    }
  }
  return v[root_];
}

namespace {

void render(const Formula& f, Formula::Ref ref, std::string& out, bool nested) {
  const auto& n = f.node(ref);
  switch (n.op) {
    case Formula::Op::var: out += n.token; return;
    case Formula::Op::negation:
      out += '!';
      render(f, n.children[0], out, true);
      return;
    case Formula::Op::conjunction:
    case Formula::Op::disjunction: break;
  }
  if (n.children.size() == 1) {
    render(f, n.children[0], out, nested);
    return;
  }
  const char* glue = n.op == Formula::Op::conjunction ? " & " : " | ";
  // Flatten runs of the same operator into one parenthesised list.
  std::vector<Formula::Ref> flat;
  std::vector<Formula::Ref> work(n.children.rbegin(), n.children.rend());
  while (!work.empty()) {
    Formula::Ref c = work.back();
    work.pop_back();
    const auto& child = f.node(c);
    if (child.op == n.op) {
      work.insert(work.end(), child.children.rbegin(), child.children.rend());
    } else {
      flat.push_back(c);
    }
  }
  if (flat.size() == 1) {
    render(f, flat[0], out, nested);
    return;
  }
  if (nested) out += '(';
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i) out += glue;
    render(f, flat[i], out, true);
  }
  if (nested) out += ')';
}

}  // namespace

std::string Formula::to_string(Ref ref) const {
  std::string out;
  render(*this, ref, out, false);
  return out;
}

std::string Formula::to_string() const {
  if (nodes_.empty()) return {};
  return to_string(root_);
}

Formula build_formula(const Model& model, std::string_view target) {
  Model retargeted;
  const Model* source = &model;
  if (target != model.target) {
    retargeted = model;
    retargeted.target = std::string(target);
    source = &retargeted;
  }
  ModelIndex index(*source);

  Formula f;
  // Topological order guarantees predecessors are built first.
  std::vector<Formula::Ref> sat(index.node_count(), 0);
  for (std::size_t v : index.topological_order()) {
    if (!index.relevant()[v]) continue;
    const Node& node = source->nodes[v];
    const auto& preds = index.predecessors(v);
    if (is_atomic(node.kind)) {
      Formula::Ref self = f.var(node.id);
      if (preds.empty()) {
        sat[v] = self;
      } else {
        std::vector<Formula::Ref> children{self};
        for (std::size_t p : preds) children.push_back(sat[p]);
        sat[v] = f.conjunction(std::move(children));
      }
    } else {
      std::vector<Formula::Ref> children;
      for (std::size_t p : preds) children.push_back(sat[p]);
      sat[v] = node.kind == NodeKind::and_connector ? f.conjunction(std::move(children))
                                                    : f.disjunction(std::move(children));
    }
  }
  f.set_root(sat[index.target()]);
  return f;
}

Formula build_formula(const Model& model) { return build_formula(model, model.target); }

Formula expand_formula(const Formula& formula, const Model& model) {
  ModelIndex index(model);
  Formula out;
  if (formula.empty()) return out;
  std::vector<Formula::Ref> map(formula.size(), 0);
  for (Formula::Ref r = 0; r < formula.size(); ++r) {
    const auto& n = formula.node(r);
    std::vector<Formula::Ref> children;
    for (Formula::Ref c : n.children) children.push_back(map[c]);
    switch (n.op) {
      case Formula::Op::var: {
        Formula::Ref self = out.var(n.token);
        auto node = index.find_node(n.token);
        if (!node || index.protectors(*node).empty()) {
          map[r] = self;
          break;
        }
        std::vector<Formula::Ref> guard{self};
        for (std::size_t m : index.protectors(*node)) {
          guard.push_back(out.var(model.measures[m].id));
        }
        map[r] = out.disjunction(std::move(guard));
        break;
      }
      case Formula::Op::negation: map[r] = out.negation(children[0]); break;
      case Formula::Op::conjunction: map[r] = out.conjunction(std::move(children)); break;
      case Formula::Op::disjunction: map[r] = out.disjunction(std::move(children)); break;
    }
  }
  out.set_root(map[formula.root()]);
  return out;
}

}  // namespace icsguard

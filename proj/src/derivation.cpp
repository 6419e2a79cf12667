// Derivation verification and rendering.

#include "lmg/derivation.hpp"

#include <sstream>

namespace lmg {

namespace {

// Evaluates a term to a concrete word under total bindings; false when a
// referenced variable is out of range.
bool eval_term(const Rule& r, const std::vector<Word>& bindings, const Term& t, Word& out) {
  out.clear();
  for (const auto& e : t) {
    if (const auto* tr = std::get_if<TerminalRef>(&e)) {
      out.push_back(tr->id);
    } else {
      VariableId v = std::get<VarRef>(e).id;
      if (v >= bindings.size() || v >= r.var_names.size()) return false;
      const Word& w = bindings[v];
      out.insert(out.end(), w.begin(), w.end());
    }
  }
  return true;
}

bool starts_with(const Word& w, std::size_t at, const Word& piece) {
  if (at + piece.size() > w.size()) return false;
  for (std::size_t i = 0; i < piece.size(); ++i)
    if (w[at + i] != piece[i]) return false;
  return true;
}

bool check_child(const Grammar& g, const DerivNode::Child& child, const NonterminalPred& want,
                 const Rule& r, const std::vector<Word>& bindings, const Word& expected_yield) {
  if (!child.node) return false;
  if (child.node->rule >= g.rules.size()) return false;
  const Rule& child_rule = g.rules[child.node->rule];
  if (child_rule.head != want.head) return false;
  if (child.node->lhs_args.size() != want.args.size()) return false;
  for (std::size_t i = 0; i < want.args.size(); ++i) {
    Word arg;
    if (!eval_term(r, bindings, want.args[i], arg)) return false;
    if (arg != child.node->lhs_args[i]) return false;
  }
  if (child.node->yield != expected_yield) return false;
  return check_derivation(g, *child.node);
}

}  // namespace

bool check_derivation(const Grammar& g, const DerivNode& node) {
  if (node.rule >= g.rules.size()) return false;
  const Rule& r = g.rules[node.rule];
  if (node.bindings.size() != r.var_names.size()) return false;
  if (node.lhs_args.size() != r.patterns.size()) return false;
  if (node.span_end < node.span_begin) return false;
  if (node.span_end - node.span_begin != node.yield.size()) return false;

  // LHS: pattern variables concatenate to the recorded argument words.
  for (std::size_t i = 0; i < r.patterns.size(); ++i) {
    Word concat;
    for (VariableId v : r.patterns[i]) {
      if (v >= node.bindings.size()) return false;
      concat.insert(concat.end(), node.bindings[v].begin(), node.bindings[v].end());
    }
    if (concat != node.lhs_args[i]) return false;
  }

  std::size_t cursor = 0;
  std::size_t next_child = 0;
  auto take_child = [&](std::uint32_t item, ChildRole role) -> const DerivNode::Child* {
    if (next_child >= node.children.size()) return nullptr;
    const auto& c = node.children[next_child];
    if (c.item != item || c.role != role) return nullptr;
    ++next_child;
    return &c;
  };

  for (std::uint32_t ii = 0; ii < r.rhs.size(); ++ii) {
    const Item& item = r.rhs[ii];
    bool ok = std::visit(
        overloaded{
            [&](const PredItem& p) {
              if (const auto* t = std::get_if<TerminalPred>(&p.pred)) {
                if (cursor >= node.yield.size() || node.yield[cursor] != t->terminal) return false;
                ++cursor;
                return true;
              }
              const auto& np = std::get<NonterminalPred>(p.pred);
              const auto* child = take_child(ii, ChildRole::Predicate);
              if (!child || !child->node) return false;
              const Word& piece = child->node->yield;
              if (!starts_with(node.yield, cursor, piece)) return false;
              if (!check_child(g, *child, np, r, node.bindings, piece)) return false;
              cursor += piece.size();
              return true;
            },
            [&](const QuantItem& q) {
              if (q.binder >= node.bindings.size()) return false;
              const Word& val = node.bindings[q.binder];
              if (!starts_with(node.yield, cursor, val)) return false;
              if (const auto* t = std::get_if<TerminalPred>(&q.body)) {
                if (val.size() != 1 || val[0] != t->terminal) return false;
              } else {
                const auto& np = std::get<NonterminalPred>(q.body);
                const auto* child = take_child(ii, ChildRole::QuantifierBody);
                if (!child || !check_child(g, *child, np, r, node.bindings, val)) return false;
              }
              cursor += val.size();
              return true;
            },
            [&](const SlashItem& s) {
              Word denom;
              if (!eval_term(r, node.bindings, s.denominator, denom)) return false;
              if (const auto* t = std::get_if<TerminalPred>(&s.numerator)) {
                return denom.size() == 1 && denom[0] == t->terminal;
              }
              const auto& np = std::get<NonterminalPred>(s.numerator);
              const auto* child = take_child(ii, ChildRole::SlashNumerator);
              return child && check_child(g, *child, np, r, node.bindings, denom);
            },
        },
        item);
    if (!ok) return false;
  }
  return cursor == node.yield.size() && next_child == node.children.size();
}

bool replay(const Grammar& g, const DerivNode& root, const Word& input) {
  if (root.rule >= g.rules.size()) return false;
  if (g.rules[root.rule].head != g.start) return false;
  if (!root.lhs_args.empty()) return false;
  if (root.yield != input) return false;
  return check_derivation(g, root);
}

namespace {

const char* role_name(ChildRole role) {
  switch (role) {
    case ChildRole::Predicate: return "pred";
    case ChildRole::QuantifierBody: return "quant";
    case ChildRole::SlashNumerator: return "slash";
  }
  return "?";
}

void render(const Grammar& g, const DerivNode& node, std::ostringstream& out, int depth) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  const Rule& r = g.rules.at(node.rule);
  out << indent << "{rule=" << node.rule << " head=" << g.symbols.nonterminal_name(r.head)
      << " span=" << node.span_begin << ".." << node.span_end;
  if (!node.lhs_args.empty()) {
    out << " args=[";
    for (std::size_t i = 0; i < node.lhs_args.size(); ++i) {
      if (i) out << "; ";
      out << '"' << word_to_string(g, node.lhs_args[i]) << '"';
    }
    out << ']';
  }
  out << " yield=\"" << word_to_string(g, node.yield) << '"';
  if (!node.bindings.empty()) {
    out << " bind{";
    for (std::size_t v = 0; v < node.bindings.size(); ++v) {
      if (v) out << ' ';
      out << r.var_names.at(v) << "=\"" << word_to_string(g, node.bindings[v]) << '"';
    }
    out << '}';
  }
  if (node.children.empty()) {
    out << "}";
    return;
  }
  out << "\n";
  for (std::size_t ci = 0; ci < node.children.size(); ++ci) {
    const auto& c = node.children[ci];
    out << indent << "  item " << c.item << " " << role_name(c.role) << ":\n";
    if (c.node) render(g, *c.node, out, depth + 1);
    if (ci + 1 < node.children.size()) out << "\n";
  }
  out << "\n" << indent << "}";
}

}  // namespace

std::string derivation_to_text(const Grammar& g, const DerivNode& node) {
  std::ostringstream out;
  render(g, node, out, 0);
  out << "\n";
  return out.str();
}

}  // namespace lmg

// Core grammar model: interning, validation, rule instantiation.

#include "lmg/grammar.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lmg {

NonterminalId SymbolTable::intern_nonterminal(std::string_view name) {
  auto it = nonterminal_ids_.find(std::string(name));
  if (it != nonterminal_ids_.end()) return it->second;
  NonterminalId id = static_cast<NonterminalId>(nonterminals_.size());
  nonterminals_.emplace_back(name);
  nonterminal_ids_.emplace(std::string(name), id);
  return id;
}

TerminalId SymbolTable::intern_terminal(std::string_view text) {
  auto it = terminal_ids_.find(std::string(text));
  if (it != terminal_ids_.end()) return it->second;
  TerminalId id = static_cast<TerminalId>(terminals_.size());
  terminals_.emplace_back(text);
  terminal_ids_.emplace(std::string(text), id);
  return id;
}

std::optional<NonterminalId> SymbolTable::find_nonterminal(std::string_view name) const {
  auto it = nonterminal_ids_.find(std::string(name));
  if (it == nonterminal_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TerminalId> SymbolTable::find_terminal(std::string_view text) const {
  auto it = terminal_ids_.find(std::string(text));
  if (it == terminal_ids_.end()) return std::nullopt;
  return it->second;
}

bool term_is_literal(const Term& t) {
  return std::all_of(t.begin(), t.end(), [](const TermElement& e) {
    return std::holds_alternative<TerminalRef>(e);
  });
}

Word literal_word(const Term& t) {
  Word w;
  w.reserve(t.size());
  for (const auto& e : t) w.push_back(std::get<TerminalRef>(e).id);
  return w;
}

std::optional<VariableId> term_single_var(const Term& t) {
  if (t.size() != 1) return std::nullopt;
  if (const auto* v = std::get_if<VarRef>(&t[0])) return v->id;
  return std::nullopt;
}

Term substitute_term(const Term& t, const Assignment& a) {
  Term out;
  out.reserve(t.size());
  for (const auto& e : t) {
    if (const auto* v = std::get_if<VarRef>(&e)) {
      auto it = a.find(v->id);
      if (it != a.end()) {
        for (TerminalId tid : it->second) out.push_back(TerminalRef{tid});
        continue;
      }
    }
    out.push_back(e);
  }
  return out;
}

const Predicate& item_predicate(const Item& it) {
  return std::visit(
      overloaded{
          [](const PredItem& p) -> const Predicate& { return p.pred; },
          [](const QuantItem& q) -> const Predicate& { return q.body; },
          [](const SlashItem& s) -> const Predicate& { return s.numerator; },
      },
      it);
}

namespace {

Predicate substitute_predicate(const Predicate& p, const Assignment& a) {
  if (const auto* np = std::get_if<NonterminalPred>(&p)) {
    NonterminalPred out{np->head, {}};
    out.args.reserve(np->args.size());
    for (const auto& t : np->args) out.args.push_back(substitute_term(t, a));
    return out;
  }
  return p;
}

// Walks every variable occurrence in an item's terms, in RHS order.
template <class Fn>
void for_each_var_use(const Item& it, Fn&& fn) {
  auto walk_term = [&](const Term& t) {
    for (const auto& e : t)
      if (const auto* v = std::get_if<VarRef>(&e)) fn(v->id);
  };
  auto walk_pred = [&](const Predicate& p) {
    if (const auto* np = std::get_if<NonterminalPred>(&p))
      for (const auto& t : np->args) walk_term(t);
  };
  std::visit(overloaded{
                 [&](const PredItem& p) { walk_pred(p.pred); },
                 [&](const QuantItem& q) { walk_pred(q.body); },
                 [&](const SlashItem& s) {
                   walk_pred(s.numerator);
                   walk_term(s.denominator);
                 },
             },
             it);
}

}  // namespace

InstantiatedRule instantiate(const Rule& r, const Assignment& a) {
  InstantiatedRule out;
  out.lhs_args.reserve(r.patterns.size());
  for (const auto& pattern : r.patterns) {
    Word arg;
    for (VariableId v : pattern) {
      auto it = a.find(v);
      if (it == a.end()) {
        std::string name = v < r.var_names.size() ? r.var_names[v] : "?";
        throw std::invalid_argument("instantiate: missing assignment for variable " + name);
      }
      arg.insert(arg.end(), it->second.begin(), it->second.end());
    }
    out.lhs_args.push_back(std::move(arg));
  }
  out.rhs.reserve(r.rhs.size());
  for (const auto& item : r.rhs) {
    out.rhs.push_back(std::visit(
        overloaded{
            [&](const PredItem& p) -> Item { return PredItem{substitute_predicate(p.pred, a)}; },
            [&](const QuantItem& q) -> Item {
              return QuantItem{q.binder, substitute_predicate(q.body, a)};
            },
            [&](const SlashItem& s) -> Item {
              return SlashItem{substitute_predicate(s.numerator, a),
                               substitute_term(s.denominator, a)};
            },
        },
        item));
  }
  return out;
}

ValidationReport validate_grammar(const Grammar& g) {
  ValidationReport report;
  auto error = [&](std::optional<std::uint32_t> rule, std::string msg) {
    report.diagnostics.push_back({rule, Severity::Error, std::move(msg)});
  };

  const std::size_t n_nonterminals = g.symbols.nonterminal_count();
  if (g.arity.size() != n_nonterminals)
    error(std::nullopt, "arity table does not cover every nonterminal");

  if (g.start >= n_nonterminals) {
    error(std::nullopt, "start symbol is not a known nonterminal");
  } else if (g.start < g.arity.size() && g.arity[g.start] != 0) {
    error(std::nullopt, "start symbol must be nullary");
  }

  // Namespace disjointness: a spelling may act as only one of nonterminal,
  // terminal, variable.
  std::set<std::string> var_spellings;
  for (const auto& r : g.rules)
    for (const auto& name : r.var_names) var_spellings.insert(name);
  for (std::size_t i = 0; i < n_nonterminals; ++i) {
    const std::string& name = g.symbols.nonterminal_name(static_cast<NonterminalId>(i));
    if (g.symbols.find_terminal(name))
      error(std::nullopt, "name " + name + " used as both nonterminal and terminal");
    if (var_spellings.count(name))
      error(std::nullopt, "name " + name + " used as both nonterminal and variable");
  }
  for (std::size_t i = 0; i < g.symbols.terminal_count(); ++i) {
    const std::string& text = g.symbols.terminal_text(static_cast<TerminalId>(i));
    if (var_spellings.count(text))
      error(std::nullopt, "name " + text + " used as both terminal and variable");
  }

  for (std::uint32_t ri = 0; ri < g.rules.size(); ++ri) {
    const Rule& r = g.rules[ri];
    auto var_name = [&](VariableId v) -> std::string {
      return v < r.var_names.size() ? r.var_names[v] : "#" + std::to_string(v);
    };

    if (r.head >= n_nonterminals) {
      error(ri, "rule head is not a known nonterminal");
      continue;
    }
    const std::string& head_name = g.symbols.nonterminal_name(r.head);
    if (r.head < g.arity.size() && r.patterns.size() != g.arity[r.head])
      error(ri, head_name + " declared with " + std::to_string(g.arity[r.head]) +
                    " argument(s) but this rule has " + std::to_string(r.patterns.size()) +
                    " pattern(s)");

    // LHS linearity and variable id sanity.
    std::set<VariableId> lhs_vars;
    bool lhs_ok = true;
    for (const auto& pattern : r.patterns) {
      for (VariableId v : pattern) {
        if (v >= r.var_names.size()) {
          error(ri, "invalid variable reference in LHS pattern");
          lhs_ok = false;
          continue;
        }
        if (!lhs_vars.insert(v).second) {
          error(ri, "repeated variable " + var_name(v) + " in LHS patterns");
          lhs_ok = false;
        }
      }
    }
    (void)lhs_ok;

    // Quantifier binders: fresh, never reused.
    std::set<VariableId> binders;
    for (const auto& item : r.rhs) {
      if (const auto* q = std::get_if<QuantItem>(&item)) {
        if (q->binder >= r.var_names.size()) {
          error(ri, "invalid variable reference in quantifier binder");
          continue;
        }
        if (lhs_vars.count(q->binder))
          error(ri, "quantifier binder " + var_name(q->binder) + " reuses an LHS variable");
        if (!binders.insert(q->binder).second)
          error(ri, "quantifier binder " + var_name(q->binder) + " bound more than once");
      }
    }

    // Every RHS variable occurrence must be LHS- or quantifier-bound, and all
    // nonterminal uses must respect the arity table.
    for (std::uint32_t ii = 0; ii < r.rhs.size(); ++ii) {
      const Item& item = r.rhs[ii];
      for_each_var_use(item, [&](VariableId v) {
        if (v >= r.var_names.size()) {
          error(ri, "invalid variable reference in RHS item " + std::to_string(ii));
          return;
        }
        if (!lhs_vars.count(v) && !binders.count(v))
          error(ri, "unbound variable " + var_name(v));
      });
      auto check_pred = [&](const Predicate& p) {
        if (const auto* np = std::get_if<NonterminalPred>(&p)) {
          if (np->head >= n_nonterminals) {
            error(ri, "unknown nonterminal in RHS item " + std::to_string(ii));
            return;
          }
          if (np->head < g.arity.size() && np->args.size() != g.arity[np->head])
            error(ri, g.symbols.nonterminal_name(np->head) + " used with " +
                          std::to_string(np->args.size()) + " argument(s), declared " +
                          std::to_string(g.arity[np->head]));
        }
      };
      std::visit(overloaded{
                     [&](const PredItem& p) { check_pred(p.pred); },
                     [&](const QuantItem& q) { check_pred(q.body); },
                     [&](const SlashItem& s) { check_pred(s.numerator); },
                 },
                 item);
    }
  }
  return report;
}

Word to_word(const Grammar& g, std::span<const std::string> tokens) {
  Word w;
  w.reserve(tokens.size());
  std::unordered_map<std::string, TerminalId> fresh;
  for (const auto& tok : tokens) {
    if (auto id = g.symbols.find_terminal(tok)) {
      w.push_back(*id);
      continue;
    }
    auto [it, inserted] = fresh.emplace(
        tok, static_cast<TerminalId>(g.symbols.terminal_count() + fresh.size()));
    w.push_back(it->second);
  }
  return w;
}

std::string word_to_string(const Grammar& g, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    if (w[i] < g.symbols.terminal_count())
      out += g.symbols.terminal_text(w[i]);
    else
      out += '?';
  }
  return out;
}

namespace {

bool terms_equal(const Grammar& ga, const Rule& ra, const Term& ta, const Grammar& gb,
                 const Rule& rb, const Term& tb) {
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const bool a_term = std::holds_alternative<TerminalRef>(ta[i]);
    if (a_term != std::holds_alternative<TerminalRef>(tb[i])) return false;
    if (a_term) {
      if (ga.symbols.terminal_text(std::get<TerminalRef>(ta[i]).id) !=
          gb.symbols.terminal_text(std::get<TerminalRef>(tb[i]).id))
        return false;
    } else {
      VariableId va = std::get<VarRef>(ta[i]).id;
      VariableId vb = std::get<VarRef>(tb[i]).id;
      if (va >= ra.var_names.size() || vb >= rb.var_names.size()) return false;
      if (ra.var_names[va] != rb.var_names[vb]) return false;
    }
  }
  return true;
}

bool preds_equal(const Grammar& ga, const Rule& ra, const Predicate& pa, const Grammar& gb,
                 const Rule& rb, const Predicate& pb) {
  if (pa.index() != pb.index()) return false;
  if (const auto* t = std::get_if<TerminalPred>(&pa)) {
    return ga.symbols.terminal_text(t->terminal) ==
           gb.symbols.terminal_text(std::get<TerminalPred>(pb).terminal);
  }
  const auto& na = std::get<NonterminalPred>(pa);
  const auto& nb = std::get<NonterminalPred>(pb);
  if (ga.symbols.nonterminal_name(na.head) != gb.symbols.nonterminal_name(nb.head)) return false;
  if (na.args.size() != nb.args.size()) return false;
  for (std::size_t i = 0; i < na.args.size(); ++i)
    if (!terms_equal(ga, ra, na.args[i], gb, rb, nb.args[i])) return false;
  return true;
}

}  // namespace

bool grammars_equal(const Grammar& a, const Grammar& b) {
  if (a.rules.size() != b.rules.size()) return false;
  if (a.symbols.nonterminal_name(a.start) != b.symbols.nonterminal_name(b.start)) return false;
  // Arity tables must agree on the union of names.
  for (std::size_t i = 0; i < a.symbols.nonterminal_count(); ++i) {
    const std::string& name = a.symbols.nonterminal_name(static_cast<NonterminalId>(i));
    auto id_b = b.symbols.find_nonterminal(name);
    if (!id_b || b.arity.at(*id_b) != a.arity.at(i)) return false;
  }
  for (std::size_t i = 0; i < b.symbols.nonterminal_count(); ++i) {
    if (!a.symbols.find_nonterminal(b.symbols.nonterminal_name(static_cast<NonterminalId>(i))))
      return false;
  }
  for (std::size_t ri = 0; ri < a.rules.size(); ++ri) {
    const Rule& ra = a.rules[ri];
    const Rule& rb = b.rules[ri];
    if (a.symbols.nonterminal_name(ra.head) != b.symbols.nonterminal_name(rb.head)) return false;
    if (ra.patterns.size() != rb.patterns.size()) return false;
    for (std::size_t pi = 0; pi < ra.patterns.size(); ++pi) {
      const auto& pa = ra.patterns[pi];
      const auto& pb = rb.patterns[pi];
      if (pa.size() != pb.size()) return false;
      for (std::size_t vi = 0; vi < pa.size(); ++vi)
        if (ra.var_names.at(pa[vi]) != rb.var_names.at(pb[vi])) return false;
    }
    if (ra.rhs.size() != rb.rhs.size()) return false;
    for (std::size_t ii = 0; ii < ra.rhs.size(); ++ii) {
      const Item& ia = ra.rhs[ii];
      const Item& ib = rb.rhs[ii];
      if (ia.index() != ib.index()) return false;
      bool same = std::visit(
          overloaded{
              [&](const PredItem& p) {
                return preds_equal(a, ra, p.pred, b, rb, std::get<PredItem>(ib).pred);
              },
              [&](const QuantItem& q) {
                const auto& qb = std::get<QuantItem>(ib);
                return ra.var_names.at(q.binder) == rb.var_names.at(qb.binder) &&
                       preds_equal(a, ra, q.body, b, rb, qb.body);
              },
              [&](const SlashItem& s) {
                const auto& sb = std::get<SlashItem>(ib);
                return preds_equal(a, ra, s.numerator, b, rb, sb.numerator) &&
                       terms_equal(a, ra, s.denominator, b, rb, sb.denominator);
              },
          },
          ia);
      if (!same) return false;
    }
  }
  return true;
}

}  // namespace lmg

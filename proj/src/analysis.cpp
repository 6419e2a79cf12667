// Restriction-class analysis and the left-recursion approximation.

#include "lmg/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lmg {

namespace {

// Argument positions of every predicate an item mentions, with the slash
// denominator excluded (it is not a predicate argument).
template <class Fn>
void for_each_pred_arg(const Item& item, Fn&& fn) {
  auto walk = [&](const Predicate& p) {
    if (const auto* np = std::get_if<NonterminalPred>(&p))
      for (std::uint32_t ai = 0; ai < np->args.size(); ++ai) fn(np->args[ai], ai);
  };
  std::visit(overloaded{
                 [&](const PredItem& p) { walk(p.pred); },
                 [&](const QuantItem& q) { walk(q.body); },
                 [&](const SlashItem& s) { walk(s.numerator); },
             },
             item);
}

template <class Fn>
void for_each_var_occurrence(const Item& item, Fn&& fn) {
  // fn(variable, is_denominator)
  auto walk_term = [&](const Term& t, bool denom) {
    for (const auto& e : t)
      if (const auto* v = std::get_if<VarRef>(&e)) fn(v->id, denom);
  };
  auto walk_pred = [&](const Predicate& p) {
    if (const auto* np = std::get_if<NonterminalPred>(&p))
      for (const auto& t : np->args) walk_term(t, false);
  };
  std::visit(overloaded{
                 [&](const PredItem& p) { walk_pred(p.pred); },
                 [&](const QuantItem& q) { walk_pred(q.body); },
                 [&](const SlashItem& s) {
                   walk_pred(s.numerator);
                   walk_term(s.denominator, true);
                 },
             },
             item);
}

}  // namespace

NonCombinatorialReport check_non_combinatorial(const Grammar& g) {
  NonCombinatorialReport report;
  for (std::uint32_t ri = 0; ri < g.rules.size(); ++ri) {
    for (std::uint32_t ii = 0; ii < g.rules[ri].rhs.size(); ++ii) {
      for_each_pred_arg(g.rules[ri].rhs[ii], [&](const Term& t, std::uint32_t ai) {
        if (term_single_var(t)) return;
        if (term_is_literal(t)) {
          report.literal_args.push_back({ri, ii, ai});
          report.strict_ok = false;
          return;
        }
        report.offenders.push_back({ri, ii, ai});
        report.ok = false;
        report.strict_ok = false;
      });
    }
  }
  return report;
}

LeftBindingReport check_left_binding(const Grammar& g) {
  LeftBindingReport report;
  for (std::uint32_t ri = 0; ri < g.rules.size(); ++ri) {
    const Rule& r = g.rules[ri];
    auto vname = [&](VariableId v) {
      return v < r.var_names.size() ? r.var_names[v] : "#" + std::to_string(v);
    };

    // --- condition 2: every multi-variable vector is slash-resolved in order.
    // def_item[v] = index of the unique slash item defining prefix variable v.
    std::map<VariableId, std::uint32_t> def_item;
    for (const auto& pattern : r.patterns) {
      if (pattern.size() < 2) continue;
      const std::size_t n = pattern.size();
      for (std::size_t vi = 0; vi + 1 < n; ++vi) {
        VariableId v = pattern[vi];
        std::set<std::uint32_t> items_with_v;
        bool non_denominator_use = false;
        std::optional<std::uint32_t> denom_item;
        for (std::uint32_t ii = 0; ii < r.rhs.size(); ++ii) {
          bool here = false;
          bool as_denom = false;
          for_each_var_occurrence(r.rhs[ii], [&](VariableId u, bool denom) {
            if (u != v) return;
            here = true;
            if (denom && std::holds_alternative<SlashItem>(r.rhs[ii]) &&
                term_single_var(std::get<SlashItem>(r.rhs[ii]).denominator) == v)
              as_denom = true;
            else
              non_denominator_use = true;
          });
          if (here) {
            items_with_v.insert(ii);
            if (as_denom) denom_item = ii;
          }
        }
        if (items_with_v.size() != 1) {
          report.condition2.push_back({ri, items_with_v.empty() ? 0u : *items_with_v.begin(),
                                       vname(v),
                                       "vector variable " + vname(v) +
                                           " must occur exactly once, as a slash denominator"});
          report.ok = false;
        } else if (!denom_item || non_denominator_use) {
          report.condition2.push_back({ri, *items_with_v.begin(), vname(v),
                                       "vector variable " + vname(v) +
                                           " must occur as the denominator of a slash item"});
          report.ok = false;
        } else {
          def_item[v] = *denom_item;
        }
      }
      // Ordering: the item defining x_l precedes every item referring to x_k
      // for l < k; the trailing variable may occur in any item after the last
      // prefix slash.
      std::optional<std::uint32_t> prev;
      for (std::size_t vi = 0; vi + 1 < n; ++vi) {
        auto it = def_item.find(pattern[vi]);
        if (it == def_item.end()) {
          prev.reset();
          continue;
        }
        if (prev && it->second <= *prev) {
          report.condition2.push_back({ri, it->second, vname(pattern[vi]),
                                       "slash items for vector " + vname(pattern[vi]) +
                                           " appear out of index order"});
          report.ok = false;
        }
        prev = it->second;
      }
      if (prev) {
        VariableId last = pattern[n - 1];
        for (std::uint32_t ii = 0; ii < r.rhs.size(); ++ii) {
          bool uses_last = false;
          for_each_var_occurrence(r.rhs[ii], [&](VariableId u, bool) { uses_last |= (u == last); });
          if (uses_last && ii <= *prev) {
            report.condition2.push_back({ri, ii, vname(last),
                                         "vector variable " + vname(last) +
                                             " occurs left of the slash items that determine it"});
            report.ok = false;
          }
        }
      }
    }

    // --- condition 1: left-to-right scan; uses must be bound.
    std::set<VariableId> bound;
    struct PendingVector {
      std::vector<VariableId> vars;
      std::size_t next = 0;
    };
    std::vector<PendingVector> pending;
    for (const auto& pattern : r.patterns) {
      if (pattern.size() == 1)
        bound.insert(pattern[0]);
      else if (pattern.size() >= 2)
        pending.push_back({pattern, 0});
    }
    for (std::uint32_t ii = 0; ii < r.rhs.size(); ++ii) {
      const Item& item = r.rhs[ii];
      // A slash whose denominator is the front of an unresolved vector
      // defines that variable rather than using it.
      std::optional<VariableId> defines;
      PendingVector* defining_vec = nullptr;
      if (const auto* s = std::get_if<SlashItem>(&item)) {
        if (auto v = term_single_var(s->denominator)) {
          for (auto& pv : pending) {
            if (pv.next + 1 < pv.vars.size() && pv.vars[pv.next] == *v && !bound.count(*v)) {
              defines = *v;
              defining_vec = &pv;
              break;
            }
          }
        }
      }
      for_each_var_occurrence(item, [&](VariableId v, bool denom) {
        if (defines && denom && v == *defines) return;
        if (!bound.count(v)) {
          report.condition1.push_back({ri, ii, vname(v),
                                       "variable " + vname(v) + " is used before it is bound"});
          report.ok = false;
        }
      });
      if (const auto* q = std::get_if<QuantItem>(&item)) bound.insert(q->binder);
      if (defines) {
        bound.insert(*defines);
        defining_vec->next++;
        if (defining_vec->next + 1 == defining_vec->vars.size()) {
          bound.insert(defining_vec->vars[defining_vec->next]);  // trailing variable
          defining_vec->next++;
        }
      }
    }
  }
  return report;
}

std::vector<bool> nullable_heads(const Grammar& g) {
  std::vector<bool> nullable(g.symbols.nonterminal_count(), false);
  auto item_nullable = [&](const Item& item) {
    if (std::holds_alternative<SlashItem>(item)) return true;  // consumes no input
    const Predicate& p = item_predicate(item);
    if (const auto* np = std::get_if<NonterminalPred>(&p)) return bool(nullable[np->head]);
    return false;  // a terminal consumes one token
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : g.rules) {
      if (nullable[r.head]) continue;
      bool all = true;
      for (const Item& item : r.rhs)
        if (!item_nullable(item)) {
          all = false;
          break;
        }
      if (all) {
        nullable[r.head] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

LeftRecursionReport check_left_recursion(const Grammar& g) {
  LeftRecursionReport report;
  const std::size_t n = g.symbols.nonterminal_count();
  std::vector<bool> nullable = nullable_heads(g);

  // Edge A -> B when a rule of A mentions B in an item preceded only by
  // input-nullable items (slash numerators count: they run at the current
  // position even though they consume nothing).
  std::vector<std::set<NonterminalId>> edges(n);
  for (const Rule& r : g.rules) {
    for (const Item& item : r.rhs) {
      const Predicate& p = item_predicate(item);
      if (const auto* np = std::get_if<NonterminalPred>(&p)) edges[r.head].insert(np->head);
      bool item_nullable =
          std::holds_alternative<SlashItem>(item) ||
          (std::holds_alternative<NonterminalPred>(p) &&
           nullable[std::get<NonterminalPred>(p).head]);
      if (!item_nullable) break;
    }
  }

  // Cycle search (iterative DFS, 3-color).
  std::vector<int> color(n, 0);
  std::vector<NonterminalId> stack;
  std::vector<NonterminalId> cycle;

  auto dfs = [&](NonterminalId root) -> bool {
    struct Frame {
      NonterminalId node;
      std::set<NonterminalId>::const_iterator next;
    };
    std::vector<Frame> frames;
    color[root] = 1;
    stack.push_back(root);
    frames.push_back({root, edges[root].begin()});
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next == edges[f.node].end()) {
        color[f.node] = 2;
        stack.pop_back();
        frames.pop_back();
        continue;
      }
      NonterminalId to = *f.next++;
      if (color[to] == 1) {
        auto it = std::find(stack.begin(), stack.end(), to);
        cycle.assign(it, stack.end());
        cycle.push_back(to);
        return true;
      }
      if (color[to] == 0) {
        color[to] = 1;
        stack.push_back(to);
        frames.push_back({to, edges[to].begin()});
      }
    }
    return false;
  };

  for (NonterminalId v = 0; v < n; ++v) {
    if (color[v] == 0 && dfs(v)) {
      report.verdict = LeftRecursionVerdict::PossiblyRecursive;
      report.witness_cycle = cycle;
      std::ostringstream text;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) text << " -> ";
        text << g.symbols.nonterminal_name(cycle[i]);
      }
      report.witness_text = text.str();
      return report;
    }
  }
  return report;
}

ComplexityProfile complexity_profile(const Grammar& g) {
  ComplexityProfile profile;
  for (const Rule& r : g.rules)
    profile.m = std::max(profile.m, static_cast<std::uint32_t>(r.rhs.size()));
  for (std::uint32_t a : g.arity) profile.p = std::max(profile.p, a);
  profile.time_exponent = 1 + profile.m + 2 * profile.p;
  profile.space_exponent = 2 + 2 * profile.p;
  return profile;
}

AnalysisReport analyze(const Grammar& g) {
  return {check_non_combinatorial(g), check_left_binding(g), check_left_recursion(g),
          complexity_profile(g)};
}

Eligibility engine_eligibility(const AnalysisReport& report) {
  Eligibility e;
  if (!report.non_combinatorial.ok) {
    std::set<std::uint32_t> rules;
    for (const auto& o : report.non_combinatorial.offenders) rules.insert(o.rule);
    std::ostringstream msg;
    msg << "combinatorial argument in rule";
    if (rules.size() > 1) msg << "s";
    for (auto it = rules.begin(); it != rules.end(); ++it)
      msg << (it == rules.begin() ? " " : ", ") << *it;
    e.reasons.push_back(msg.str());
  }
  if (!report.left_binding.ok) {
    std::set<std::uint32_t> rules;
    for (const auto& o : report.left_binding.condition1) rules.insert(o.rule);
    for (const auto& o : report.left_binding.condition2) rules.insert(o.rule);
    std::ostringstream msg;
    msg << "not left-binding (rule";
    if (rules.size() > 1) msg << "s";
    for (auto it = rules.begin(); it != rules.end(); ++it)
      msg << (it == rules.begin() ? " " : ", ") << *it;
    msg << ")";
    e.reasons.push_back(msg.str());
  }
  if (report.left_recursion.verdict == LeftRecursionVerdict::PossiblyRecursive) {
    e.reasons.push_back("possible left recursion (" + report.left_recursion.witness_text + ")");
  }
  e.engine = e.reasons.empty() ? EngineClass::PolyEligible : EngineClass::GeneralOnly;
  return e;
}

std::string analysis_to_text(const AnalysisReport& report, const Grammar& g) {
  std::ostringstream out;
  auto rule_head = [&](std::uint32_t ri) {
    return ri < g.rules.size() ? g.symbols.nonterminal_name(g.rules[ri].head) : "?";
  };
  out << "non-combinatorial: " << (report.non_combinatorial.ok ? "yes" : "no");
  if (!report.non_combinatorial.offenders.empty()) {
    out << " (";
    for (std::size_t i = 0; i < report.non_combinatorial.offenders.size(); ++i) {
      const auto& o = report.non_combinatorial.offenders[i];
      if (i) out << ", ";
      out << "rule " << o.rule << ": " << rule_head(o.rule) << " item " << o.item << " arg "
          << o.arg;
    }
    out << ")";
  }
  if (!report.non_combinatorial.literal_args.empty())
    out << " [literal arguments admitted: " << report.non_combinatorial.literal_args.size() << "]";
  out << "\n";
  out << "left-binding: " << (report.left_binding.ok ? "yes" : "no") << "\n";
  for (const auto& o : report.left_binding.condition1)
    out << "  condition 1, rule " << o.rule << " item " << o.item << ": " << o.reason << "\n";
  for (const auto& o : report.left_binding.condition2)
    out << "  condition 2, rule " << o.rule << " item " << o.item << ": " << o.reason << "\n";
  out << "left-recursion: "
      << (report.left_recursion.verdict == LeftRecursionVerdict::ProvablyFree
              ? "provably-free"
              : "possibly-recursive");
  if (!report.left_recursion.witness_text.empty())
    out << " (" << report.left_recursion.witness_text << ")";
  out << "\n";
  Eligibility e = engine_eligibility(report);
  out << "eligible: " << (e.engine == EngineClass::PolyEligible ? "poly" : "general-only");
  for (const auto& reason : e.reasons) out << "\n  reason: " << reason;
  out << "\n";
  out << "m: " << report.profile.m << "\n";
  out << "p: " << report.profile.p << "\n";
  out << "time-exponent: " << report.profile.time_exponent << "\n";
  out << "space-exponent: " << report.profile.space_exponent << "\n";
  return out.str();
}

std::string analysis_to_machine(const AnalysisReport& report) {
  std::ostringstream out;
  Eligibility e = engine_eligibility(report);
  out << "non_combinatorial=" << (report.non_combinatorial.ok ? "yes" : "no") << "\n";
  out << "strict_non_combinatorial=" << (report.non_combinatorial.strict_ok ? "yes" : "no")
      << "\n";
  out << "left_binding=" << (report.left_binding.ok ? "yes" : "no") << "\n";
  out << "left_recursion="
      << (report.left_recursion.verdict == LeftRecursionVerdict::ProvablyFree
              ? "provably-free"
              : "possibly-recursive")
      << "\n";
  out << "eligible=" << (e.engine == EngineClass::PolyEligible ? "poly" : "general-only") << "\n";
  out << "m=" << report.profile.m << "\n";
  out << "p=" << report.profile.p << "\n";
  out << "time_exponent=" << report.profile.time_exponent << "\n";
  out << "space_exponent=" << report.profile.space_exponent << "\n";
  return out.str();
}

}  // namespace lmg

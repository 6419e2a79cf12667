#include "lmg/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lmg {

namespace {

std::optional<std::uint32_t> find_name(const std::vector<std::string>& names,
                                       const std::string& name) {
  for (std::uint32_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

// The spelling a quantified predicate is keyed by for placeholder purposes.
std::string body_name(const Grammar& g, const Predicate& p) {
  if (const auto* tp = std::get_if<TerminalPred>(&p)) return g.symbols.terminal_text(tp->terminal);
  return g.symbols.nonterminal_name(std::get<NonterminalPred>(p).head);
}

// One epsilon placeholder per distinct quantified predicate, named after it,
// in first-occurrence order; names are kept clear of every existing spelling.
std::vector<std::pair<std::string, std::string>> placeholder_list(const Grammar& g) {
  std::set<std::string> taken;
  for (std::uint32_t i = 0; i < g.symbols.nonterminal_count(); ++i)
    taken.insert(g.symbols.nonterminal_name(i));
  for (std::uint32_t i = 0; i < g.symbols.terminal_count(); ++i)
    taken.insert(g.symbols.terminal_text(i));

  std::vector<std::pair<std::string, std::string>> list;
  auto have = [&](const std::string& key) {
    for (const auto& [k, v] : list)
      if (k == key) return true;
    return false;
  };
  for (const Rule& r : g.rules) {
    for (const Item& item : r.rhs) {
      const auto* q = std::get_if<QuantItem>(&item);
      if (!q) continue;
      std::string key = body_name(g, q->body);
      if (have(key)) continue;
      std::string name = "X_" + key;
      while (taken.count(name)) name += "'";
      taken.insert(name);
      list.emplace_back(key, name);
    }
  }
  return list;
}

std::string placeholder_for(const std::vector<std::pair<std::string, std::string>>& list,
                            const std::string& key) {
  for (const auto& [k, v] : list)
    if (k == key) return v;
  throw std::invalid_argument("no placeholder for quantified predicate " + key);
}

}  // namespace

std::uint32_t cf_intern_nonterminal(CFGrammar& cf, const std::string& name) {
  if (auto id = find_name(cf.nonterminals, name)) return *id;
  cf.nonterminals.push_back(name);
  return static_cast<std::uint32_t>(cf.nonterminals.size() - 1);
}

std::uint32_t cf_intern_terminal(CFGrammar& cf, const std::string& text) {
  if (auto id = find_name(cf.terminals, text)) return *id;
  cf.terminals.push_back(text);
  return static_cast<std::uint32_t>(cf.terminals.size() - 1);
}

std::string cf_to_text(const CFGrammar& cf) {
  std::ostringstream out;
  out << "start " << cf.nonterminals.at(cf.start) << ";\n";
  for (const CFRule& r : cf.rules) {
    out << cf.nonterminals.at(r.head) << "() ->";
    for (const CFSymbol& s : r.rhs) {
      if (s.terminal)
        out << " \"" << cf.terminals.at(s.id) << "\"";
      else
        out << " " << cf.nonterminals.at(s.id);
    }
    out << " ;\n";
  }
  return out.str();
}

CFGrammar backbone_grammar(const Grammar& g) {
  CFGrammar cf;
  for (std::uint32_t i = 0; i < g.symbols.nonterminal_count(); ++i)
    cf_intern_nonterminal(cf, g.symbols.nonterminal_name(i));
  for (std::uint32_t i = 0; i < g.symbols.terminal_count(); ++i)
    cf_intern_terminal(cf, g.symbols.terminal_text(i));
  cf.start = g.start;

  auto placeholders = placeholder_list(g);
  for (const auto& [key, name] : placeholders) cf_intern_nonterminal(cf, name);

  auto image = [&](const Predicate& p) -> CFSymbol {
    if (const auto* tp = std::get_if<TerminalPred>(&p)) return {true, tp->terminal};
    return {false, std::get<NonterminalPred>(p).head};
  };

  for (const Rule& r : g.rules) {
    CFRule cr;
    cr.head = r.head;
    for (const Item& item : r.rhs) {
      std::visit(overloaded{
                     [&](const PredItem& p) { cr.rhs.push_back(image(p.pred)); },
                     [&](const QuantItem& q) {
                       std::string name = placeholder_for(placeholders, body_name(g, q.body));
                       cr.rhs.push_back({false, *find_name(cf.nonterminals, name)});
                     },
                     [&](const SlashItem& s) { cr.rhs.push_back(image(s.numerator)); },
                 },
                 item);
    }
    cf.rules.push_back(std::move(cr));
  }
  for (const auto& [key, name] : placeholders)
    cf.rules.push_back({*find_name(cf.nonterminals, name), {}});

  // Quantified-only nonterminals leave no occurrence behind (their items all
  // became placeholders), so their rules are dead weight; drop everything the
  // start symbol can no longer reach.
  std::vector<bool> reachable(cf.nonterminals.size(), false);
  reachable[cf.start] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const CFRule& r : cf.rules) {
      if (!reachable[r.head]) continue;
      for (const CFSymbol& s : r.rhs) {
        if (!s.terminal && !reachable[s.id]) {
          reachable[s.id] = true;
          changed = true;
        }
      }
    }
  }
  CFGrammar pruned;
  std::vector<std::uint32_t> remap(cf.nonterminals.size(), 0);
  for (std::uint32_t i = 0; i < cf.nonterminals.size(); ++i)
    if (reachable[i]) remap[i] = cf_intern_nonterminal(pruned, cf.nonterminals[i]);
  pruned.terminals = cf.terminals;
  pruned.start = remap[cf.start];
  for (const CFRule& r : cf.rules) {
    if (!reachable[r.head]) continue;
    CFRule pr;
    pr.head = remap[r.head];
    for (const CFSymbol& s : r.rhs)
      pr.rhs.push_back(s.terminal ? s : CFSymbol{false, remap[s.id]});
    pruned.rules.push_back(std::move(pr));
  }
  return pruned;
}

BackboneTree backbone_tree(const Grammar& g, const DerivNode& node) {
  auto placeholders = placeholder_list(g);

  std::function<BackboneTree(const DerivNode&)> build = [&](const DerivNode& n) -> BackboneTree {
    const Rule& r = g.rules.at(n.rule);
    BackboneTree t;
    t.label = g.symbols.nonterminal_name(r.head);

    auto child_node = [&](std::size_t item, ChildRole role) -> std::shared_ptr<const DerivNode> {
      for (const auto& c : n.children)
        if (c.item == item && c.role == role) return c.node;
      return nullptr;
    };

    for (std::size_t ii = 0; ii < r.rhs.size(); ++ii) {
      const Item& item = r.rhs[ii];
      if (const auto* p = std::get_if<PredItem>(&item)) {
        if (const auto* tp = std::get_if<TerminalPred>(&p->pred)) {
          BackboneTree leaf;
          leaf.label = g.symbols.terminal_text(tp->terminal);
          leaf.leaf = true;
          t.children.push_back(std::move(leaf));
        } else {
          auto c = child_node(ii, ChildRole::Predicate);
          if (!c) throw std::invalid_argument("derivation lacks a child for a predicate item");
          t.children.push_back(build(*c));
        }
        continue;
      }
      if (const auto* q = std::get_if<QuantItem>(&item)) {
        BackboneTree ph;
        ph.label = placeholder_for(placeholders, body_name(g, q->body));
        ph.extraposed = child_node(ii, ChildRole::QuantifierBody);
        t.children.push_back(std::move(ph));
        continue;
      }
      const auto& s = std::get<SlashItem>(item);
      if (const auto* tp = std::get_if<TerminalPred>(&s.numerator)) {
        BackboneTree leaf;
        leaf.label = g.symbols.terminal_text(tp->terminal);
        leaf.leaf = true;
        t.children.push_back(std::move(leaf));
      } else {
        auto c = child_node(ii, ChildRole::SlashNumerator);
        if (!c) throw std::invalid_argument("derivation lacks a child for a slash item");
        t.children.push_back(build(*c));
      }
    }
    return t;
  };
  return build(node);
}

std::vector<std::string> backbone_yield(const BackboneTree& t) {
  std::vector<std::string> out;
  std::function<void(const BackboneTree&)> walk = [&](const BackboneTree& n) {
    if (n.leaf) {
      out.push_back(n.label);
      return;
    }
    for (const auto& c : n.children) walk(c);
  };
  walk(t);
  return out;
}

bool cf_valid_parse_tree(const CFGrammar& cf, const BackboneTree& t, bool require_start) {
  if (t.leaf) return false;
  if (require_start && t.label != cf.nonterminals.at(cf.start)) return false;

  std::function<bool(const BackboneTree&)> valid = [&](const BackboneTree& n) -> bool {
    auto head = find_name(cf.nonterminals, n.label);
    if (!head) return false;
    CFRule want;
    want.head = *head;
    for (const auto& c : n.children) {
      if (c.leaf) {
        auto tid = find_name(cf.terminals, c.label);
        if (!tid) return false;
        want.rhs.push_back({true, *tid});
      } else {
        auto nid = find_name(cf.nonterminals, c.label);
        if (!nid) return false;
        want.rhs.push_back({false, *nid});
      }
    }
    bool found = false;
    for (const CFRule& r : cf.rules) found = found || (r == want);
    if (!found) return false;
    for (const auto& c : n.children)
      if (!c.leaf && !valid(c)) return false;
    return true;
  };
  return valid(t);
}

Grammar to_lmg(const CFGrammar& cf) {
  Grammar g;
  for (const auto& name : cf.nonterminals) {
    g.symbols.intern_nonterminal(name);
    g.arity.push_back(0);
  }
  for (const auto& text : cf.terminals) g.symbols.intern_terminal(text);
  g.start = cf.start;
  for (const CFRule& cr : cf.rules) {
    Rule r;
    r.head = cr.head;
    for (const CFSymbol& s : cr.rhs) {
      if (s.terminal)
        r.rhs.push_back(PredItem{TerminalPred{s.id}});
      else
        r.rhs.push_back(PredItem{NonterminalPred{s.id, {}}});
    }
    g.rules.push_back(std::move(r));
  }
  return g;
}

std::optional<CFGrammar> cf_from_lmg(const Grammar& g) {
  for (std::uint32_t a : g.arity)
    if (a != 0) return std::nullopt;
  CFGrammar cf;
  for (std::uint32_t i = 0; i < g.symbols.nonterminal_count(); ++i)
    cf_intern_nonterminal(cf, g.symbols.nonterminal_name(i));
  for (std::uint32_t i = 0; i < g.symbols.terminal_count(); ++i)
    cf_intern_terminal(cf, g.symbols.terminal_text(i));
  cf.start = g.start;
  for (const Rule& r : g.rules) {
    CFRule cr;
    cr.head = r.head;
    for (const Item& item : r.rhs) {
      const auto* p = std::get_if<PredItem>(&item);
      if (!p) return std::nullopt;
      if (const auto* tp = std::get_if<TerminalPred>(&p->pred)) {
        cr.rhs.push_back({true, tp->terminal});
      } else {
        const auto& np = std::get<NonterminalPred>(p->pred);
        if (!np.args.empty()) return std::nullopt;
        cr.rhs.push_back({false, np.head});
      }
    }
    cf.rules.push_back(std::move(cr));
  }
  return cf;
}

Grammar intersect(const Grammar& a, const Grammar& b) {
  Grammar g;
  std::set<std::string> terminal_spellings;
  for (std::uint32_t i = 0; i < a.symbols.terminal_count(); ++i)
    terminal_spellings.insert(a.symbols.terminal_text(i));
  for (std::uint32_t i = 0; i < b.symbols.terminal_count(); ++i)
    terminal_spellings.insert(b.symbols.terminal_text(i));

  std::set<std::string> nonterminal_spellings;
  auto rename = [&](const std::string& base, const char* tag) {
    std::string name = base + tag;
    while (terminal_spellings.count(name) || nonterminal_spellings.count(name)) name += "_";
    nonterminal_spellings.insert(name);
    return name;
  };

  std::vector<std::string> a_names, b_names;
  for (std::uint32_t i = 0; i < a.symbols.nonterminal_count(); ++i)
    a_names.push_back(rename(a.symbols.nonterminal_name(i), "1"));
  for (std::uint32_t i = 0; i < b.symbols.nonterminal_count(); ++i)
    b_names.push_back(rename(b.symbols.nonterminal_name(i), "2"));
  std::string start_name = "S";
  while (terminal_spellings.count(start_name) || nonterminal_spellings.count(start_name))
    start_name += "_";
  nonterminal_spellings.insert(start_name);
  auto fresh_var = [&](std::string name) {
    while (terminal_spellings.count(name) || nonterminal_spellings.count(name)) name += "_";
    return name;
  };
  std::string var_name = fresh_var("x");

  NonterminalId start = g.symbols.intern_nonterminal(start_name);
  g.arity.push_back(0);
  g.start = start;
  std::vector<NonterminalId> a_ids, b_ids;
  for (std::uint32_t i = 0; i < a_names.size(); ++i) {
    a_ids.push_back(g.symbols.intern_nonterminal(a_names[i]));
    g.arity.push_back(a.arity[i]);
  }
  for (std::uint32_t i = 0; i < b_names.size(); ++i) {
    b_ids.push_back(g.symbols.intern_nonterminal(b_names[i]));
    g.arity.push_back(b.arity[i]);
  }
  std::vector<TerminalId> a_terms, b_terms;
  for (std::uint32_t i = 0; i < a.symbols.terminal_count(); ++i)
    a_terms.push_back(g.symbols.intern_terminal(a.symbols.terminal_text(i)));
  for (std::uint32_t i = 0; i < b.symbols.terminal_count(); ++i)
    b_terms.push_back(g.symbols.intern_terminal(b.symbols.terminal_text(i)));

  Rule glue;
  glue.head = start;
  glue.var_names = {var_name};
  glue.rhs.push_back(QuantItem{0, NonterminalPred{a_ids[a.start], {}}});
  glue.rhs.push_back(SlashItem{NonterminalPred{b_ids[b.start], {}}, Term{VarRef{0}}});
  g.rules.push_back(std::move(glue));

  auto import_rules = [&](const Grammar& src, const std::vector<NonterminalId>& ids,
                          const std::vector<TerminalId>& terms) {
    for (const Rule& sr : src.rules) {
      Rule r;
      r.head = ids[sr.head];
      r.patterns = sr.patterns;
      r.var_names.reserve(sr.var_names.size());
      std::set<std::string> used;
      for (const auto& vn : sr.var_names) {
        std::string name = vn;
        while (terminal_spellings.count(name) || nonterminal_spellings.count(name) ||
               used.count(name))
          name += "_";
        used.insert(name);
        r.var_names.push_back(std::move(name));
      }
      auto map_term = [&](const Term& t) {
        Term out;
        out.reserve(t.size());
        for (const TermElement& e : t) {
          if (const auto* tr = std::get_if<TerminalRef>(&e))
            out.push_back(TerminalRef{terms[tr->id]});
          else
            out.push_back(e);
        }
        return out;
      };
      auto map_pred = [&](const Predicate& p) -> Predicate {
        if (const auto* tp = std::get_if<TerminalPred>(&p)) return TerminalPred{terms[tp->terminal]};
        const auto& np = std::get<NonterminalPred>(p);
        NonterminalPred out{ids[np.head], {}};
        out.args.reserve(np.args.size());
        for (const Term& t : np.args) out.args.push_back(map_term(t));
        return out;
      };
      for (const Item& item : sr.rhs) {
        r.rhs.push_back(std::visit(
            overloaded{
                [&](const PredItem& p) -> Item { return PredItem{map_pred(p.pred)}; },
                [&](const QuantItem& q) -> Item { return QuantItem{q.binder, map_pred(q.body)}; },
                [&](const SlashItem& s) -> Item {
                  return SlashItem{map_pred(s.numerator), map_term(s.denominator)};
                },
            },
            item));
      }
      g.rules.push_back(std::move(r));
    }
  };
  import_rules(a, a_ids, a_terms);
  import_rules(b, b_ids, b_terms);
  return g;
}

Grammar intersect(const CFGrammar& a, const CFGrammar& b) {
  return intersect(to_lmg(a), to_lmg(b));
}

CFParseResult cf_parse(const CFGrammar& cf, const std::vector<std::string>& tokens) {
  CFParseResult result;
  constexpr std::uint32_t kUnknown = 0xffffffffu;
  std::vector<std::uint32_t> word;
  word.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto id = find_name(cf.terminals, t);
    word.push_back(id ? *id : kUnknown);
  }

  std::vector<std::vector<std::uint32_t>> rules_by_head(cf.nonterminals.size());
  for (std::uint32_t ri = 0; ri < cf.rules.size(); ++ri)
    rules_by_head[cf.rules[ri].head].push_back(ri);

  struct Entry {
    std::vector<std::uint32_t> ends;
  };
  std::unordered_map<std::uint64_t, Entry> memo;
  std::unordered_set<std::uint64_t> in_progress;
  auto key_of = [](std::uint32_t head, std::uint32_t pos) {
    return (static_cast<std::uint64_t>(head) << 32) | pos;
  };

  // call: end positions reachable; `tainted` reports that a cut-off
  // re-entry may have hidden some ends, making the set unsafe to memoize.
  std::function<std::vector<std::uint32_t>(std::uint32_t, std::uint32_t, bool&)> call =
      [&](std::uint32_t head, std::uint32_t pos, bool& tainted) -> std::vector<std::uint32_t> {
    std::uint64_t key = key_of(head, pos);
    auto mit = memo.find(key);
    if (mit != memo.end()) return mit->second.ends;
    if (in_progress.count(key)) {
      tainted = true;
      return {};
    }
    in_progress.insert(key);
    bool local_taint = false;
    std::set<std::uint32_t> ends;
    std::function<void(const CFRule&, std::size_t, std::uint32_t)> walk =
        [&](const CFRule& r, std::size_t ii, std::uint32_t k) {
          if (ii == r.rhs.size()) {
            ends.insert(k);
            return;
          }
          const CFSymbol& s = r.rhs[ii];
          if (s.terminal) {
            if (k < word.size() && word[k] == s.id) walk(r, ii + 1, k + 1);
            return;
          }
          for (std::uint32_t end : call(s.id, k, local_taint)) walk(r, ii + 1, end);
        };
    for (std::uint32_t ri : rules_by_head[head]) walk(cf.rules[ri], 0, pos);
    in_progress.erase(key);
    std::vector<std::uint32_t> out(ends.begin(), ends.end());
    if (!local_taint) {
      memo.emplace(key, Entry{out});
      ++result.stats.memo_entries;
    } else {
      tainted = true;
    }
    return out;
  };

  bool tainted = false;
  auto ends = call(cf.start, 0, tainted);
  for (std::uint32_t e : ends) result.accept = result.accept || (e == word.size());
  return result;
}

bool cf_grammars_isomorphic(const CFGrammar& a, const CFGrammar& b) {
  const std::size_t n = a.nonterminals.size();
  if (n != b.nonterminals.size() || a.rules.size() != b.rules.size()) return false;

  // Terminals correspond by spelling; a terminal used in rules of one
  // grammar but absent from the other blocks any isomorphism.
  std::vector<std::optional<std::uint32_t>> term_map(a.terminals.size());
  for (std::uint32_t i = 0; i < a.terminals.size(); ++i)
    term_map[i] = find_name(b.terminals, a.terminals[i]);

  auto rule_text = [](const CFRule& r, const std::vector<std::uint32_t>& nt_map,
                      const std::vector<std::optional<std::uint32_t>>& tmap,
                      bool& ok) -> std::string {
    std::ostringstream out;
    out << nt_map[r.head] << ":";
    for (const CFSymbol& s : r.rhs) {
      if (s.terminal) {
        if (s.id >= tmap.size() || !tmap[s.id]) {
          ok = false;
          return {};
        }
        out << " t" << *tmap[s.id];
      } else {
        out << " n" << nt_map[s.id];
      }
    }
    return out.str();
  };

  std::multiset<std::string> b_rules;
  {
    std::vector<std::uint32_t> ident(b.nonterminals.size());
    for (std::uint32_t i = 0; i < ident.size(); ++i) ident[i] = i;
    std::vector<std::optional<std::uint32_t>> ident_t(b.terminals.size());
    for (std::uint32_t i = 0; i < ident_t.size(); ++i) ident_t[i] = i;
    for (const CFRule& r : b.rules) {
      bool ok = true;
      b_rules.insert(rule_text(r, ident, ident_t, ok));
    }
  }

  // Permute the non-start nonterminals of a over those of b.
  std::vector<std::uint32_t> a_rest, b_rest;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i != a.start) a_rest.push_back(i);
    if (i != b.start) b_rest.push_back(i);
  }
  std::sort(b_rest.begin(), b_rest.end());
  std::vector<std::uint32_t> nt_map(n);
  do {
    nt_map[a.start] = b.start;
    for (std::size_t i = 0; i < a_rest.size(); ++i) nt_map[a_rest[i]] = b_rest[i];
    std::multiset<std::string> mapped;
    bool ok = true;
    for (const CFRule& r : a.rules) {
      mapped.insert(rule_text(r, nt_map, term_map, ok));
      if (!ok) break;
    }
    if (ok && mapped == b_rules) return true;
  } while (std::next_permutation(b_rest.begin(), b_rest.end()));
  return false;
}

}  // namespace lmg

#include "lmg/engine_poly.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <variant>

namespace lmg {

namespace {

constexpr std::uint32_t kSep = 0xffffffffu;

struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};
struct LitRef {
  std::uint32_t id = 0;  // frame-pool index of the literal word
};
using PolyValue = std::variant<Span, LitRef>;

struct PolyAbort {
  PolyStatus status;
  std::string detail;
};

using NodePtr = std::shared_ptr<const DerivNode>;

std::string join_reasons(const std::vector<std::string>& reasons) {
  std::string out;
  for (const auto& r : reasons) {
    if (!out.empty()) out += "; ";
    out += r;
  }
  return out;
}

}  // namespace

std::string poly_status_name(PolyStatus s) {
  switch (s) {
    case PolyStatus::Accept: return "accept";
    case PolyStatus::Reject: return "reject";
    case PolyStatus::NotEligible: return "not-eligible";
    case PolyStatus::DynamicLeftRecursion: return "dynamic-left-recursion";
  }
  return "?";
}

struct PolyRecognizer::Impl {
  const Grammar& g;
  AnalysisReport report;
  Eligibility elig;
  std::vector<std::vector<std::uint32_t>> rules_by_head;

  // per-run state.  The pool is a deque so references to existing frame
  // words stay valid while a body walk interns new literal frames.
  std::deque<Word> pool;  // frame words; 0 is the input
  std::map<Word, std::uint32_t> pool_ids;
  using Key = std::vector<std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 0xcbf29ce484222325ull;
      for (std::uint32_t x : k) {
        h ^= x;
        h *= 0x100000001b3ull;
      }
      return h;
    }
  };
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> memo;
  std::unordered_set<Key, KeyHash> in_progress;
  std::unordered_map<Key, NodePtr, KeyHash> extract_cache;
  std::unordered_set<Key, KeyHash> extract_in_progress;
  PolyStats stats;

  Impl(const Grammar& grammar, AnalysisReport rep)
      : g(grammar),
        report(std::move(rep)),
        elig(engine_eligibility(report)),
        rules_by_head(grammar.symbols.nonterminal_count()) {
    for (std::uint32_t ri = 0; ri < g.rules.size(); ++ri)
      rules_by_head[g.rules[ri].head].push_back(ri);
  }

  std::uint32_t intern(const Word& w) {
    auto it = pool_ids.find(w);
    if (it != pool_ids.end()) return it->second;
    pool.push_back(w);
    pool_ids.emplace(w, static_cast<std::uint32_t>(pool.size() - 1));
    return static_cast<std::uint32_t>(pool.size() - 1);
  }

  std::uint32_t value_len(const PolyValue& v) const {
    if (const auto* sp = std::get_if<Span>(&v)) return sp->end - sp->begin;
    return static_cast<std::uint32_t>(pool[std::get<LitRef>(v).id].size());
  }

  Word value_word(const PolyValue& v, std::uint32_t ctx) const {
    if (const auto* sp = std::get_if<Span>(&v))
      return Word(pool[ctx].begin() + sp->begin, pool[ctx].begin() + sp->end);
    return pool[std::get<LitRef>(v).id];
  }

  PolyValue materialize(const PolyValue& v, std::uint32_t ctx) {
    if (std::holds_alternative<LitRef>(v)) return v;
    return LitRef{intern(value_word(v, ctx))};
  }

  Key make_key(NonterminalId head, const std::vector<PolyValue>& args, std::uint32_t ctx,
               std::uint32_t pos) const {
    Key key;
    key.reserve(3 * args.size() + 4);
    key.push_back(head);
    key.push_back(ctx);
    key.push_back(pos);
    for (const PolyValue& v : args) {
      key.push_back(kSep);
      if (const auto* sp = std::get_if<Span>(&v)) {
        key.push_back(0);
        key.push_back(sp->begin);
        key.push_back(sp->end);
      } else {
        key.push_back(1);
        key.push_back(std::get<LitRef>(v).id);
      }
    }
    return key;
  }

  struct VecState {
    const std::vector<VariableId>* vars = nullptr;
    PolyValue value;
    std::uint32_t consumed = 0;
    std::size_t next = 0;  // next unbound variable index
  };

  struct Walk {
    const Rule* rule = nullptr;
    std::uint32_t rule_index = 0;
    std::uint32_t ctx = 0;
    std::uint32_t start = 0;
    const std::vector<PolyValue>* args = nullptr;
    std::unordered_map<VariableId, PolyValue> sigma;
    std::vector<VecState> vecs;
    std::function<bool(std::uint32_t)> sink;
    bool stop = false;
    bool extracting = false;
    std::vector<DerivNode::Child> children;
  };

  PolyValue term_value(const Term& t, Walk& w) {
    if (auto v = term_single_var(t)) {
      auto it = w.sigma.find(*v);
      if (it == w.sigma.end())
        throw PolyAbort{PolyStatus::NotEligible,
                        "variable " + w.rule->var_names[*v] + " is used before it is bound"};
      return it->second;
    }
    if (term_is_literal(t)) return LitRef{intern(literal_word(t))};
    throw PolyAbort{PolyStatus::NotEligible, "combinatorial predicate argument"};
  }

  std::vector<PolyValue> call_args(const NonterminalPred& np, Walk& w, std::uint32_t target_ctx) {
    std::vector<PolyValue> vals;
    vals.reserve(np.args.size());
    for (const Term& t : np.args) {
      PolyValue v = term_value(t, w);
      if (target_ctx != w.ctx) v = materialize(v, w.ctx);
      vals.push_back(v);
    }
    return vals;
  }

  std::string render_call(NonterminalId head, std::uint32_t ctx, std::uint32_t pos) const {
    std::ostringstream out;
    out << g.symbols.nonterminal_name(head) << " at position " << pos;
    if (ctx != 0) out << " of \"" << word_to_string(g, pool[ctx]) << "\"";
    return out.str();
  }

  const std::vector<std::uint32_t>& call(NonterminalId head, const std::vector<PolyValue>& args,
                                         std::uint32_t ctx, std::uint32_t pos) {
    ++stats.calls;
    Key key = make_key(head, args, ctx, pos);
    auto mit = memo.find(key);
    if (mit != memo.end()) return mit->second;
    if (in_progress.count(key))
      throw PolyAbort{PolyStatus::DynamicLeftRecursion,
                      render_call(head, ctx, pos) + " re-entered during its own expansion"};
    in_progress.insert(key);
    std::set<std::uint32_t> ends;
    for (std::uint32_t ri : rules_by_head[head]) {
      Walk w;
      w.rule = &g.rules[ri];
      w.rule_index = ri;
      w.ctx = ctx;
      w.start = pos;
      w.args = &args;
      w.sink = [&ends](std::uint32_t end) {
        ends.insert(end);
        return false;
      };
      if (match_patterns(w)) walk_items(w, 0, pos);
    }
    in_progress.erase(key);
    ++stats.memo_entries;
    auto [it, _] = memo.emplace(std::move(key),
                                std::vector<std::uint32_t>(ends.begin(), ends.end()));
    return it->second;
  }

  bool match_patterns(Walk& w) {
    const Rule& r = *w.rule;
    for (std::size_t slot = 0; slot < r.patterns.size(); ++slot) {
      const auto& pattern = r.patterns[slot];
      const PolyValue& arg = (*w.args)[slot];
      if (pattern.empty()) {
        if (value_len(arg) != 0) return false;
      } else if (pattern.size() == 1) {
        w.sigma[pattern[0]] = arg;
      } else {
        w.vecs.push_back({&pattern, arg, 0, 0});
      }
    }
    return true;
  }

  void walk_items(Walk& w, std::size_t item_idx, std::uint32_t k) {
    if (w.stop) return;
    const Rule& r = *w.rule;
    if (item_idx == r.rhs.size()) {
      w.stop = w.sink(k);
      return;
    }
    const Item& item = r.rhs[item_idx];
    const Word& frame = pool[w.ctx];

    if (const auto* p = std::get_if<PredItem>(&item)) {
      if (const auto* tp = std::get_if<TerminalPred>(&p->pred)) {
        if (k < frame.size() && frame[k] == tp->terminal) walk_items(w, item_idx + 1, k + 1);
        return;
      }
      const auto& np = std::get<NonterminalPred>(p->pred);
      std::vector<PolyValue> vals = call_args(np, w, w.ctx);
      std::vector<std::uint32_t> ends = call(np.head, vals, w.ctx, k);
      for (std::uint32_t end : ends) {
        if (w.extracting) {
          NodePtr child = extract_node(np.head, vals, w.ctx, k, end);
          if (!child) continue;
          w.children.push_back({static_cast<std::uint32_t>(item_idx), ChildRole::Predicate,
                                std::move(child)});
        }
        walk_items(w, item_idx + 1, end);
        if (w.stop) return;
        if (w.extracting) w.children.pop_back();
      }
      return;
    }

    if (const auto* q = std::get_if<QuantItem>(&item)) {
      if (const auto* tp = std::get_if<TerminalPred>(&q->body)) {
        if (k < frame.size() && frame[k] == tp->terminal) {
          w.sigma[q->binder] = Span{k, k + 1};
          walk_items(w, item_idx + 1, k + 1);
          if (w.stop) return;
          w.sigma.erase(q->binder);
        }
        return;
      }
      const auto& np = std::get<NonterminalPred>(q->body);
      std::vector<PolyValue> vals = call_args(np, w, w.ctx);
      std::vector<std::uint32_t> ends = call(np.head, vals, w.ctx, k);
      for (std::uint32_t end : ends) {
        w.sigma[q->binder] = Span{k, end};
        if (w.extracting) {
          NodePtr child = extract_node(np.head, vals, w.ctx, k, end);
          if (!child) {
            w.sigma.erase(q->binder);
            continue;
          }
          w.children.push_back({static_cast<std::uint32_t>(item_idx), ChildRole::QuantifierBody,
                                std::move(child)});
        }
        walk_items(w, item_idx + 1, end);
        if (w.stop) return;
        if (w.extracting) w.children.pop_back();
        w.sigma.erase(q->binder);
      }
      return;
    }

    const auto& s = std::get<SlashItem>(item);
    auto dvar = term_single_var(s.denominator);
    if (dvar && !w.sigma.count(*dvar)) {
      // The denominator variable is unbound: this slash defines the next
      // prefix variable of a pending vector, the numerator deciding how much
      // of the remainder it takes.
      VecState* vec = nullptr;
      for (auto& v : w.vecs)
        if (v.next + 1 < v.vars->size() && (*v.vars)[v.next] == *dvar) {
          vec = &v;
          break;
        }
      if (!vec)
        throw PolyAbort{PolyStatus::NotEligible,
                        "slash denominator " + w.rule->var_names[*dvar] +
                            " is neither bound nor the next vector variable"};
      std::uint32_t rctx, rbegin, rend;
      if (const auto* sp = std::get_if<Span>(&vec->value)) {
        rctx = w.ctx;
        rbegin = sp->begin + vec->consumed;
        rend = sp->end;
      } else {
        rctx = std::get<LitRef>(vec->value).id;
        rbegin = vec->consumed;
        rend = static_cast<std::uint32_t>(pool[rctx].size());
      }

      auto bind_and_continue = [&](std::uint32_t e, NodePtr child) {
        PolyValue xval = (rctx == w.ctx)
                             ? PolyValue(Span{rbegin, e})
                             : PolyValue(LitRef{intern(Word(pool[rctx].begin() + rbegin,
                                                            pool[rctx].begin() + e))});
        w.sigma[*dvar] = xval;
        vec->consumed += e - rbegin;
        vec->next++;
        bool bound_trailing = false;
        VariableId tvar = 0;
        if (vec->next + 1 == vec->vars->size()) {
          tvar = (*vec->vars)[vec->next];
          w.sigma[tvar] = (rctx == w.ctx)
                              ? PolyValue(Span{e, rend})
                              : PolyValue(LitRef{intern(Word(pool[rctx].begin() + e,
                                                             pool[rctx].begin() + rend))});
          vec->next++;
          bound_trailing = true;
        }
        bool pushed = false;
        if (w.extracting && child) {
          w.children.push_back({static_cast<std::uint32_t>(item_idx),
                                ChildRole::SlashNumerator, std::move(child)});
          pushed = true;
        }
        walk_items(w, item_idx + 1, k);  // a slash consumes nothing
        if (w.stop) return;
        if (pushed) w.children.pop_back();
        if (bound_trailing) {
          w.sigma.erase(tvar);
          vec->next--;
        }
        vec->next--;
        vec->consumed -= e - rbegin;
        w.sigma.erase(*dvar);
      };

      if (const auto* tp = std::get_if<TerminalPred>(&s.numerator)) {
        if (rbegin < rend && pool[rctx][rbegin] == tp->terminal)
          bind_and_continue(rbegin + 1, nullptr);
        return;
      }
      const auto& np = std::get<NonterminalPred>(s.numerator);
      std::vector<PolyValue> vals = call_args(np, w, rctx);
      std::vector<std::uint32_t> ends = call(np.head, vals, rctx, rbegin);
      for (std::uint32_t e : ends) {
        if (e > rend) break;  // ends are sorted
        NodePtr child;
        if (w.extracting) {
          child = extract_node(np.head, vals, rctx, rbegin, e);
          if (!child) continue;
        }
        bind_and_continue(e, std::move(child));
        if (w.stop) return;
      }
      return;
    }

    // Ordinary slash: the denominator already has a value; the numerator
    // must derive exactly that value, consuming nothing here.
    PolyValue d = term_value(s.denominator, w);
    if (const auto* tp = std::get_if<TerminalPred>(&s.numerator)) {
      Word dw = value_word(d, w.ctx);
      if (dw.size() == 1 && dw[0] == tp->terminal) walk_items(w, item_idx + 1, k);
      return;
    }
    const auto& np = std::get<NonterminalPred>(s.numerator);
    std::uint32_t tctx, tbegin, tend;
    if (const auto* sp = std::get_if<Span>(&d)) {
      tctx = w.ctx;
      tbegin = sp->begin;
      tend = sp->end;
    } else {
      tctx = std::get<LitRef>(d).id;
      tbegin = 0;
      tend = static_cast<std::uint32_t>(pool[tctx].size());
    }
    std::vector<PolyValue> vals = call_args(np, w, tctx);
    const std::vector<std::uint32_t>& ends = call(np.head, vals, tctx, tbegin);
    bool hit = false;
    for (std::uint32_t e : ends) hit = hit || (e == tend);
    if (!hit) return;
    if (w.extracting) {
      NodePtr child = extract_node(np.head, vals, tctx, tbegin, tend);
      if (!child) return;
      w.children.push_back({static_cast<std::uint32_t>(item_idx), ChildRole::SlashNumerator,
                            std::move(child)});
      walk_items(w, item_idx + 1, k);
      if (w.stop) return;
      w.children.pop_back();
      return;
    }
    walk_items(w, item_idx + 1, k);
  }

  // Deterministically rebuilds one derivation for a call known (from the hot
  // memo) to reach `end`.  Re-entering the same extraction is cut off — a
  // smallest derivation never nests its own instance — and remaining
  // branches are tried instead.
  NodePtr extract_node(NonterminalId head, const std::vector<PolyValue>& args, std::uint32_t ctx,
                       std::uint32_t pos, std::uint32_t end) {
    Key key = make_key(head, args, ctx, pos);
    key.push_back(kSep);
    key.push_back(end);
    auto cit = extract_cache.find(key);
    if (cit != extract_cache.end()) return cit->second;
    if (extract_in_progress.count(key)) return nullptr;
    extract_in_progress.insert(key);

    NodePtr built;
    for (std::uint32_t ri : rules_by_head[head]) {
      Walk w;
      w.rule = &g.rules[ri];
      w.rule_index = ri;
      w.ctx = ctx;
      w.start = pos;
      w.args = &args;
      w.extracting = true;
      w.sink = [&](std::uint32_t e) {
        if (e != end) return false;
        auto node = std::make_shared<DerivNode>();
        node->rule = w.rule_index;
        node->lhs_args.reserve(args.size());
        for (const PolyValue& v : args) node->lhs_args.push_back(value_word(v, ctx));
        node->bindings.assign(w.rule->var_names.size(), Word{});
        for (const auto& [var, val] : w.sigma) node->bindings[var] = value_word(val, w.ctx);
        node->yield = Word(pool[ctx].begin() + pos, pool[ctx].begin() + end);
        node->span_begin = pos;
        node->span_end = end;
        node->children = w.children;
        built = std::move(node);
        return true;
      };
      if (match_patterns(w)) walk_items(w, 0, pos);
      if (built) break;
    }

    extract_in_progress.erase(key);
    if (built) extract_cache.emplace(std::move(key), built);
    return built;
  }

  PolyResult run(const Word& input, bool want_tree) {
    PolyResult result;
    if (elig.engine != EngineClass::PolyEligible) {
      result.status = PolyStatus::NotEligible;
      result.detail = join_reasons(elig.reasons);
      return result;
    }
    pool.clear();
    pool_ids.clear();
    memo.clear();
    in_progress.clear();
    extract_cache.clear();
    extract_in_progress.clear();
    stats = {};
    intern(input);  // frame 0
    try {
      const auto& ends = call(g.start, {}, 0, 0);
      bool full = false;
      for (std::uint32_t e : ends) full = full || (e == input.size());
      result.status = full ? PolyStatus::Accept : PolyStatus::Reject;
      if (full && want_tree) result.tree = extract_node(g.start, {}, 0, 0,
                                                        static_cast<std::uint32_t>(input.size()));
    } catch (const PolyAbort& abort) {
      result.status = abort.status;
      result.detail = abort.detail;
    }
    result.stats = stats;
    return result;
  }
};

PolyRecognizer::PolyRecognizer(const Grammar& g) : impl_(new Impl(g, analyze(g))) {}
PolyRecognizer::PolyRecognizer(const Grammar& g, const AnalysisReport& report)
    : impl_(new Impl(g, report)) {}
PolyRecognizer::~PolyRecognizer() = default;

bool PolyRecognizer::eligible() const { return impl_->elig.engine == EngineClass::PolyEligible; }
const std::vector<std::string>& PolyRecognizer::reasons() const { return impl_->elig.reasons; }
PolyResult PolyRecognizer::run(const Word& input, bool want_tree) {
  return impl_->run(input, want_tree);
}

PolyResult recognize_poly(const Grammar& g, const Word& input, bool want_tree) {
  PolyRecognizer r(g);
  return r.run(input, want_tree);
}

}  // namespace lmg

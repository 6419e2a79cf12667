#include "lmg/engine_general.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lmg {

namespace {

constexpr std::uint32_t kSep = 0xffffffffu;

struct AbortSearch {
  GeneralStatus status;
  std::string detail;
};

using NodePtr = std::shared_ptr<const DerivNode>;

struct SubResult {
  std::size_t end;
  NodePtr node;  // null in recognize mode
};

struct Deferral {
  std::size_t item;
  std::size_t from;
  std::size_t to;
};

class Session {
 public:
  Session(const Grammar& g, const GeneralOptions& options, bool parse_mode)
      : g_(g),
        options_(options),
        parse_mode_(parse_mode),
        rules_by_head_(g.symbols.nonterminal_count()) {
    for (std::uint32_t ri = 0; ri < g_.rules.size(); ++ri)
      rules_by_head_[g_.rules[ri].head].push_back(ri);
  }

  std::vector<SubResult> run(const Word& word) {
    std::size_t pid = intern(word);
    return call(g_.start, {}, pid, 0, 0);
  }

  const GeneralStats& stats() const { return stats_; }

 private:
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

  // Everything one rule-body walk needs; children/deferred/sigma follow a
  // push-undo discipline along the recursion.
  struct BodyCtx {
    const Rule* rule = nullptr;
    std::uint32_t rule_index = 0;
    const std::vector<Word>* args = nullptr;
    std::size_t pid = 0;
    std::size_t start_pos = 0;
    std::uint32_t depth = 0;
    Assignment sigma;
    std::vector<DerivNode::Child> children;
    std::vector<Deferral> deferred;
    std::vector<SubResult>* out = nullptr;
    std::set<std::size_t>* seen_ends = nullptr;                          // recognize dedup
    std::set<std::pair<std::size_t, std::string>>* seen_texts = nullptr;  // parse dedup
  };

  void tick() {
    if (++stats_.steps > options_.limits.max_steps)
      throw AbortSearch{GeneralStatus::StepLimit,
                        "step limit of " + std::to_string(options_.limits.max_steps) + " hit"};
  }

  std::size_t intern(const Word& w) {
    auto it = pool_ids_.find(w);
    if (it != pool_ids_.end()) return it->second;
    pool_.push_back(w);
    pool_ids_.emplace(w, pool_.size() - 1);
    return pool_.size() - 1;
  }

  Key make_key(NonterminalId head, const std::vector<Word>& args, std::size_t pid,
               std::size_t pos) const {
    Key key;
    key.reserve(args.size() + 8);
    key.push_back(head);
    for (const Word& a : args) {
      key.push_back(kSep);
      key.insert(key.end(), a.begin(), a.end());
    }
    key.push_back(kSep);
    key.push_back(static_cast<std::uint32_t>(pid));
    key.push_back(static_cast<std::uint32_t>(pos));
    return key;
  }

  std::string render_call(NonterminalId head, const std::vector<Word>& args,
                          std::size_t pos) const {
    std::ostringstream out;
    out << g_.symbols.nonterminal_name(head) << "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out << ", ";
      out << "\"" << word_to_string(g_, args[i]) << "\"";
    }
    out << ") at position " << pos;
    return out.str();
  }

  std::vector<SubResult> call(NonterminalId head, const std::vector<Word>& args, std::size_t pid,
                              std::size_t pos, std::uint32_t depth) {
    tick();
    if (depth > options_.limits.max_depth)
      throw AbortSearch{GeneralStatus::DepthLimit,
                        "depth limit of " + std::to_string(options_.limits.max_depth) + " hit"};
    Key key = make_key(head, args, pid, pos);
    if (in_progress_.count(key))
      throw AbortSearch{GeneralStatus::LeftRecursion,
                        render_call(head, args, pos) + " re-entered during its own expansion"};
    if (options_.memoize) {
      auto it = memo_.find(key);
      if (it != memo_.end()) {
        ++stats_.memo_hits;
        return it->second;
      }
    }

    in_progress_.insert(key);
    std::vector<SubResult> results;
    std::set<std::size_t> seen_ends;
    std::set<std::pair<std::size_t, std::string>> seen_texts;
    for (std::uint32_t ri : rules_by_head_[head]) {
      BodyCtx ctx;
      ctx.rule = &g_.rules[ri];
      ctx.rule_index = ri;
      ctx.args = &args;
      ctx.pid = pid;
      ctx.start_pos = pos;
      ctx.depth = depth;
      ctx.out = &results;
      ctx.seen_ends = &seen_ends;
      ctx.seen_texts = &seen_texts;
      bind_slot(ctx, 0);
    }
    in_progress_.erase(key);
    if (options_.memoize) {
      memo_.emplace(std::move(key), results);
      ++stats_.memo_entries;
    }
    return results;
  }

  void bind_slot(BodyCtx& ctx, std::size_t slot) {
    const Rule& r = *ctx.rule;
    if (slot == r.patterns.size()) {
      eval_item(ctx, 0, ctx.start_pos);
      return;
    }
    const auto& pattern = r.patterns[slot];
    const Word& arg = (*ctx.args)[slot];
    if (pattern.empty()) {
      if (arg.empty()) bind_slot(ctx, slot + 1);
      return;
    }
    if (pattern.size() == 1) {
      ctx.sigma[pattern[0]] = arg;
      bind_slot(ctx, slot + 1);
      ctx.sigma.erase(pattern[0]);
      return;
    }
    bind_parts(ctx, slot, 0, 0);
  }

  void bind_parts(BodyCtx& ctx, std::size_t slot, std::size_t part, std::size_t offset) {
    const auto& pattern = ctx.rule->patterns[slot];
    const Word& arg = (*ctx.args)[slot];
    if (part + 1 == pattern.size()) {
      ctx.sigma[pattern[part]] = Word(arg.begin() + offset, arg.end());
      bind_slot(ctx, slot + 1);
      ctx.sigma.erase(pattern[part]);
      return;
    }
    for (std::size_t end = offset; end <= arg.size(); ++end) {
      tick();
      ctx.sigma[pattern[part]] = Word(arg.begin() + offset, arg.begin() + end);
      bind_parts(ctx, slot, part + 1, end);
      ctx.sigma.erase(pattern[part]);
    }
  }

  bool item_ready(const Item& item, const Assignment& sigma) const {
    bool ready = true;
    auto scan_term = [&](const Term& t) {
      for (const auto& e : t)
        if (const auto* v = std::get_if<VarRef>(&e))
          if (!sigma.count(v->id)) ready = false;
    };
    auto scan_pred = [&](const Predicate& p) {
      if (const auto* np = std::get_if<NonterminalPred>(&p))
        for (const Term& t : np->args) scan_term(t);
    };
    std::visit(overloaded{
                   [&](const PredItem& p) { scan_pred(p.pred); },
                   [&](const QuantItem& q) { scan_pred(q.body); },
                   [&](const SlashItem& s) {
                     scan_pred(s.numerator);
                     scan_term(s.denominator);
                   },
               },
               item);
    return ready;
  }

  std::vector<Word> pred_arg_words(const NonterminalPred& np, const Assignment& sigma) const {
    std::vector<Word> arg_words;
    arg_words.reserve(np.args.size());
    for (const Term& t : np.args) {
      Term substituted = substitute_term(t, sigma);
      arg_words.push_back(literal_word(substituted));  // caller ensured readiness
    }
    return arg_words;
  }

  void push_child(BodyCtx& ctx, std::size_t item_idx, ChildRole role, NodePtr node) {
    if (parse_mode_)
      ctx.children.push_back({static_cast<std::uint32_t>(item_idx), role, std::move(node)});
  }
  void pop_child(BodyCtx& ctx) {
    if (parse_mode_) ctx.children.pop_back();
  }

  void eval_item(BodyCtx& ctx, std::size_t item_idx, std::size_t pos) {
    tick();
    const Rule& r = *ctx.rule;
    const Word& word = pool_[ctx.pid];
    if (item_idx == r.rhs.size()) {
      verify_deferred(ctx, 0, pos);
      return;
    }
    const Item& item = r.rhs[item_idx];

    if (const auto* p = std::get_if<PredItem>(&item)) {
      if (const auto* tp = std::get_if<TerminalPred>(&p->pred)) {
        if (pos < word.size() && word[pos] == tp->terminal) eval_item(ctx, item_idx + 1, pos + 1);
        return;
      }
      const auto& np = std::get<NonterminalPred>(p->pred);
      if (item_ready(item, ctx.sigma)) {
        auto subs = call(np.head, pred_arg_words(np, ctx.sigma), ctx.pid, pos, ctx.depth + 1);
        for (const SubResult& s : subs) {
          push_child(ctx, item_idx, ChildRole::Predicate, s.node);
          eval_item(ctx, item_idx + 1, s.end);
          pop_child(ctx);
        }
        return;
      }
      for (std::size_t to = pos; to <= word.size(); ++to) {  // guess; verify later
        tick();
        ctx.deferred.push_back({item_idx, pos, to});
        eval_item(ctx, item_idx + 1, to);
        ctx.deferred.pop_back();
      }
      return;
    }

    if (const auto* q = std::get_if<QuantItem>(&item)) {
      if (const auto* tp = std::get_if<TerminalPred>(&q->body)) {
        if (pos < word.size() && word[pos] == tp->terminal) {
          ctx.sigma[q->binder] = Word{tp->terminal};
          eval_item(ctx, item_idx + 1, pos + 1);
          ctx.sigma.erase(q->binder);
        }
        return;
      }
      const auto& np = std::get<NonterminalPred>(q->body);
      // The binder takes whatever the body consumes; bind it after the body
      // runs (or guess its extent when the body's arguments are not ready).
      bool body_ready = true;
      for (const Term& t : np.args)
        for (const auto& e : t)
          if (const auto* v = std::get_if<VarRef>(&e))
            if (v->id != q->binder && !ctx.sigma.count(v->id)) body_ready = false;
      if (body_ready && !term_args_use(np, q->binder)) {
        auto subs = call(np.head, pred_arg_words(np, ctx.sigma), ctx.pid, pos, ctx.depth + 1);
        for (const SubResult& s : subs) {
          ctx.sigma[q->binder] = Word(word.begin() + pos, word.begin() + s.end);
          push_child(ctx, item_idx, ChildRole::QuantifierBody, s.node);
          eval_item(ctx, item_idx + 1, s.end);
          pop_child(ctx);
          ctx.sigma.erase(q->binder);
        }
        return;
      }
      for (std::size_t to = pos; to <= word.size(); ++to) {
        tick();
        ctx.sigma[q->binder] = Word(word.begin() + pos, word.begin() + to);
        if (item_ready(item, ctx.sigma)) {
          auto subs = call(np.head, pred_arg_words(np, ctx.sigma), ctx.pid, pos, ctx.depth + 1);
          for (const SubResult& s : subs) {
            if (s.end != to) continue;
            push_child(ctx, item_idx, ChildRole::QuantifierBody, s.node);
            eval_item(ctx, item_idx + 1, to);
            pop_child(ctx);
          }
        } else {
          ctx.deferred.push_back({item_idx, pos, to});
          eval_item(ctx, item_idx + 1, to);
          ctx.deferred.pop_back();
        }
        ctx.sigma.erase(q->binder);
      }
      return;
    }

    const auto& s = std::get<SlashItem>(item);
    if (!item_ready(item, ctx.sigma)) {
      ctx.deferred.push_back({item_idx, pos, pos});
      eval_item(ctx, item_idx + 1, pos);
      ctx.deferred.pop_back();
      return;
    }
    Word denom = literal_word(substitute_term(s.denominator, ctx.sigma));
    if (const auto* tp = std::get_if<TerminalPred>(&s.numerator)) {
      if (denom.size() == 1 && denom[0] == tp->terminal) eval_item(ctx, item_idx + 1, pos);
      return;
    }
    const auto& np = std::get<NonterminalPred>(s.numerator);
    std::size_t dpid = intern(denom);
    auto subs = call(np.head, pred_arg_words(np, ctx.sigma), dpid, 0, ctx.depth + 1);
    for (const SubResult& sub : subs) {
      if (sub.end != denom.size()) continue;
      push_child(ctx, item_idx, ChildRole::SlashNumerator, sub.node);
      eval_item(ctx, item_idx + 1, pos);
      pop_child(ctx);
      if (!parse_mode_) break;  // one witness is enough to recognize
    }
  }

  static bool term_args_use(const NonterminalPred& np, VariableId v) {
    for (const Term& t : np.args)
      for (const auto& e : t)
        if (const auto* vr = std::get_if<VarRef>(&e))
          if (vr->id == v) return true;
    return false;
  }

  // All variables are bound once the whole body has been walked; the guessed
  // items are checked here, in item order.
  void verify_deferred(BodyCtx& ctx, std::size_t di, std::size_t end) {
    if (di == ctx.deferred.size()) {
      emit(ctx, end);
      return;
    }
    tick();
    const Deferral& d = ctx.deferred[di];
    const Item& item = ctx.rule->rhs[d.item];
    const Word& word = pool_[ctx.pid];

    auto check_pred = [&](const Predicate& pred, std::size_t from, std::size_t to,
                          ChildRole role) {
      if (const auto* tp = std::get_if<TerminalPred>(&pred)) {
        if (to == from + 1 && word[from] == tp->terminal) verify_deferred(ctx, di + 1, end);
        return;
      }
      const auto& np = std::get<NonterminalPred>(pred);
      auto subs = call(np.head, pred_arg_words(np, ctx.sigma), ctx.pid, from, ctx.depth + 1);
      for (const SubResult& s : subs) {
        if (s.end != to) continue;
        push_child(ctx, d.item, role, s.node);
        verify_deferred(ctx, di + 1, end);
        pop_child(ctx);
        if (!parse_mode_) break;
      }
    };

    if (const auto* p = std::get_if<PredItem>(&item)) {
      check_pred(p->pred, d.from, d.to, ChildRole::Predicate);
      return;
    }
    if (const auto* q = std::get_if<QuantItem>(&item)) {
      check_pred(q->body, d.from, d.to, ChildRole::QuantifierBody);
      return;
    }
    const auto& sl = std::get<SlashItem>(item);
    Word denom = literal_word(substitute_term(sl.denominator, ctx.sigma));
    if (const auto* tp = std::get_if<TerminalPred>(&sl.numerator)) {
      if (denom.size() == 1 && denom[0] == tp->terminal) verify_deferred(ctx, di + 1, end);
      return;
    }
    const auto& np = std::get<NonterminalPred>(sl.numerator);
    std::size_t dpid = intern(denom);
    auto subs = call(np.head, pred_arg_words(np, ctx.sigma), dpid, 0, ctx.depth + 1);
    for (const SubResult& s : subs) {
      if (s.end != denom.size()) continue;
      push_child(ctx, d.item, ChildRole::SlashNumerator, s.node);
      verify_deferred(ctx, di + 1, end);
      pop_child(ctx);
      if (!parse_mode_) break;
    }
  }

  void emit(BodyCtx& ctx, std::size_t end) {
    if (!parse_mode_) {
      if (ctx.seen_ends->insert(end).second) ctx.out->push_back({end, nullptr});
      return;
    }
    if (ctx.out->size() >= options_.limits.max_trees) return;
    auto node = std::make_shared<DerivNode>();
    node->rule = ctx.rule_index;
    node->lhs_args = *ctx.args;
    node->bindings.assign(ctx.rule->var_names.size(), Word{});
    for (const auto& [v, w] : ctx.sigma) node->bindings[v] = w;
    const Word& word = pool_[ctx.pid];
    node->yield = Word(word.begin() + ctx.start_pos, word.begin() + end);
    node->span_begin = static_cast<std::uint32_t>(ctx.start_pos);
    node->span_end = static_cast<std::uint32_t>(end);
    node->children = ctx.children;
    std::stable_sort(node->children.begin(), node->children.end(),
                     [](const DerivNode::Child& a, const DerivNode::Child& b) {
                       return a.item < b.item;
                     });
    std::string text = derivation_to_text(g_, *node);
    if (ctx.seen_texts->insert({end, std::move(text)}).second)
      ctx.out->push_back({end, std::move(node)});
  }

  const Grammar& g_;
  GeneralOptions options_;
  bool parse_mode_;
  std::vector<std::vector<std::uint32_t>> rules_by_head_;
  // Frames live here for the whole session; a deque keeps references to
  // existing words valid while nested calls intern new denominator frames.
  std::deque<Word> pool_;
  std::map<Word, std::size_t> pool_ids_;
  std::unordered_map<Key, std::vector<SubResult>, KeyHash> memo_;
  std::unordered_set<Key, KeyHash> in_progress_;
  GeneralStats stats_;
};

}  // namespace

std::string general_status_name(GeneralStatus s) {
  switch (s) {
    case GeneralStatus::Accept: return "accept";
    case GeneralStatus::Reject: return "reject";
    case GeneralStatus::LeftRecursion: return "left-recursion";
    case GeneralStatus::StepLimit: return "step-limit";
    case GeneralStatus::DepthLimit: return "depth-limit";
  }
  return "?";
}

GeneralResult recognize_general(const Grammar& g, const Word& word,
                                const GeneralOptions& options) {
  Session session(g, options, /*parse_mode=*/false);
  GeneralResult result;
  try {
    auto subs = session.run(word);
    bool full = false;
    for (const SubResult& s : subs) full = full || (s.end == word.size());
    result.status = full ? GeneralStatus::Accept : GeneralStatus::Reject;
  } catch (const AbortSearch& abort) {
    result.status = abort.status;
    result.detail = abort.detail;
  }
  result.stats = session.stats();
  return result;
}

GeneralParseResult parse_general(const Grammar& g, const Word& word,
                                 const GeneralOptions& options) {
  GeneralParseResult result;
  GeneralResult recognized = recognize_general(g, word, options);
  result.status = recognized.status;
  result.detail = recognized.detail;
  result.stats = recognized.stats;
  if (result.status != GeneralStatus::Accept) return result;

  Session session(g, options, /*parse_mode=*/true);
  try {
    auto subs = session.run(word);
    for (const SubResult& s : subs)
      if (s.end == word.size()) result.trees.push_back(s.node);
    if (result.trees.size() > options.limits.max_trees)
      result.trees.resize(options.limits.max_trees);
  } catch (const AbortSearch& abort) {
    result.status = abort.status;
    result.detail = abort.detail;
    result.trees.clear();
  }
  result.stats.steps += session.stats().steps;
  result.stats.memo_hits += session.stats().memo_hits;
  result.stats.memo_entries += session.stats().memo_entries;
  return result;
}

}  // namespace lmg

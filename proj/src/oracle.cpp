#include "lmg/oracle.hpp"

#include <stdexcept>

namespace lmg {

namespace {

constexpr std::uint32_t kSep = 0xffffffffu;

// Disjunction: Yes wins, BudgetExhausted beats No; pruning accumulates.
template <class Outcome>
void merge_into(Outcome& acc, const Outcome& b) {
  acc.pruned = acc.pruned || b.pruned;
  if (b.verdict == OracleVerdict::Yes)
    acc.verdict = OracleVerdict::Yes;
  else if (b.verdict == OracleVerdict::BudgetExhausted && acc.verdict == OracleVerdict::No)
    acc.verdict = OracleVerdict::BudgetExhausted;
}

void collect_term_vars(const Term& t, std::vector<VariableId>& out) {
  for (const auto& e : t)
    if (const auto* v = std::get_if<VarRef>(&e)) out.push_back(v->id);
}

void collect_pred_vars(const Predicate& p, std::vector<VariableId>& out) {
  if (const auto* np = std::get_if<NonterminalPred>(&p))
    for (const auto& t : np->args) collect_term_vars(t, out);
}

}  // namespace

std::string oracle_verdict_name(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::No: return "no";
    case OracleVerdict::Yes: return "yes";
    case OracleVerdict::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

std::size_t OracleSession::KeyHash::operator()(const Key& k) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::uint32_t x : k) {
    h ^= x;
    h *= 0x100000001b3ull;
  }
  return h;
}

OracleSession::OracleSession(const Grammar& g, const Budget& budget)
    : g_(g), budget_(budget), rules_by_head_(g.symbols.nonterminal_count()) {
  for (std::uint32_t ri = 0; ri < g.rules.size(); ++ri)
    rules_by_head_[g.rules[ri].head].push_back(ri);
}

OracleSession::Key OracleSession::make_key(NonterminalId head, const std::vector<Word>& args,
                                           const Word& word) const {
  Key key;
  key.reserve(3 + args.size() + word.size() + 8);
  key.push_back(head);
  for (const Word& a : args) {
    key.push_back(kSep);
    key.insert(key.end(), a.begin(), a.end());
  }
  key.push_back(kSep);
  key.push_back(kSep);
  key.insert(key.end(), word.begin(), word.end());
  return key;
}

bool OracleSession::tick() {
  if (exhausted_) return false;
  if (++steps_ > budget_.max_steps) {
    exhausted_ = true;
    return false;
  }
  return true;
}

bool OracleSession::item_ready(const Item& item, const Assignment& sigma) const {
  std::vector<VariableId> vars;
  std::visit(overloaded{
                 [&](const PredItem& p) { collect_pred_vars(p.pred, vars); },
                 [&](const QuantItem& q) { collect_pred_vars(q.body, vars); },
                 [&](const SlashItem& s) {
                   collect_pred_vars(s.numerator, vars);
                   collect_term_vars(s.denominator, vars);
                 },
             },
             item);
  for (VariableId v : vars)
    if (!sigma.count(v)) return false;
  return true;
}

OracleVerdict OracleSession::derives(NonterminalId head, const std::vector<Word>& args,
                                     const Word& word) {
  if (head >= g_.arity.size() || args.size() != g_.arity[head])
    throw std::invalid_argument("argument count does not match the declared arity");
  steps_ = 0;
  exhausted_ = false;
  return instance(head, args, word, 0).verdict;
}

OracleVerdict OracleSession::accepts(const Word& word) { return derives(g_.start, {}, word); }

OracleSession::Outcome OracleSession::instance(NonterminalId head, const std::vector<Word>& args,
                                               const Word& word, std::uint32_t depth) {
  if (!tick() || depth > budget_.max_depth) return {OracleVerdict::BudgetExhausted, true};
  Key key = make_key(head, args, word);
  auto it = memo_.find(key);
  if (it != memo_.end()) {
    switch (it->second) {
      case MemoState::Yes: return {OracleVerdict::Yes, false};
      case MemoState::No: return {OracleVerdict::No, false};
      case MemoState::InProgress: return {OracleVerdict::No, true};  // stack cut
    }
  }
  memo_.emplace(key, MemoState::InProgress);

  Outcome acc{OracleVerdict::No, false};
  for (std::uint32_t ri : rules_by_head_[head]) {
    Assignment sigma;
    merge_into(acc, bind_slot(g_.rules[ri], args, 0, sigma, word, depth));
    if (acc.verdict == OracleVerdict::Yes) break;
  }

  if (acc.verdict == OracleVerdict::Yes)
    memo_[key] = MemoState::Yes;
  else if (acc.verdict == OracleVerdict::No && !acc.pruned)
    memo_[key] = MemoState::No;
  else
    memo_.erase(key);
  return acc;
}

OracleSession::Outcome OracleSession::bind_slot(const Rule& r, const std::vector<Word>& args,
                                                std::size_t slot, Assignment& sigma,
                                                const Word& word, std::uint32_t depth) {
  if (slot == r.patterns.size()) {
    std::vector<Deferral> deferred;
    return eval_items(r, sigma, word, 0, 0, deferred, depth);
  }
  const auto& pattern = r.patterns[slot];
  const Word& arg = args[slot];
  if (pattern.empty()) {
    if (!arg.empty()) return {OracleVerdict::No, false};
    return bind_slot(r, args, slot + 1, sigma, word, depth);
  }
  if (pattern.size() == 1) {
    sigma[pattern[0]] = arg;
    Outcome o = bind_slot(r, args, slot + 1, sigma, word, depth);
    sigma.erase(pattern[0]);
    return o;
  }
  return bind_parts(r, args, slot, 0, 0, sigma, word, depth);
}

OracleSession::Outcome OracleSession::bind_parts(const Rule& r, const std::vector<Word>& args,
                                                 std::size_t slot, std::size_t part,
                                                 std::size_t offset, Assignment& sigma,
                                                 const Word& word, std::uint32_t depth) {
  const auto& pattern = r.patterns[slot];
  const Word& arg = args[slot];
  if (part + 1 == pattern.size()) {
    sigma[pattern[part]] = Word(arg.begin() + offset, arg.end());
    Outcome o = bind_slot(r, args, slot + 1, sigma, word, depth);
    sigma.erase(pattern[part]);
    return o;
  }
  Outcome acc{OracleVerdict::No, false};
  for (std::size_t end = offset; end <= arg.size(); ++end) {
    if (!tick()) return {OracleVerdict::BudgetExhausted, true};
    sigma[pattern[part]] = Word(arg.begin() + offset, arg.begin() + end);
    merge_into(acc, bind_parts(r, args, slot, part + 1, end, sigma, word, depth));
    sigma.erase(pattern[part]);
    if (acc.verdict == OracleVerdict::Yes) return acc;
  }
  return acc;
}

OracleSession::Outcome OracleSession::eval_items(const Rule& r, Assignment& sigma,
                                                 const Word& word, std::size_t item_idx,
                                                 std::size_t pos, std::vector<Deferral>& deferred,
                                                 std::uint32_t depth) {
  if (!tick()) return {OracleVerdict::BudgetExhausted, true};
  if (item_idx == r.rhs.size()) {
    if (pos != word.size()) return {OracleVerdict::No, false};
    Outcome acc{OracleVerdict::Yes, false};
    for (const Deferral& d : deferred) {
      Outcome o = check_item(r.rhs[d.item], sigma, word, d.from, d.to, depth);
      acc.pruned = acc.pruned || o.pruned;
      if (o.verdict != OracleVerdict::Yes) {
        acc.verdict = o.verdict;
        break;
      }
    }
    return acc;
  }

  const Item& item = r.rhs[item_idx];
  Outcome acc{OracleVerdict::No, false};

  auto take_chunk = [&](std::size_t to, bool ready) -> Outcome {
    // With the chunk fixed, either verify the item now or defer it.
    if (ready) {
      Outcome o = check_item(item, sigma, word, pos, to, depth);
      if (o.verdict != OracleVerdict::Yes) return o;
      Outcome rest = eval_items(r, sigma, word, item_idx + 1, to, deferred, depth);
      rest.pruned = rest.pruned || o.pruned;
      return rest;
    }
    deferred.push_back({item_idx, pos, to});
    Outcome rest = eval_items(r, sigma, word, item_idx + 1, to, deferred, depth);
    deferred.pop_back();
    return rest;
  };

  if (const auto* s = std::get_if<SlashItem>(&item)) {
    (void)s;
    return take_chunk(pos, item_ready(item, sigma));  // consumes nothing
  }
  if (const auto* p = std::get_if<PredItem>(&item)) {
    if (const auto* tp = std::get_if<TerminalPred>(&p->pred)) {
      if (pos < word.size() && word[pos] == tp->terminal)
        return eval_items(r, sigma, word, item_idx + 1, pos + 1, deferred, depth);
      return {OracleVerdict::No, false};
    }
    bool ready = item_ready(item, sigma);
    for (std::size_t to = pos; to <= word.size(); ++to) {
      if (!tick()) return {OracleVerdict::BudgetExhausted, true};
      merge_into(acc, take_chunk(to, ready));
      if (acc.verdict == OracleVerdict::Yes) return acc;
    }
    return acc;
  }
  const auto& q = std::get<QuantItem>(item);
  for (std::size_t to = pos; to <= word.size(); ++to) {
    if (!tick()) return {OracleVerdict::BudgetExhausted, true};
    sigma[q.binder] = Word(word.begin() + pos, word.begin() + to);
    merge_into(acc, take_chunk(to, item_ready(item, sigma)));
    sigma.erase(q.binder);
    if (acc.verdict == OracleVerdict::Yes) return acc;
  }
  return acc;
}

OracleSession::Outcome OracleSession::check_item(const Item& item, const Assignment& sigma,
                                                 const Word& word, std::size_t from,
                                                 std::size_t to, std::uint32_t depth) {
  auto derive_pred = [&](const Predicate& p, const Word& target) -> Outcome {
    if (const auto* tp = std::get_if<TerminalPred>(&p)) {
      bool ok = target.size() == 1 && target[0] == tp->terminal;
      return {ok ? OracleVerdict::Yes : OracleVerdict::No, false};
    }
    const auto& np = std::get<NonterminalPred>(p);
    std::vector<Word> arg_words;
    arg_words.reserve(np.args.size());
    for (const Term& t : np.args) arg_words.push_back(literal_word(substitute_term(t, sigma)));
    return instance(np.head, arg_words, target, depth + 1);
  };

  Word chunk(word.begin() + from, word.begin() + to);
  return std::visit(
      overloaded{
          [&](const PredItem& p) { return derive_pred(p.pred, chunk); },
          [&](const QuantItem& q) {
            // The chunk was assigned to the binder when it was chosen.
            auto it = sigma.find(q.binder);
            if (it == sigma.end() || it->second != chunk) return Outcome{OracleVerdict::No, false};
            return derive_pred(q.body, chunk);
          },
          [&](const SlashItem& s) {
            if (from != to) return Outcome{OracleVerdict::No, false};
            Word denom = literal_word(substitute_term(s.denominator, sigma));
            return derive_pred(s.numerator, denom);
          },
      },
      item);
}

OracleVerdict oracle_accepts(const Grammar& g, const Word& word, const Budget& budget) {
  OracleSession session(g, budget);
  return session.accepts(word);
}

LanguageSample oracle_language_upto(const Grammar& g, std::size_t max_len, const Budget& budget) {
  OracleSession session(g, budget);
  LanguageSample sample;
  const std::uint32_t k = g.symbols.terminal_count();
  Word w;
  auto decide = [&]() {
    switch (session.accepts(w)) {
      case OracleVerdict::Yes: sample.members.push_back(w); break;
      case OracleVerdict::BudgetExhausted: sample.undecided.push_back(w); break;
      case OracleVerdict::No: break;
    }
  };
  auto enumerate = [&](auto&& self, std::size_t remaining) -> void {
    if (remaining == 0) {
      decide();
      return;
    }
    for (std::uint32_t t = 0; t < k; ++t) {
      w.push_back(t);
      self(self, remaining - 1);
      w.pop_back();
    }
  };
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len > 0 && k == 0) break;
    enumerate(enumerate, len);
  }
  return sample;
}

}  // namespace lmg

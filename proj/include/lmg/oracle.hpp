#pragma once
// Exhaustive reference decision procedure.
//
// Decides whether a predicate instance derives a word by enumerating, rule by
// rule, every way of splitting the argument words over the left-hand-side
// patterns and every way of cutting the candidate word into per-item chunks.
// Items whose variables are all bound are checked as soon as their chunk is
// chosen; items that mention not-yet-bound variables are deferred to the end
// of the cut, when every variable has a value (guess-and-verify).
//
// The search is memoized per (nonterminal, argument words, word).  A query
// that re-enters an instance already on the search stack is cut off: a
// smallest derivation of an instance never contains that same instance as a
// proper sub-derivation, so the cut never loses an answer for the top-level
// query.  Negative results influenced by such a cut (or by a tripped budget)
// are not memoized, because they are only valid relative to the stack that
// produced them.
//
// Verdicts are three-valued: Yes and No are definite; BudgetExhausted means
// the step or depth budget was hit before the search completed, so the word's
// status is unknown at that budget.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lmg/grammar.hpp"

namespace lmg {

struct Budget {
  std::uint64_t max_steps = 2'000'000;  // per top-level query
  std::uint32_t max_depth = 64;         // instance nesting depth
};

enum class OracleVerdict { No, Yes, BudgetExhausted };

std::string oracle_verdict_name(OracleVerdict v);

// A shared search session.  The memo persists across queries, so deciding
// many related words (as language_upto does) reuses sub-results.  The step
// budget applies to each top-level query separately.
class OracleSession {
 public:
  explicit OracleSession(const Grammar& g, const Budget& budget = {});

  // Does head(args...) derive word?  args.size() must match the declared
  // arity (std::invalid_argument otherwise).
  OracleVerdict derives(NonterminalId head, const std::vector<Word>& args, const Word& word);

  // Does the start symbol derive word?
  OracleVerdict accepts(const Word& word);

  std::uint64_t last_steps() const { return steps_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Outcome {
    OracleVerdict verdict;
    bool pruned;  // a stack cut or budget trip influenced this result
  };
  struct Deferral {
    std::size_t item;
    std::size_t from;
    std::size_t to;
  };
  using Key = std::vector<std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  enum class MemoState : std::uint8_t { InProgress, Yes, No };

  Key make_key(NonterminalId head, const std::vector<Word>& args, const Word& word) const;
  bool tick();

  Outcome instance(NonterminalId head, const std::vector<Word>& args, const Word& word,
                   std::uint32_t depth);
  Outcome bind_slot(const Rule& r, const std::vector<Word>& args, std::size_t slot,
                    Assignment& sigma, const Word& word, std::uint32_t depth);
  Outcome bind_parts(const Rule& r, const std::vector<Word>& args, std::size_t slot,
                     std::size_t part, std::size_t offset, Assignment& sigma, const Word& word,
                     std::uint32_t depth);
  Outcome eval_items(const Rule& r, Assignment& sigma, const Word& word, std::size_t item_idx,
                     std::size_t pos, std::vector<Deferral>& deferred, std::uint32_t depth);
  Outcome check_item(const Item& item, const Assignment& sigma, const Word& word,
                     std::size_t from, std::size_t to, std::uint32_t depth);
  bool item_ready(const Item& item, const Assignment& sigma) const;

  const Grammar& g_;
  Budget budget_;
  std::vector<std::vector<std::uint32_t>> rules_by_head_;
  std::unordered_map<Key, MemoState, KeyHash> memo_;
  std::uint64_t steps_ = 0;
  bool exhausted_ = false;
};

OracleVerdict oracle_accepts(const Grammar& g, const Word& word, const Budget& budget = {});

struct LanguageSample {
  std::vector<Word> members;    // words proved derivable
  std::vector<Word> undecided;  // words whose search tripped the budget
};

// Decide every word over the grammar's terminal alphabet of length <= max_len
// (length-major, lexicographic within a length) with one shared session.
LanguageSample oracle_language_upto(const Grammar& g, std::size_t max_len,
                                    const Budget& budget = {});

}  // namespace lmg

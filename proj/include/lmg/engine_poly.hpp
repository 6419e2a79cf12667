#pragma once
// Memoizing recognizer for non-combinatorial, left-binding grammars that are
// provably free of left recursion.
//
// Under those restrictions every value a variable can take during a rule
// body walk is a contiguous slice of some frame word: the main input, or a
// side frame introduced by a slash whose denominator is a literal word.
// Values are therefore represented as spans relative to the current frame,
// or as interned literal words when they must cross frames.  A predicate
// call is (nonterminal, argument values, frame, position) and is memoized on
// exactly that tuple, so the number of distinct calls — and with it the
// running time — is polynomial in the input length, with the exponent given
// by the grammar's complexity profile.
//
// The body walk threads one input position left to right.  Left-binding
// guarantees every variable an item mentions is already bound when the walk
// reaches it: left-hand-side single-variable patterns bind up front,
// quantifiers bind what their body consumed, and each multi-variable pattern
// is resolved by its slash items in order, the numerator deciding how much
// of the pending remainder the next variable takes (the trailing variable
// absorbs the rest).  No decomposition is ever enumerated blindly.
//
// Re-entering a call that is still in flight would mean the static
// left-recursion approximation was wrong; the run aborts with
// DynamicLeftRecursion (unreachable when the grammar is provably free).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lmg/analysis.hpp"
#include "lmg/derivation.hpp"
#include "lmg/grammar.hpp"

namespace lmg {

enum class PolyStatus { Accept, Reject, NotEligible, DynamicLeftRecursion };

std::string poly_status_name(PolyStatus s);

struct PolyStats {
  std::uint64_t calls = 0;         // predicate calls, memo hits included
  std::uint64_t memo_entries = 0;  // distinct calls actually evaluated
};

struct PolyResult {
  PolyStatus status = PolyStatus::Reject;
  std::string detail;  // refusal reasons / abort cause
  PolyStats stats;
  // One derivation of the input, when requested and status == Accept.
  // Extracted deterministically by re-walking the hot memo.
  std::shared_ptr<const DerivNode> tree;
};

class PolyRecognizer {
 public:
  explicit PolyRecognizer(const Grammar& g);
  PolyRecognizer(const Grammar& g, const AnalysisReport& report);
  ~PolyRecognizer();

  PolyRecognizer(const PolyRecognizer&) = delete;
  PolyRecognizer& operator=(const PolyRecognizer&) = delete;

  bool eligible() const;
  const std::vector<std::string>& reasons() const;

  // Decides the input; per-run state (memo, frames, stats) is reset first.
  PolyResult run(const Word& input, bool want_tree = false);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.  Refuses (NotEligible) instead of falling
// back when the grammar does not qualify.
PolyResult recognize_poly(const Grammar& g, const Word& input, bool want_tree = false);

}  // namespace lmg

#pragma once
// Backtracking recognizer and parser for arbitrary grammars.
//
// A predicate call is (nonterminal, argument words, target word, start
// position); it computes the set of positions the call can consume up to.
// Calls are memoized on exactly that tuple.  The target word is usually the
// main input, but slash items with a bound denominator run their numerator
// against the denominator's value, so target words are interned in a small
// pool and the pool id is part of the call key.
//
// Variables bound on the left-hand side are bound up front by enumerating the
// ways the argument words decompose over the patterns.  Quantifier binders
// are bound when their item consumes input.  An item that mentions a variable
// which is not yet bound (possible in grammars that are not left-binding) has
// its extent guessed and its check deferred to the end of the rule body, when
// every variable has a value.
//
// A call that re-enters an identical in-flight call would loop forever (any
// progress would have changed the key), so the engine aborts the whole query
// with LeftRecursion.  The in-flight set is maintained even when memoization
// is switched off.  Step and depth limits abort with StepLimit / DepthLimit.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lmg/derivation.hpp"
#include "lmg/grammar.hpp"

namespace lmg {

struct Limits {
  std::uint64_t max_steps = 10'000'000;
  std::uint32_t max_depth = 10'000;
  std::size_t max_trees = 64;  // parse: derivations kept per memo entry and overall
};

struct GeneralOptions {
  Limits limits;
  bool memoize = true;
};

enum class GeneralStatus { Accept, Reject, LeftRecursion, StepLimit, DepthLimit };

std::string general_status_name(GeneralStatus s);

struct GeneralStats {
  std::uint64_t steps = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_entries = 0;
};

struct GeneralResult {
  GeneralStatus status = GeneralStatus::Reject;
  std::string detail;  // human-readable cause for aborts
  GeneralStats stats;
};

struct GeneralParseResult {
  GeneralStatus status = GeneralStatus::Reject;
  std::string detail;
  GeneralStats stats;
  // Distinct derivations of the input, capped at limits.max_trees.  The
  // accept/reject status comes from the recognizer and is exact even when
  // the tree list is capped.
  std::vector<std::shared_ptr<const DerivNode>> trees;
};

GeneralResult recognize_general(const Grammar& g, const Word& word,
                                const GeneralOptions& options = {});
GeneralParseResult parse_general(const Grammar& g, const Word& word,
                                 const GeneralOptions& options = {});

}  // namespace lmg

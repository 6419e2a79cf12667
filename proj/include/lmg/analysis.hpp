// lmg/analysis.hpp - static restriction checks that gate engine selection.
//
// Three properties decide whether the cubic-style memoizing engine may run:
//
//   non-combinatorial: every argument of a RHS predicate is a single
//     variable or a literal terminal word (literals, including the empty
//     word, are an extension over the variable-only definition and are
//     reported separately);
//
//   left-binding: items depend only on variables already bound to their
//     left, and every multi-variable LHS vector is resolved by slash items,
//     one per prefix variable, in order (the trailing variable is bound
//     implicitly when the last prefix slash completes);
//
//   left-recursion freedom: approximated conservatively over the call graph
//     whose edges skip only input-nullable items.  "provably free" is sound:
//     the engines' dynamic re-entry detector cannot fire on such a grammar.

#pragma once

#include <string>
#include <vector>

#include "lmg/grammar.hpp"

namespace lmg {

struct ArgOffender {
  std::uint32_t rule = 0;
  std::uint32_t item = 0;
  std::uint32_t arg = 0;  // argument position within the predicate
};

struct NonCombinatorialReport {
  bool ok = true;         // literals admitted
  bool strict_ok = true;  // single variables only
  std::vector<ArgOffender> offenders;     // composite arguments
  std::vector<ArgOffender> literal_args;  // literal-word arguments (extension)
};

struct LeftBindingOffender {
  std::uint32_t rule = 0;
  std::uint32_t item = 0;
  std::string variable;
  std::string reason;
};

struct LeftBindingReport {
  bool ok = true;
  std::vector<LeftBindingOffender> condition1;  // use before binding
  std::vector<LeftBindingOffender> condition2;  // vector not slash-resolved in order
};

enum class LeftRecursionVerdict { ProvablyFree, PossiblyRecursive };

struct LeftRecursionReport {
  LeftRecursionVerdict verdict = LeftRecursionVerdict::ProvablyFree;
  std::vector<NonterminalId> witness_cycle;  // closed walk, first == last, when recursive
  std::string witness_text;                  // "A -> B -> A"
};

struct ComplexityProfile {
  std::uint32_t m = 0;  // longest RHS (items)
  std::uint32_t p = 0;  // greatest nonterminal arity
  std::uint32_t time_exponent = 1;   // 1 + m + 2p
  std::uint32_t space_exponent = 2;  // 2 + 2p
};

struct AnalysisReport {
  NonCombinatorialReport non_combinatorial;
  LeftBindingReport left_binding;
  LeftRecursionReport left_recursion;
  ComplexityProfile profile;
};

NonCombinatorialReport check_non_combinatorial(const Grammar& g);
LeftBindingReport check_left_binding(const Grammar& g);
LeftRecursionReport check_left_recursion(const Grammar& g);
ComplexityProfile complexity_profile(const Grammar& g);
AnalysisReport analyze(const Grammar& g);

// Per-nonterminal "can consume zero input" under argument abstraction; the
// left-recursion approximation and both engines share this notion.
std::vector<bool> nullable_heads(const Grammar& g);

enum class EngineClass { PolyEligible, GeneralOnly };

struct Eligibility {
  EngineClass engine = EngineClass::GeneralOnly;
  std::vector<std::string> reasons;  // empty when PolyEligible
};

// Poly-eligible iff non-combinatorial (literals admitted), left-binding and
// provably free of left recursion.
Eligibility engine_eligibility(const AnalysisReport& report);

std::string analysis_to_text(const AnalysisReport& report, const Grammar& g);
std::string analysis_to_machine(const AnalysisReport& report);

}  // namespace lmg

// lmg/derivation.hpp - derivation trees, their verification and rendering.
//
// A derivation node records one rule activation: which rule fired, the
// words its LHS argument positions matched, the value of every rule
// variable, the word the activation consumed (its yield), and one child per
// nonterminal obligation on the RHS in item order.  Slash-numerator children
// derive the denominator word rather than input, so every node carries its
// own yield; spans are relative to the word frame the node was parsed in.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lmg/grammar.hpp"

namespace lmg {

enum class ChildRole { Predicate, QuantifierBody, SlashNumerator };

struct DerivNode {
  std::uint32_t rule = 0;            // index into Grammar::rules
  std::vector<Word> lhs_args;        // one word per LHS argument position
  std::vector<Word> bindings;        // indexed by rule-local VariableId
  Word yield;                        // tokens this activation consumed
  std::uint32_t span_begin = 0;      // within the node's word frame
  std::uint32_t span_end = 0;

  struct Child {
    std::uint32_t item = 0;          // RHS item index the obligation came from
    ChildRole role = ChildRole::Predicate;
    std::shared_ptr<const DerivNode> node;
  };
  std::vector<Child> children;
};

// Structural verification without search: the rule exists, bindings
// concatenate to the LHS argument words, items left to right consume exactly
// the yield (slash items consuming nothing, their numerator children
// deriving the denominator word), and every child matches its obligation's
// head and instantiated arguments.  Checks the whole subtree.
bool check_derivation(const Grammar& g, const DerivNode& node);

// check_derivation plus: the node is an activation of a start rule with the
// given input as its yield.
bool replay(const Grammar& g, const DerivNode& root, const Word& input);

// Human-readable nested rendering; also serves as the canonical form for
// deduplicating derivation sets.
std::string derivation_to_text(const Grammar& g, const DerivNode& node);

}  // namespace lmg

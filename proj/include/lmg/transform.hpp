#pragma once
// Grammar transformations and the context-free reference machinery.
//
// backbone_grammar flattens a grammar to a context-free skeleton: terminals
// stay, a right-hand-side predicate becomes its bare nonterminal, a slash
// item contributes its numerator's image at the slash's own position, and a
// quantifier item becomes a fresh epsilon placeholder nonterminal (one per
// distinct quantified predicate).  backbone_tree maps a derivation to a
// parse tree of that skeleton; the quantifier placeholders carry the
// quantified sub-derivation as an out-of-line annotation.
//
// intersect builds a grammar for the intersection of two context-free
// languages: both grammars are imported with tagged nonterminal names, and a
// fresh start rule binds the input with a quantifier over the first start
// symbol and replays it through the second with a slash.
//
// cf_parse is a deliberately plain memoizing recursive-descent recognizer
// for context-free grammars; the cubic engine's per-call memo discipline is
// modeled on it, so their entry counts can be compared exactly.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmg/derivation.hpp"
#include "lmg/grammar.hpp"

namespace lmg {

struct CFSymbol {
  bool terminal = false;
  std::uint32_t id = 0;
  bool operator==(const CFSymbol&) const = default;
};

struct CFRule {
  std::uint32_t head = 0;
  std::vector<CFSymbol> rhs;
  bool operator==(const CFRule&) const = default;
};

struct CFGrammar {
  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::uint32_t start = 0;
  std::vector<CFRule> rules;
};

std::uint32_t cf_intern_nonterminal(CFGrammar& cf, const std::string& name);
std::uint32_t cf_intern_terminal(CFGrammar& cf, const std::string& text);
std::string cf_to_text(const CFGrammar& cf);

// The context-free skeleton described above.  Rules whose head becomes
// unreachable from the start symbol (typically nonterminals that only ever
// occurred quantified) are pruned, so a grammar that is already context-free
// and fully reachable maps to itself.
CFGrammar backbone_grammar(const Grammar& g);

struct BackboneTree {
  std::string label;
  bool leaf = false;  // terminal leaf
  std::vector<BackboneTree> children;
  // For quantifier placeholders: the derivation of the quantified predicate,
  // which lives outside the skeleton (null for terminal-bodied quantifiers).
  std::shared_ptr<const DerivNode> extraposed;
};

// The skeleton parse tree of a derivation; labels match backbone_grammar(g).
BackboneTree backbone_tree(const Grammar& g, const DerivNode& node);

// Terminal leaf labels, left to right.
std::vector<std::string> backbone_yield(const BackboneTree& t);

// Is t a parse tree of cf (rooted at the start symbol when require_start)?
bool cf_valid_parse_tree(const CFGrammar& cf, const BackboneTree& t, bool require_start = true);

// A context-free grammar as a grammar with only nullary predicates.
Grammar to_lmg(const CFGrammar& cf);

// The reverse view: succeeds only when every rule is a plain sequence of
// terminals and nullary predicates.
std::optional<CFGrammar> cf_from_lmg(const Grammar& g);

// Grammar whose language is L(a) intersected with L(b); see above.  Works
// for arbitrary grammars: every nonterminal of a is imported under its name
// suffixed "1", every nonterminal of b under "2" (suffixes grow with "_"
// until clear of terminal spellings), and a fresh nullary start takes the
// glue rule.  Variable spellings that would collide with a symbol name in
// the merged grammar are freshened the same way.
Grammar intersect(const Grammar& a, const Grammar& b);
Grammar intersect(const CFGrammar& a, const CFGrammar& b);

struct CFParseStats {
  std::uint64_t memo_entries = 0;  // distinct (nonterminal, position) calls evaluated
};

struct CFParseResult {
  bool accept = false;
  CFParseStats stats;
};

CFParseResult cf_parse(const CFGrammar& cf, const std::vector<std::string>& tokens);

// True when a nonterminal bijection (terminals and start matched by name /
// position) carries one rule set onto the other.
bool cf_grammars_isomorphic(const CFGrammar& a, const CFGrammar& b);

}  // namespace lmg

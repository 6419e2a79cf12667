// lmg/syntax.hpp - the .lmg text format: parser, canonical printer, tokenizers.
//
// Format sketch (UTF-8, LF or CRLF, '#' comments):
//
//   start S;
//   S() -> x:A() B(x) ;
//   A() -> "a" A() ;
//   A() -> ;
//   B(x y) -> "a"/x "b" B(y) "c" ;
//   B(()) -> ;
//
// Nonterminals start uppercase, variables lowercase, terminals are quoted.
// A rule's LHS argument positions are comma-separated vectors of variables;
// "()" is the empty vector.  "B()" alone is ambiguous between arity 0 and a
// single empty slot and is resolved by the arity the rest of the grammar
// establishes for B.  Nullary predicates may drop their parentheses on the
// RHS.  Slash denominators are restricted to a single variable, a single
// quoted terminal, or "()" for the empty word.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lmg/grammar.hpp"

namespace lmg {

enum class TokenMode { Words, Chars };

struct SyntaxError {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::string message;
};

struct GrammarParse {
  std::optional<Grammar> grammar;  // present iff errors is empty
  std::vector<SyntaxError> errors;
  bool ok() const { return grammar.has_value() && errors.empty(); }
};

// Parses .lmg text.  A grammar is produced only when the text is both
// well-formed and passes validate_grammar; validation defects are reported
// here with the offending rule's source line.
GrammarParse parse_grammar(std::string_view text);

// Canonical text form: one rule per line in definition order, all
// parentheses explicit, terminals quoted.  parse_grammar(print_grammar(g))
// reproduces g (grammars_equal).
std::string print_grammar(const Grammar& g);

// Splits an input into tokens: Words on whitespace, Chars one token per
// UTF-8 code point (whitespace dropped in both modes).
std::vector<std::string> tokenize(std::string_view input, TokenMode mode);

}  // namespace lmg

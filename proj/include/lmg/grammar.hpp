// lmg/grammar.hpp - in-memory model for literal movement grammars.
//
// A grammar is a set of rewrite rules whose nonterminals carry string-valued
// arguments.  Rule left-hand sides bind argument positions to vectors of
// variables; right-hand sides are sequences of items:
//
//   predicate items   A(t1,...,tk)  or a bare terminal   "a"
//   quantifier items  x:phi         (phi consumes input, x is bound to it)
//   slash items       phi/t         (phi must derive the word t, consuming
//                                    no input at this position)
//
// All names are interned: nonterminals, terminals and (per rule) variables
// are small integer ids.  A Grammar is immutable once validated and can be
// shared freely across recognizer sessions and threads.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace lmg {

using NonterminalId = std::uint32_t;
using TerminalId = std::uint32_t;
using VariableId = std::uint32_t;  // index into Rule::var_names, rule-scoped

// A word is a (possibly empty) sequence of terminal ids.
using Word = std::vector<TerminalId>;

struct TerminalRef {
  TerminalId id;
  bool operator==(const TerminalRef&) const = default;
};

struct VarRef {
  VariableId id;
  bool operator==(const VarRef&) const = default;
};

using TermElement = std::variant<TerminalRef, VarRef>;

// A term is a sequence of terminals and variables.  The empty term denotes
// the empty word; a term consisting solely of variables is a vector.
using Term = std::vector<TermElement>;

struct TerminalPred {
  TerminalId terminal;
  bool operator==(const TerminalPred&) const = default;
};

struct NonterminalPred {
  NonterminalId head;
  std::vector<Term> args;  // size must equal the head's arity
  bool operator==(const NonterminalPred&) const = default;
};

using Predicate = std::variant<TerminalPred, NonterminalPred>;

struct PredItem {
  Predicate pred;
  bool operator==(const PredItem&) const = default;
};

struct QuantItem {
  VariableId binder;
  Predicate body;
  bool operator==(const QuantItem&) const = default;
};

struct SlashItem {
  Predicate numerator;
  Term denominator;
  bool operator==(const SlashItem&) const = default;
};

using Item = std::variant<PredItem, QuantItem, SlashItem>;

struct Rule {
  NonterminalId head = 0;
  // One pattern per argument position of head; each pattern is a vector of
  // distinct variables (empty = the rule only matches the empty word there).
  std::vector<std::vector<VariableId>> patterns;
  std::vector<Item> rhs;
  // Rule-scoped variable spellings; VariableId indexes into this.
  std::vector<std::string> var_names;

  bool operator==(const Rule&) const = default;
};

// Interned symbol names.  Nonterminal and terminal namespaces are disjoint
// id spaces; variable names live on the rules themselves.
class SymbolTable {
 public:
  NonterminalId intern_nonterminal(std::string_view name);
  TerminalId intern_terminal(std::string_view text);

  std::optional<NonterminalId> find_nonterminal(std::string_view name) const;
  std::optional<TerminalId> find_terminal(std::string_view text) const;

  const std::string& nonterminal_name(NonterminalId id) const { return nonterminals_.at(id); }
  const std::string& terminal_text(TerminalId id) const { return terminals_.at(id); }

  std::size_t nonterminal_count() const { return nonterminals_.size(); }
  std::size_t terminal_count() const { return terminals_.size(); }

 private:
  std::vector<std::string> nonterminals_;
  std::vector<std::string> terminals_;
  std::unordered_map<std::string, NonterminalId> nonterminal_ids_;
  std::unordered_map<std::string, TerminalId> terminal_ids_;
};

struct Grammar {
  SymbolTable symbols;
  std::vector<std::uint32_t> arity;  // indexed by NonterminalId
  NonterminalId start = 0;           // must be nullary
  std::vector<Rule> rules;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  std::optional<std::uint32_t> rule;  // rule index, or nullopt for grammar-level
  Severity severity = Severity::Error;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }
};

// Checks every structural invariant the rest of the library relies on:
// arities consistent, LHS patterns linear (no repeated variable), every RHS
// variable bound exactly once (LHS pattern or quantifier), no quantifier
// binder reusing another variable, start symbol nullary, and the three name
// spaces pairwise disjoint.  Reports all defects; never throws.
ValidationReport validate_grammar(const Grammar& g);

// Variable -> terminal word, for instantiating a single rule.
using Assignment = std::unordered_map<VariableId, Word>;

struct InstantiatedRule {
  std::vector<Word> lhs_args;  // pattern vectors concatenated under the assignment
  std::vector<Item> rhs;       // assigned variables replaced by their words
};

// Substitutes the assigned variables throughout the rule.  Every LHS pattern
// variable must be assigned (throws std::invalid_argument otherwise);
// quantifier-bound variables are left untouched.
InstantiatedRule instantiate(const Rule& r, const Assignment& a);

// --- small helpers shared across modules ---

// True when the term contains no variables (a literal terminal word,
// possibly empty).
bool term_is_literal(const Term& t);

// Converts a literal term to the word it denotes.  Precondition: term_is_literal.
Word literal_word(const Term& t);

// Single-variable term accessor: returns the variable if the term is exactly
// one VarRef, nullopt otherwise.
std::optional<VariableId> term_single_var(const Term& t);

// Applies a partial assignment to a term; unassigned variables remain.
Term substitute_term(const Term& t, const Assignment& a);

// The predicate inside an item, together with how it is obligated: a slash
// numerator derives the denominator word, everything else consumes input.
const Predicate& item_predicate(const Item& it);

// Interns a token sequence against the grammar's terminal alphabet.  Tokens
// that are not grammar terminals get fresh ids past the alphabet (distinct
// per distinct spelling) so they can never match anything, only occupy
// positions.
Word to_word(const Grammar& g, std::span<const std::string> tokens);

// Renders a word using the grammar's terminal spellings (ids past the
// alphabet print as "?"), tokens joined by a single space.
std::string word_to_string(const Grammar& g, const Word& w);

// Name-based structural equality: same start name, same arities by name,
// same rule sequence with all symbols compared by spelling.  Insensitive to
// interning order, which is what the parse/print round-trip needs.
bool grammars_equal(const Grammar& a, const Grammar& b);

// Convenience for visiting variants.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace lmg

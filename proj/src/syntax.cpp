// .lmg parser and printer.
//
// Parsing runs in two passes: pass one builds a raw syntax tree and records,
// for every nonterminal, the argument counts it occurs with; pass two
// resolves each nonterminal's arity (the ambiguous "B()" spelling means
// "no arguments" or "one empty slot" depending on what the rest of the
// grammar establishes) and lowers the raw tree onto the core model.

#include "lmg/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lmg {

namespace {

// ---------------------------------------------------------------- lexer

enum class TokKind { Upper, Lower, String, LParen, RParen, Comma, Colon, Slash, Arrow, Semi, End };

struct Tok {
  TokKind kind;
  std::string text;
  std::uint32_t line, col;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  std::uint32_t line = 1, col = 1;
  std::vector<SyntaxError>& errors;

  explicit Lexer(std::string_view s, std::vector<SyntaxError>& errs) : src(s), errors(errs) {}

  void advance(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  std::vector<Tok> run() {
    std::vector<Tok> toks;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(c);
        continue;
      }
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance(src[pos]);
        continue;
      }
      std::uint32_t tl = line, tc = col;
      if (c == '"') {
        advance(c);
        std::string text;
        bool closed = false;
        while (pos < src.size()) {
          char d = src[pos];
          if (d == '"') {
            advance(d);
            closed = true;
            break;
          }
          if (d == '\\' && pos + 1 < src.size()) {
            advance(d);
            char e = src[pos];
            if (e == '"' || e == '\\') {
              text += e;
              advance(e);
              continue;
            }
            text += '\\';
            continue;
          }
          if (d == '\n') break;  // strings do not span lines
          text += d;
          advance(d);
        }
        if (!closed) {
          errors.push_back({tl, tc, "unterminated string literal"});
          return toks;
        }
        toks.push_back({TokKind::String, std::move(text), tl, tc});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string name;
        while (pos < src.size()) {
          char d = src[pos];
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
            name += d;
            advance(d);
          } else {
            break;
          }
        }
        bool upper = std::isupper(static_cast<unsigned char>(name[0]));
        toks.push_back({upper ? TokKind::Upper : TokKind::Lower, std::move(name), tl, tc});
        continue;
      }
      switch (c) {
        case '(': toks.push_back({TokKind::LParen, "(", tl, tc}); advance(c); continue;
        case ')': toks.push_back({TokKind::RParen, ")", tl, tc}); advance(c); continue;
        case ',': toks.push_back({TokKind::Comma, ",", tl, tc}); advance(c); continue;
        case ':': toks.push_back({TokKind::Colon, ":", tl, tc}); advance(c); continue;
        case '/': toks.push_back({TokKind::Slash, "/", tl, tc}); advance(c); continue;
        case ';': toks.push_back({TokKind::Semi, ";", tl, tc}); advance(c); continue;
        case '-':
          if (pos + 1 < src.size() && src[pos + 1] == '>') {
            advance('-');
            advance('>');
            toks.push_back({TokKind::Arrow, "->", tl, tc});
            continue;
          }
          [[fallthrough]];
        default:
          errors.push_back({tl, tc, std::string("unexpected character '") + c + "'"});
          advance(c);
          return toks;
      }
    }
    toks.push_back({TokKind::End, "", line, col});
    return toks;
  }
};

// ------------------------------------------------------------- raw tree

struct RawElement {
  bool is_var;
  std::string text;
  std::uint32_t line, col;
};

// One argument slot: empty element list encodes "()".
using RawTerm = std::vector<RawElement>;

struct RawPred {
  bool is_terminal = false;
  std::string text;  // terminal spelling or nonterminal name
  // nullopt: bare nonterminal (definite arity 0).  Empty vector: "()", which
  // is ambiguous between arity 0 and one empty slot.
  std::optional<std::vector<RawTerm>> args;
  std::uint32_t line = 0, col = 0;
};

enum class RawItemKind { Pred, Quant, Slash };

struct RawItem {
  RawItemKind kind;
  std::string binder;  // Quant only
  RawPred pred;        // predicate / body / numerator
  RawTerm denominator; // Slash only; single element or empty
  std::uint32_t line = 0, col = 0;
};

struct RawRule {
  std::string head;
  std::vector<RawTerm> lhs;  // raw LHS slots; "B()" yields an empty list
  bool lhs_ambiguous = false;
  std::vector<RawItem> rhs;
  std::uint32_t line = 0, col = 0;
};

struct Parser {
  std::vector<Tok> toks;
  std::size_t idx = 0;
  std::vector<SyntaxError>& errors;

  Parser(std::vector<Tok> t, std::vector<SyntaxError>& errs) : toks(std::move(t)), errors(errs) {}

  const Tok& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(idx + ahead, toks.size() - 1);
    return toks[i];
  }
  const Tok& take() {
    const Tok& t = toks[std::min(idx, toks.size() - 1)];
    if (idx + 1 < toks.size()) ++idx;
    return t;
  }
  bool at(TokKind k) const { return peek().kind == k; }

  void err_here(std::string msg) {
    const Tok& t = peek();
    errors.push_back({t.line, t.col, std::move(msg)});
  }

  bool expect(TokKind k, const char* what) {
    if (at(k)) {
      take();
      return true;
    }
    err_here(std::string("expected ") + what);
    return false;
  }

  void skip_to_semi() {
    while (!at(TokKind::End) && !at(TokKind::Semi)) take();
    if (at(TokKind::Semi)) take();
  }

  // slots := term { ',' term } ; term := '(' ')' | element+
  std::optional<std::vector<RawTerm>> parse_slots() {
    std::vector<RawTerm> slots;
    if (at(TokKind::RParen)) {
      take();
      return slots;  // "()": ambiguous, resolved later
    }
    while (true) {
      RawTerm term;
      if (at(TokKind::LParen)) {
        take();
        if (!expect(TokKind::RParen, "')' closing an empty slot")) return std::nullopt;
      } else {
        while (at(TokKind::Lower) || at(TokKind::String)) {
          const Tok& t = take();
          term.push_back({t.kind == TokKind::Lower, t.text, t.line, t.col});
        }
        if (term.empty()) {
          err_here("expected a variable, quoted terminal, or '()' in argument list");
          return std::nullopt;
        }
      }
      slots.push_back(std::move(term));
      if (at(TokKind::Comma)) {
        take();
        continue;
      }
      break;
    }
    if (!expect(TokKind::RParen, "')' closing the argument list")) return std::nullopt;
    return slots;
  }

  std::optional<RawPred> parse_predicate() {
    if (at(TokKind::String)) {
      const Tok& t = take();
      RawPred p;
      p.is_terminal = true;
      p.text = t.text;
      p.line = t.line;
      p.col = t.col;
      return p;
    }
    if (!at(TokKind::Upper)) {
      err_here("expected a predicate (quoted terminal or nonterminal)");
      return std::nullopt;
    }
    const Tok& t = take();
    RawPred p;
    p.text = t.text;
    p.line = t.line;
    p.col = t.col;
    if (at(TokKind::LParen)) {
      take();
      auto slots = parse_slots();
      if (!slots) return std::nullopt;
      p.args = std::move(*slots);
    }
    return p;
  }

  std::optional<RawItem> parse_item() {
    RawItem item;
    item.line = peek().line;
    item.col = peek().col;
    if (at(TokKind::Lower) && peek(1).kind == TokKind::Colon) {
      item.kind = RawItemKind::Quant;
      item.binder = take().text;
      take();  // ':'
      auto body = parse_predicate();
      if (!body) return std::nullopt;
      item.pred = std::move(*body);
      if (at(TokKind::Slash)) {
        err_here("a slash cannot apply to a quantifier item");
        return std::nullopt;
      }
      return item;
    }
    auto pred = parse_predicate();
    if (!pred) return std::nullopt;
    item.pred = std::move(*pred);
    item.kind = RawItemKind::Pred;
    if (at(TokKind::Slash)) {
      take();
      item.kind = RawItemKind::Slash;
      if (at(TokKind::Lower) || at(TokKind::String)) {
        const Tok& t = take();
        item.denominator.push_back({t.kind == TokKind::Lower, t.text, t.line, t.col});
      } else if (at(TokKind::LParen)) {
        take();
        if (!expect(TokKind::RParen, "')' closing the empty denominator")) return std::nullopt;
      } else {
        err_here("slash denominator must be a single variable, a quoted terminal, or '()'");
        return std::nullopt;
      }
      if (at(TokKind::Slash)) {
        err_here("an item admits only one slash");
        return std::nullopt;
      }
    }
    return item;
  }

  // Returns rules plus the declared start symbol.
  std::pair<std::vector<RawRule>, std::optional<Tok>> run() {
    std::vector<RawRule> rules;
    std::optional<Tok> start;
    while (!at(TokKind::End)) {
      if (at(TokKind::Lower) && peek().text == "start") {
        const Tok& kw = take();
        if (!at(TokKind::Upper)) {
          err_here("expected a nonterminal after 'start'");
          skip_to_semi();
          continue;
        }
        Tok name = take();
        if (!expect(TokKind::Semi, "';' after start declaration")) {
          skip_to_semi();
          continue;
        }
        if (start)
          errors.push_back({kw.line, kw.col, "duplicate start declaration"});
        else
          start = name;
        continue;
      }
      if (!at(TokKind::Upper)) {
        err_here("expected a rule (nonterminal head) or 'start' declaration");
        skip_to_semi();
        continue;
      }
      RawRule rule;
      const Tok& head = take();
      rule.head = head.text;
      rule.line = head.line;
      rule.col = head.col;
      if (!expect(TokKind::LParen, "'(' after the rule head")) {
        skip_to_semi();
        continue;
      }
      auto slots = parse_slots();
      if (!slots) {
        skip_to_semi();
        continue;
      }
      rule.lhs = std::move(*slots);
      rule.lhs_ambiguous = rule.lhs.empty();
      if (!expect(TokKind::Arrow, "'->'")) {
        skip_to_semi();
        continue;
      }
      bool bad = false;
      while (!at(TokKind::Semi) && !at(TokKind::End)) {
        auto item = parse_item();
        if (!item) {
          bad = true;
          break;
        }
        rule.rhs.push_back(std::move(*item));
      }
      if (bad) {
        skip_to_semi();
        continue;
      }
      if (!expect(TokKind::Semi, "';' terminating the rule")) {
        skip_to_semi();
        continue;
      }
      rules.push_back(std::move(rule));
    }
    return {std::move(rules), std::move(start)};
  }
};

// ------------------------------------------------------- arity resolution

struct ArityEvidence {
  std::optional<std::uint32_t> definite;
  std::uint32_t def_line = 0, def_col = 0;
  bool has_ambiguous = false;
};

class Lowering {
 public:
  Lowering(std::vector<RawRule> rules, std::optional<Tok> start, std::vector<SyntaxError>& errs)
      : raw_(std::move(rules)), start_(std::move(start)), errors_(errs) {}

  std::optional<Grammar> run() {
    collect_arities();
    if (!errors_.empty()) return std::nullopt;
    if (!start_) {
      errors_.push_back({1, 1, "missing start declaration"});
      return std::nullopt;
    }
    Grammar g;
    // Intern in first-occurrence order: rule heads and RHS predicates.
    for (const auto& r : raw_) {
      note_nonterminal(g, r.head);
      for (const auto& it : r.rhs) {
        if (!it.pred.is_terminal) note_nonterminal(g, it.pred.text);
      }
    }
    note_nonterminal(g, start_->text);
    g.start = *g.symbols.find_nonterminal(start_->text);

    for (const auto& raw : raw_) {
      if (auto rule = lower_rule(g, raw)) g.rules.push_back(std::move(*rule));
    }
    if (!errors_.empty()) return std::nullopt;

    ValidationReport report = validate_grammar(g);
    for (const auto& d : report.diagnostics) {
      std::uint32_t line = 1, col = 1;
      if (d.rule && *d.rule < raw_.size()) {
        line = raw_[*d.rule].line;
        col = raw_[*d.rule].col;
      } else if (!d.rule && start_) {
        line = start_->line;
        col = start_->col;
      }
      if (d.severity == Severity::Error) errors_.push_back({line, col, d.message});
    }
    if (!errors_.empty()) return std::nullopt;
    return g;
  }

 private:
  void record(const std::string& name, const std::optional<std::vector<RawTerm>>& args,
              std::uint32_t line, std::uint32_t col) {
    ArityEvidence& ev = evidence_[name];
    std::optional<std::uint32_t> k;
    if (!args) {
      k = 0;  // bare nonterminal
    } else if (args->empty()) {
      ev.has_ambiguous = true;  // "()"
      return;
    } else {
      k = static_cast<std::uint32_t>(args->size());
    }
    if (!ev.definite) {
      ev.definite = k;
      ev.def_line = line;
      ev.def_col = col;
    } else if (*ev.definite != *k) {
      errors_.push_back({line, col, name + " used with " + std::to_string(*k) +
                                        " argument(s) but elsewhere with " +
                                        std::to_string(*ev.definite)});
    }
  }

  void collect_arities() {
    for (const auto& r : raw_) {
      std::optional<std::vector<RawTerm>> lhs_args;
      if (!r.lhs_ambiguous) lhs_args = r.lhs;
      record(r.head, r.lhs_ambiguous ? std::optional<std::vector<RawTerm>>(std::vector<RawTerm>{})
                                     : lhs_args,
             r.line, r.col);
      for (const auto& it : r.rhs) {
        if (!it.pred.is_terminal) record(it.pred.text, it.pred.args, it.pred.line, it.pred.col);
      }
    }
    // "()" occurrences only fit arity 0 or 1.
    for (auto& [name, ev] : evidence_) {
      if (ev.has_ambiguous && ev.definite && *ev.definite > 1)
        errors_.push_back({ev.def_line, ev.def_col,
                           name + "() is ambiguous: " + name + " takes " +
                               std::to_string(*ev.definite) + " arguments"});
    }
  }

  std::uint32_t arity_of(const std::string& name) const {
    auto it = evidence_.find(name);
    if (it == evidence_.end() || !it->second.definite) return 0;
    return *it->second.definite;
  }

  void note_nonterminal(Grammar& g, const std::string& name) {
    NonterminalId id = g.symbols.intern_nonterminal(name);
    if (id >= g.arity.size()) g.arity.resize(id + 1, 0);
    g.arity[id] = arity_of(name);
  }

  // Expands "()" / bare spellings to the resolved arity.
  std::vector<RawTerm> effective_slots(const std::string& name,
                                       const std::optional<std::vector<RawTerm>>& args) {
    std::uint32_t k = arity_of(name);
    if (!args) return {};                           // bare: arity 0
    if (args->empty() && k == 1) return {RawTerm{}};  // "()" as one empty slot
    return *args;
  }

  struct VarScope {
    std::vector<std::string>* names;
    std::map<std::string, VariableId> ids;
    VariableId intern(const std::string& name) {
      auto it = ids.find(name);
      if (it != ids.end()) return it->second;
      VariableId id = static_cast<VariableId>(names->size());
      names->push_back(name);
      ids.emplace(name, id);
      return id;
    }
  };

  Term lower_term(Grammar& g, VarScope& scope, const RawTerm& raw) {
    Term t;
    for (const auto& el : raw) {
      if (el.is_var)
        t.push_back(VarRef{scope.intern(el.text)});
      else
        t.push_back(TerminalRef{g.symbols.intern_terminal(el.text)});
    }
    return t;
  }

  Predicate lower_pred(Grammar& g, VarScope& scope, const RawPred& raw) {
    if (raw.is_terminal) return TerminalPred{g.symbols.intern_terminal(raw.text)};
    NonterminalPred p{*g.symbols.find_nonterminal(raw.text), {}};
    for (const auto& slot : effective_slots(raw.text, raw.args))
      p.args.push_back(lower_term(g, scope, slot));
    return p;
  }

  std::optional<Rule> lower_rule(Grammar& g, const RawRule& raw) {
    Rule rule;
    rule.head = *g.symbols.find_nonterminal(raw.head);
    VarScope scope{&rule.var_names, {}};
    std::optional<std::vector<RawTerm>> lhs_args;
    if (!raw.lhs_ambiguous) lhs_args = raw.lhs;
    for (const auto& slot :
         effective_slots(raw.head, raw.lhs_ambiguous
                                       ? std::optional<std::vector<RawTerm>>(std::vector<RawTerm>{})
                                       : lhs_args)) {
      std::vector<VariableId> pattern;
      bool bad = false;
      for (const auto& el : slot) {
        if (!el.is_var) {
          errors_.push_back({el.line, el.col, "left-hand side patterns may contain only variables"});
          bad = true;
          continue;
        }
        pattern.push_back(scope.intern(el.text));
      }
      if (bad) return std::nullopt;
      rule.patterns.push_back(std::move(pattern));
    }
    for (const auto& it : raw.rhs) {
      switch (it.kind) {
        case RawItemKind::Pred:
          rule.rhs.push_back(PredItem{lower_pred(g, scope, it.pred)});
          break;
        case RawItemKind::Quant: {
          VariableId binder = scope.intern(it.binder);
          rule.rhs.push_back(QuantItem{binder, lower_pred(g, scope, it.pred)});
          break;
        }
        case RawItemKind::Slash: {
          Predicate num = lower_pred(g, scope, it.pred);
          Term denom = lower_term(g, scope, it.denominator);
          rule.rhs.push_back(SlashItem{std::move(num), std::move(denom)});
          break;
        }
      }
    }
    return rule;
  }

  std::vector<RawRule> raw_;
  std::optional<Tok> start_;
  std::vector<SyntaxError>& errors_;
  std::map<std::string, ArityEvidence> evidence_;
};

}  // namespace

GrammarParse parse_grammar(std::string_view text) {
  GrammarParse result;
  Lexer lexer(text, result.errors);
  std::vector<Tok> toks = lexer.run();
  if (!result.errors.empty()) return result;
  Parser parser(std::move(toks), result.errors);
  auto [rules, start] = parser.run();
  if (!result.errors.empty()) return result;
  Lowering lowering(std::move(rules), std::move(start), result.errors);
  result.grammar = lowering.run();
  if (!result.errors.empty()) result.grammar.reset();
  return result;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string term_to_text(const Grammar& g, const Rule& r, const Term& t) {
  if (t.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ' ';
    std::visit(overloaded{
                   [&](const TerminalRef& tr) { out += quote(g.symbols.terminal_text(tr.id)); },
                   [&](const VarRef& v) { out += r.var_names.at(v.id); },
               },
               t[i]);
  }
  return out;
}

std::string pred_to_text(const Grammar& g, const Rule& r, const Predicate& p) {
  return std::visit(
      overloaded{
          [&](const TerminalPred& t) { return quote(g.symbols.terminal_text(t.terminal)); },
          [&](const NonterminalPred& np) {
            std::string out = g.symbols.nonterminal_name(np.head) + "(";
            for (std::size_t i = 0; i < np.args.size(); ++i) {
              if (i) out += ", ";
              out += term_to_text(g, r, np.args[i]);
            }
            out += ")";
            return out;
          },
      },
      p);
}

}  // namespace

std::string print_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "start " << g.symbols.nonterminal_name(g.start) << ";\n";
  for (const Rule& r : g.rules) {
    out << g.symbols.nonterminal_name(r.head) << "(";
    for (std::size_t i = 0; i < r.patterns.size(); ++i) {
      if (i) out << ", ";
      if (r.patterns[i].empty()) {
        out << "()";
      } else {
        for (std::size_t j = 0; j < r.patterns[i].size(); ++j) {
          if (j) out << ' ';
          out << r.var_names.at(r.patterns[i][j]);
        }
      }
    }
    out << ") ->";
    for (const Item& item : r.rhs) {
      out << ' ';
      std::visit(overloaded{
                     [&](const PredItem& p) { out << pred_to_text(g, r, p.pred); },
                     [&](const QuantItem& q) {
                       out << r.var_names.at(q.binder) << ':' << pred_to_text(g, r, q.body);
                     },
                     [&](const SlashItem& s) {
                       out << pred_to_text(g, r, s.numerator) << '/';
                       if (s.denominator.empty()) {
                         out << "()";
                       } else if (auto v = term_single_var(s.denominator)) {
                         out << r.var_names.at(*v);
                       } else {
                         out << term_to_text(g, r, s.denominator);
                       }
                     },
                 },
                 item);
    }
    out << " ;\n";
  }
  return out.str();
}

std::vector<std::string> tokenize(std::string_view input, TokenMode mode) {
  std::vector<std::string> tokens;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  if (mode == TokenMode::Words) {
    std::string cur;
    for (char c : input) {
      if (is_space(c)) {
        if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
  }
  // Chars: one token per UTF-8 code point.
  std::size_t i = 0;
  while (i < input.size()) {
    char c = input[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t len = 1;
    unsigned char b = static_cast<unsigned char>(c);
    if ((b & 0x80u) != 0) {
      while (i + len < input.size() &&
             (static_cast<unsigned char>(input[i + len]) & 0xC0u) == 0x80u)
        ++len;
    }
    tokens.emplace_back(input.substr(i, len));
    i += len;
  }
  return tokens;
}

}  // namespace lmg

// lmg: command-line workbench for literal movement grammars.
//
// Exit codes (the only contract scripts should rely on):
//   0  Accept / success
//   1  Reject
//   2  error: unreadable or invalid grammar, bad usage, engine refusal,
//      left recursion detected at run time
//   3  limit: step or depth budget exhausted, oracle budget exhausted

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lmg/analysis.hpp"
#include "lmg/engine_general.hpp"
#include "lmg/engine_poly.hpp"
#include "lmg/oracle.hpp"
#include "lmg/syntax.hpp"
#include "lmg/transform.hpp"

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kError = 2;
constexpr int kLimit = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_syntax_errors(const std::string& path, const std::vector<lmg::SyntaxError>& errors) {
  for (const auto& e : errors)
    std::cerr << path << ":" << e.line << ":" << e.col << ": error: " << e.message << "\n";
}

std::optional<lmg::Grammar> load_grammar(const std::string& path) {
  auto text = read_file(path);
  if (!text) return std::nullopt;
  lmg::GrammarParse parse = lmg::parse_grammar(*text);
  if (!parse.ok()) {
    print_syntax_errors(path, parse.errors);
    return std::nullopt;
  }
  return std::move(*parse.grammar);
}

// ----------------------------------------------------------- shared options

struct InputOpts {
  std::string text;
  std::string file;
  bool use_stdin = false;
  bool text_given = false;
  bool chars = false;

  void attach(CLI::App* cmd, bool required) {
    auto* pos = cmd->add_option("input", text, "input to decide (token text)");
    cmd->add_option("--input-file", file, "read the input from a file");
    cmd->add_flag("--stdin", use_stdin, "read the input from standard input");
    cmd->add_flag("--chars", chars, "one token per character (default: whitespace words)");
    required_ = required;
    pos_ = pos;
  }

  std::optional<std::vector<std::string>> resolve() {
    int sources = (pos_ && pos_->count() ? 1 : 0) + (file.empty() ? 0 : 1) + (use_stdin ? 1 : 0);
    if (sources > 1) {
      std::cerr << "error: choose one input source (argument, --input-file, --stdin)\n";
      return std::nullopt;
    }
    if (sources == 0) {
      if (required_) {
        std::cerr << "error: an input is required (argument, --input-file, or --stdin)\n";
        return std::nullopt;
      }
      return std::vector<std::string>{};
    }
    std::string raw;
    if (use_stdin) {
      std::ostringstream buf;
      buf << std::cin.rdbuf();
      raw = buf.str();
    } else if (!file.empty()) {
      auto contents = read_file(file);
      if (!contents) return std::nullopt;
      raw = *contents;
    } else {
      raw = text;
    }
    return lmg::tokenize(raw, chars ? lmg::TokenMode::Chars : lmg::TokenMode::Words);
  }

 private:
  bool required_ = true;
  CLI::Option* pos_ = nullptr;
};

struct EngineOpts {
  std::string engine = "auto";
  std::uint64_t max_steps = lmg::Limits{}.max_steps;
  std::uint32_t max_depth = lmg::Limits{}.max_depth;
  std::size_t max_trees = lmg::Limits{}.max_trees;

  void attach(CLI::App* cmd, bool with_trees) {
    cmd->add_option("--engine", engine, "auto|general|poly|oracle (default auto)")
        ->check(CLI::IsMember({"auto", "general", "poly", "oracle"}));
    cmd->add_option("--max-steps", max_steps, "step budget");
    cmd->add_option("--max-depth", max_depth, "recursion depth budget");
    if (with_trees) cmd->add_option("--max-trees", max_trees, "derivations kept");
  }

  lmg::Limits limits() const { return {max_steps, max_depth, max_trees}; }
  lmg::Budget budget() const { return {max_steps, max_depth}; }
};

enum class EngineKind { General, Poly, Oracle };

// Resolves --engine against the grammar; refuses (nullopt, message printed)
// when poly is forced onto an ineligible grammar.  auto never silently falls
// back: it picks poly exactly when the grammar qualifies.
std::optional<EngineKind> choose_engine(const lmg::Grammar& g, const std::string& engine) {
  if (engine == "general") return EngineKind::General;
  if (engine == "oracle") return EngineKind::Oracle;
  lmg::Eligibility elig = lmg::engine_eligibility(lmg::analyze(g));
  bool poly_ok = elig.engine == lmg::EngineClass::PolyEligible;
  if (engine == "poly") {
    if (!poly_ok) {
      std::cerr << "error: grammar is not eligible for the poly engine:\n";
      for (const auto& r : elig.reasons) std::cerr << "  - " << r << "\n";
      return std::nullopt;
    }
    return EngineKind::Poly;
  }
  return poly_ok ? EngineKind::Poly : EngineKind::General;
}

int exit_code(lmg::GeneralStatus s) {
  switch (s) {
    case lmg::GeneralStatus::Accept: return kAccept;
    case lmg::GeneralStatus::Reject: return kReject;
    case lmg::GeneralStatus::LeftRecursion: return kError;
    case lmg::GeneralStatus::StepLimit:
    case lmg::GeneralStatus::DepthLimit: return kLimit;
  }
  return kError;
}

int exit_code(lmg::PolyStatus s) {
  switch (s) {
    case lmg::PolyStatus::Accept: return kAccept;
    case lmg::PolyStatus::Reject: return kReject;
    case lmg::PolyStatus::NotEligible:
    case lmg::PolyStatus::DynamicLeftRecursion: return kError;
  }
  return kError;
}

int exit_code(lmg::OracleVerdict v) {
  switch (v) {
    case lmg::OracleVerdict::Yes: return kAccept;
    case lmg::OracleVerdict::No: return kReject;
    case lmg::OracleVerdict::BudgetExhausted: return kLimit;
  }
  return kError;
}

std::string join_tokens(const std::vector<std::string>& tokens, bool chars) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i && !chars) out += ' ';
    out += tokens[i];
  }
  return out;
}

// ------------------------------------------------------------- subcommands

struct ValidateOpts {
  std::string path;
  bool analyze = false;
  bool machine = false;
};

int cmd_validate(const ValidateOpts& o) {
  auto text = read_file(o.path);
  if (!text) return kError;
  lmg::GrammarParse parse = lmg::parse_grammar(*text);
  if (!parse.ok()) {
    print_syntax_errors(o.path, parse.errors);
    if (o.machine) std::cout << "ok=false\n";
    return kError;
  }
  const lmg::Grammar& g = *parse.grammar;
  if (o.machine)
    std::cout << "ok=true\n";
  else
    std::cout << "ok: " << g.rules.size() << " rule(s), "
              << g.symbols.nonterminal_count() << " nonterminal(s), "
              << g.symbols.terminal_count() << " terminal(s), start "
              << g.symbols.nonterminal_name(g.start) << "\n";
  if (o.analyze) {
    lmg::AnalysisReport report = lmg::analyze(g);
    std::cout << (o.machine ? lmg::analysis_to_machine(report) : lmg::analysis_to_text(report, g));
  }
  return kAccept;
}

struct RecognizeOpts {
  std::string path;
  InputOpts input;
  EngineOpts engine;
  bool machine = false;
};

int cmd_recognize(RecognizeOpts& o) {
  auto g = load_grammar(o.path);
  if (!g) return kError;
  auto tokens = o.input.resolve();
  if (!tokens) return kError;
  lmg::Word word = lmg::to_word(*g, *tokens);

  auto kind = choose_engine(*g, o.engine.engine);
  if (!kind) return kError;

  switch (*kind) {
    case EngineKind::Oracle: {
      lmg::OracleSession session(*g, o.engine.budget());
      lmg::OracleVerdict v = session.accepts(word);
      if (o.machine)
        std::cout << "status=" << lmg::oracle_verdict_name(v) << " engine=oracle steps="
                  << session.last_steps() << " memo_entries=" << session.memo_size() << "\n";
      else
        std::cout << lmg::oracle_verdict_name(v) << "\n";
      return exit_code(v);
    }
    case EngineKind::General: {
      lmg::GeneralOptions options;
      options.limits = o.engine.limits();
      lmg::GeneralResult r = lmg::recognize_general(*g, word, options);
      if (!r.detail.empty()) std::cerr << "detail: " << r.detail << "\n";
      if (o.machine)
        std::cout << "status=" << lmg::general_status_name(r.status)
                  << " engine=general steps=" << r.stats.steps
                  << " memo_hits=" << r.stats.memo_hits
                  << " memo_entries=" << r.stats.memo_entries << "\n";
      else
        std::cout << lmg::general_status_name(r.status) << "\n";
      return exit_code(r.status);
    }
    case EngineKind::Poly: {
      lmg::PolyResult r = lmg::recognize_poly(*g, word);
      if (!r.detail.empty()) std::cerr << "detail: " << r.detail << "\n";
      if (o.machine)
        std::cout << "status=" << lmg::poly_status_name(r.status) << " engine=poly calls="
                  << r.stats.calls << " memo_entries=" << r.stats.memo_entries << "\n";
      else
        std::cout << lmg::poly_status_name(r.status) << "\n";
      return exit_code(r.status);
    }
  }
  return kError;
}

void render_backbone(const lmg::BackboneTree& t, std::ostream& out) {
  if (t.leaf) {
    out << '"' << t.label << '"';
    return;
  }
  out << '(' << t.label;
  for (const auto& c : t.children) {
    out << ' ';
    render_backbone(c, out);
  }
  out << ')';
}

struct ParseOpts {
  std::string path;
  InputOpts input;
  EngineOpts engine;
  bool backbone = false;
  bool machine = false;
};

int cmd_parse(ParseOpts& o) {
  auto g = load_grammar(o.path);
  if (!g) return kError;
  auto tokens = o.input.resolve();
  if (!tokens) return kError;
  lmg::Word word = lmg::to_word(*g, *tokens);

  auto kind = choose_engine(*g, o.engine.engine);
  if (!kind) return kError;
  if (*kind == EngineKind::Oracle) {
    std::cerr << "error: the oracle decides membership only; it does not produce derivations\n";
    return kError;
  }

  std::vector<std::shared_ptr<const lmg::DerivNode>> trees;
  int code = kError;
  std::string engine_name;
  std::string status_name;
  if (*kind == EngineKind::Poly) {
    engine_name = "poly";
    lmg::PolyRecognizer rec(*g);
    lmg::PolyResult r = rec.run(word, /*want_tree=*/true);
    if (!r.detail.empty()) std::cerr << "detail: " << r.detail << "\n";
    if (r.tree) trees.push_back(r.tree);
    code = exit_code(r.status);
    status_name = lmg::poly_status_name(r.status);
  } else {
    engine_name = "general";
    lmg::GeneralOptions options;
    options.limits = o.engine.limits();
    lmg::GeneralParseResult r = lmg::parse_general(*g, word, options);
    if (!r.detail.empty()) std::cerr << "detail: " << r.detail << "\n";
    trees = r.trees;
    code = exit_code(r.status);
    status_name = lmg::general_status_name(r.status);
  }

  if (o.machine) std::cout << "status=" << status_name << " engine=" << engine_name
                           << " trees=" << trees.size() << "\n";
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (!o.machine) std::cout << "derivation " << (i + 1) << " of " << trees.size() << ":\n";
    else std::cout << "tree=" << (i + 1) << "\n";
    std::cout << lmg::derivation_to_text(*g, *trees[i]);
    if (o.backbone) {
      lmg::BackboneTree bt = lmg::backbone_tree(*g, *trees[i]);
      std::cout << "backbone: ";
      render_backbone(bt, std::cout);
      std::cout << "\n";
      std::cout << "backbone_yield=" << join_tokens(lmg::backbone_yield(bt), o.input.chars)
                << "\n";
    }
  }
  return code;
}

struct PathOutOpts {
  std::string path;
  std::string path2;
  std::string out;
};

int write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return kAccept;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kError;
  }
  out << text;
  return kAccept;
}

int cmd_backbone(const PathOutOpts& o) {
  auto g = load_grammar(o.path);
  if (!g) return kError;
  return write_or_print(o.out, lmg::cf_to_text(lmg::backbone_grammar(*g)));
}

int cmd_intersect(const PathOutOpts& o) {
  auto a = load_grammar(o.path);
  if (!a) return kError;
  auto b = load_grammar(o.path2);
  if (!b) return kError;
  return write_or_print(o.out, lmg::print_grammar(lmg::intersect(*a, *b)));
}

struct BenchOpts {
  std::string path;
  std::string family = "anbncn";
  std::string n_range = "8,16,32,64";
  EngineOpts engine;
};

std::optional<std::vector<std::uint32_t>> parse_n_range(const std::string& range_text) {
  std::vector<std::uint32_t> ns;
  auto dots = range_text.find("..");
  try {
    if (dots != std::string::npos) {
      // "lo..hi": doubling sequence lo, 2lo, 4lo, ... <= hi
      std::uint32_t lo = static_cast<std::uint32_t>(std::stoul(range_text.substr(0, dots)));
      std::uint32_t hi = static_cast<std::uint32_t>(std::stoul(range_text.substr(dots + 2)));
      if (lo == 0 || hi < lo) return std::nullopt;
      for (std::uint64_t n = lo; n <= hi; n *= 2) ns.push_back(static_cast<std::uint32_t>(n));
    } else {
      std::stringstream ss(range_text);
      std::string part;
      while (std::getline(ss, part, ','))
        if (!part.empty()) ns.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (ns.empty()) return std::nullopt;
  return ns;
}

int cmd_bench(const BenchOpts& o) {
  if (o.family != "anbncn") {
    std::cerr << "error: unknown bench family " << o.family << " (available: anbncn)\n";
    return kError;
  }
  auto g = load_grammar(o.path);
  if (!g) return kError;
  auto ns = parse_n_range(o.n_range);
  if (!ns) {
    std::cerr << "error: bad --n-range (use N,N,... or LO..HI)\n";
    return kError;
  }

  auto kind = choose_engine(*g, o.engine.engine);
  if (!kind) return kError;
  if (*kind == EngineKind::Oracle) {
    std::cerr << "error: bench drives the general or poly engine, not the oracle\n";
    return kError;
  }

  for (std::uint32_t n : *ns) {
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(n) * 3);
    for (std::uint32_t i = 0; i < n; ++i) tokens.emplace_back("a");
    for (std::uint32_t i = 0; i < n; ++i) tokens.emplace_back("b");
    for (std::uint32_t i = 0; i < n; ++i) tokens.emplace_back("c");
    lmg::Word word = lmg::to_word(*g, tokens);

    auto started = std::chrono::steady_clock::now();
    std::string verdict;
    std::uint64_t memo_entries = 0, work = 0;
    const char* work_key = "calls";
    if (*kind == EngineKind::Poly) {
      lmg::PolyResult r = lmg::recognize_poly(*g, word);
      verdict = lmg::poly_status_name(r.status);
      memo_entries = r.stats.memo_entries;
      work = r.stats.calls;
    } else {
      lmg::GeneralOptions options;
      options.limits = o.engine.limits();
      lmg::GeneralResult r = lmg::recognize_general(*g, word, options);
      verdict = lmg::general_status_name(r.status);
      memo_entries = r.stats.memo_entries;
      work = r.stats.steps;
      work_key = "steps";
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cout << "n=" << n << " engine=" << (*kind == EngineKind::Poly ? "poly" : "general")
              << " verdict=" << verdict << " time_us=" << elapsed
              << " memo_entries=" << memo_entries << " " << work_key << "=" << work << "\n";
  }
  return kAccept;
}

struct OracleOpts {
  std::string path;
  InputOpts input;
  std::uint64_t max_steps = lmg::Budget{}.max_steps;
  std::uint32_t max_depth = lmg::Budget{}.max_depth;
  std::int64_t upto = -1;
  bool machine = false;
};

int cmd_oracle(OracleOpts& o) {
  auto g = load_grammar(o.path);
  if (!g) return kError;
  lmg::Budget budget{o.max_steps, o.max_depth};

  if (o.upto >= 0) {
    lmg::LanguageSample sample =
        lmg::oracle_language_upto(*g, static_cast<std::size_t>(o.upto), budget);
    for (const auto& w : sample.members) {
      if (o.machine)
        std::cout << "member=\"" << lmg::word_to_string(*g, w) << "\"\n";
      else
        std::cout << lmg::word_to_string(*g, w) << "\n";
    }
    if (o.machine)
      std::cout << "members=" << sample.members.size()
                << " undecided=" << sample.undecided.size() << "\n";
    if (!sample.undecided.empty()) {
      std::cerr << "warning: " << sample.undecided.size()
                << " word(s) hit the budget and are undecided\n";
      return kLimit;
    }
    return kAccept;
  }

  auto tokens = o.input.resolve();
  if (!tokens) return kError;
  lmg::Word word = lmg::to_word(*g, *tokens);
  lmg::OracleSession session(*g, budget);
  lmg::OracleVerdict v = session.accepts(word);
  if (o.machine)
    std::cout << "status=" << lmg::oracle_verdict_name(v) << " steps=" << session.last_steps()
              << " memo_entries=" << session.memo_size() << "\n";
  else
    std::cout << lmg::oracle_verdict_name(v) << "\n";
  return exit_code(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"literal movement grammar workbench"};
  app.require_subcommand(1);
  int rc = kAccept;

  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "check a grammar file");
  validate->add_option("grammar", vo.path, "grammar file (.lmg)")->required();
  validate->add_flag("--analyze", vo.analyze, "also report restriction classes and profile");
  validate->add_flag("--machine", vo.machine, "machine-readable key=value output");
  validate->callback([&] { rc = cmd_validate(vo); });

  RecognizeOpts ro;
  auto* recognize = app.add_subcommand("recognize", "decide whether the input is in the language");
  recognize->add_option("grammar", ro.path, "grammar file (.lmg)")->required();
  ro.input.attach(recognize, /*required=*/true);
  ro.engine.attach(recognize, /*with_trees=*/false);
  recognize->add_flag("--machine", ro.machine, "machine-readable key=value output");
  recognize->callback([&] { rc = cmd_recognize(ro); });

  ParseOpts po;
  auto* parse = app.add_subcommand("parse", "derive the input and print derivations");
  parse->add_option("grammar", po.path, "grammar file (.lmg)")->required();
  po.input.attach(parse, /*required=*/true);
  po.engine.attach(parse, /*with_trees=*/true);
  parse->add_flag("--backbone", po.backbone, "also print each derivation's backbone tree");
  parse->add_flag("--machine", po.machine, "machine-readable key=value output");
  parse->callback([&] { rc = cmd_parse(po); });

  PathOutOpts bo;
  auto* backbone = app.add_subcommand("backbone", "print the context-free backbone grammar");
  backbone->add_option("grammar", bo.path, "grammar file (.lmg)")->required();
  backbone->add_option("-o,--output", bo.out, "write to a file instead of stdout");
  backbone->callback([&] { rc = cmd_backbone(bo); });

  PathOutOpts io;
  auto* intersect = app.add_subcommand("intersect", "build the intersection grammar");
  intersect->add_option("grammar1", io.path, "first grammar file")->required();
  intersect->add_option("grammar2", io.path2, "second grammar file")->required();
  intersect->add_option("-o,--output", io.out, "write to a file instead of stdout");
  intersect->callback([&] { rc = cmd_intersect(io); });

  BenchOpts eo;
  auto* bench = app.add_subcommand("bench", "time a family of inputs and report counters");
  bench->add_option("grammar", eo.path, "grammar file (.lmg)")->required();
  bench->add_option("--family", eo.family, "input family (anbncn)");
  bench->add_option("--n-range", eo.n_range, "sizes: N,N,... or LO..HI (doubling)");
  eo.engine.attach(bench, /*with_trees=*/false);
  bench->callback([&] { rc = cmd_bench(eo); });

  OracleOpts oo;
  auto* oracle = app.add_subcommand("oracle", "exhaustive reference decision");
  oracle->add_option("grammar", oo.path, "grammar file (.lmg)")->required();
  oo.input.attach(oracle, /*required=*/true);  // unless --upto enumerates instead
  oracle->add_option("--max-steps", oo.max_steps, "step budget per query");
  oracle->add_option("--max-depth", oo.max_depth, "nesting budget");
  oracle->add_option("--upto", oo.upto, "enumerate the language up to this length instead");
  oracle->add_flag("--machine", oo.machine, "machine-readable key=value output");
  oracle->callback([&] { rc = cmd_oracle(oo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kAccept : kError;
  }
  return rc;
}

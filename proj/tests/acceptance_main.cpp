// Acceptance checks: eight end-to-end guarantees the workbench must uphold,
// one pass/fail line each.  Exit status is nonzero when any check fails.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lmg/analysis.hpp"
#include "lmg/derivation.hpp"
#include "lmg/engine_general.hpp"
#include "lmg/engine_poly.hpp"
#include "lmg/oracle.hpp"
#include "lmg/syntax.hpp"
#include "lmg/transform.hpp"
#include "test_util.hpp"

using namespace lmg;
using testutil::chars;
using testutil::load_fixture;
using testutil::words;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// All words over the given alphabet up to max_len, shortest first.
std::vector<std::string> all_words(const std::string& alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

bool is_triple_block(const std::string& w) {
  std::size_t n = 0;
  while (n < w.size() && w[n] == 'a') ++n;
  if (w.size() != 3 * n) return false;
  for (std::size_t i = n; i < 2 * n; ++i)
    if (w[i] != 'b') return false;
  for (std::size_t i = 2 * n; i < 3 * n; ++i)
    if (w[i] != 'c') return false;
  return true;
}

std::string flat(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

struct Failure {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

// ---------------------------------------------------------------- check 1
// Exhaustive decision agreement on the triple-count language.

std::string check_triple_language_exactly() {
  auto start = Clock::now();
  Grammar g = load_fixture("anbncn.lmg");
  OracleSession oracle(g);
  PolyRecognizer poly(g);
  expect(poly.eligible(), "memoizing engine refused the triple-count grammar");

  std::vector<std::string> candidates = all_words("abc", 9);
  std::size_t members = 0;
  for (const std::string& text : candidates) {
    bool expected = is_triple_block(text);
    members += expected ? 1 : 0;
    Word input = to_word(g, chars(text));

    OracleVerdict ov = oracle.accepts(input);
    expect(ov != OracleVerdict::BudgetExhausted,
           "exhaustive decider ran out of budget on \"" + text + "\"");
    expect((ov == OracleVerdict::Yes) == expected,
           "exhaustive decider wrong on \"" + text + "\"");

    GeneralStatus gs = recognize_general(g, input).status;
    expect(gs == GeneralStatus::Accept || gs == GeneralStatus::Reject,
           "backtracking engine aborted on \"" + text + "\"");
    expect((gs == GeneralStatus::Accept) == expected,
           "backtracking engine wrong on \"" + text + "\"");

    PolyStatus ps = poly.run(input).status;
    expect((ps == PolyStatus::Accept) == expected,
           "memoizing engine wrong on \"" + text + "\"");
  }
  expect(members == 4, "expected exactly 4 members up to length 9");
  double elapsed = seconds_since(start);
  expect(elapsed < 60.0, "exceeded the 60 s budget");

  std::ostringstream note;
  note << candidates.size() << " words over {a,b,c} up to length 9, " << members
       << " members, three deciders unanimous, " << static_cast<int>(elapsed * 1000) << " ms";
  return note.str();
}

// ---------------------------------------------------------------- check 2
// Crossed-dependency clauses: real sentences in, scrambles out.

std::string check_crossed_dependencies() {
  auto start = Clock::now();
  Grammar g = load_fixture("dutch.lmg");

  const char* positives[] = {
      "dat jan marie kuste",
      "jan kuste marie",
      "kuste jan marie",
      "dat marie jan fred anne hoorde helpen overtuigen",
      "marie zag fred anne kussen",
  };
  for (const char* s : positives) {
    GeneralStatus st = recognize_general(g, to_word(g, words(s))).status;
    expect(st == GeneralStatus::Accept, std::string("expected Accept for \"") + s + "\"");
  }

  const char* negatives[] = {
      "dat kuste jan marie",
      "jan marie kuste",
      "kuste marie",
      "marie jan kuste",
      "dat jan kuste marie",
      "dat marie jan fred anne hoorde overtuigen helpen",
      "hoorde helpen overtuigen dat marie jan fred anne",
      "marie fred anne zag kussen",
      "zag marie fred kussen anne",
      "dat marie jan anne fred overtuigen hoorde helpen",
  };
  OracleSession oracle(g);
  for (const char* s : negatives) {
    Word input = to_word(g, words(s));
    OracleVerdict ov = oracle.accepts(input);
    expect(ov == OracleVerdict::No,
           std::string("reference decision is not No for \"") + s + "\"");
    GeneralStatus st = recognize_general(g, input).status;
    expect(st == GeneralStatus::Reject, std::string("expected Reject for \"") + s + "\"");
  }
  double elapsed = seconds_since(start);
  expect(elapsed < 10.0, "exceeded the 10 s budget");

  std::ostringstream note;
  note << "5 sentences accepted, 10 reference-confirmed scrambles rejected, "
       << static_cast<int>(elapsed * 1000) << " ms";
  return note.str();
}

// ---------------------------------------------------------------- check 3
// Static analysis sorts the corpus into the right restriction classes.

std::string check_restriction_classification() {
  Grammar triple = load_fixture("anbncn.lmg");
  AnalysisReport tr = analyze(triple);
  expect(tr.non_combinatorial.ok && tr.non_combinatorial.strict_ok,
         "triple-count grammar should pass the single-variable argument checks");
  expect(tr.left_binding.ok, "triple-count grammar should be left-binding");
  expect(tr.left_recursion.verdict == LeftRecursionVerdict::ProvablyFree,
         "triple-count grammar should be provably free of left recursion");
  expect(engine_eligibility(tr).engine == EngineClass::PolyEligible,
         "triple-count grammar should qualify for the memoizing engine");

  Grammar dutch = load_fixture("dutch.lmg");
  AnalysisReport dr = analyze(dutch);
  expect(!dr.non_combinatorial.ok, "verb-raising grammar should have a composite argument");
  expect(dr.non_combinatorial.offenders.size() == 1,
         "expected exactly one composite-argument offender");
  const ArgOffender& off = dr.non_combinatorial.offenders[0];
  expect(off.rule == 5 && off.item == 1 && off.arg == 1,
         "composite argument reported at the wrong position");
  expect(dutch.symbols.nonterminal_name(dutch.rules[off.rule].head) == "VP",
         "composite argument attributed to the wrong rule head");
  expect(dr.left_binding.ok, "verb-raising grammar should still be left-binding");
  expect(engine_eligibility(dr).engine == EngineClass::GeneralOnly,
         "verb-raising grammar should fall back to the backtracking engine");

  LeftBindingReport la = check_left_binding(load_fixture("leftbind_a.lmg"));
  expect(!la.ok && !la.condition1.empty() && la.condition2.empty(),
         "use-before-binding fixture should violate exactly condition one");
  LeftBindingReport lb = check_left_binding(load_fixture("leftbind_b.lmg"));
  expect(!lb.ok && !lb.condition2.empty(),
         "vector-consumed-by-predicate fixture should violate condition two");
  LeftBindingReport lc = check_left_binding(load_fixture("leftbind_c.lmg"));
  expect(!lc.ok && !lc.condition2.empty(),
         "early-trailing-variable fixture should violate condition two");

  LeftRecursionReport hr = check_left_recursion(load_fixture("hidden_leftrec.lmg"));
  expect(hr.verdict == LeftRecursionVerdict::PossiblyRecursive && !hr.witness_cycle.empty(),
         "empty-slash cycle should be flagged as possibly recursive with a witness");

  return "7 grammars, every verdict and offender position as required";
}

// ---------------------------------------------------------------- check 4
// The context-free skeleton and the deep/surface split of its trees.

std::string check_skeleton() {
  Grammar g = load_fixture("anbncn.lmg");
  CFGrammar cf = backbone_grammar(g);

  CFGrammar reference;
  std::uint32_t S = cf_intern_nonterminal(reference, "S");
  std::uint32_t XP = cf_intern_nonterminal(reference, "XP");
  std::uint32_t B = cf_intern_nonterminal(reference, "B");
  std::uint32_t a = cf_intern_terminal(reference, "a");
  std::uint32_t b = cf_intern_terminal(reference, "b");
  std::uint32_t c = cf_intern_terminal(reference, "c");
  reference.start = S;
  reference.rules.push_back({S, {{false, XP}, {false, B}}});
  reference.rules.push_back({B, {{true, a}, {true, b}, {false, B}, {true, c}}});
  reference.rules.push_back({B, {}});
  reference.rules.push_back({XP, {}});
  expect(cf_grammars_isomorphic(cf, reference),
         "skeleton is not isomorphic to the four-rule reference");

  GeneralParseResult r = parse_general(g, to_word(g, chars("aabbcc")));
  expect(r.trees.size() == 1, "expected a unique derivation of aabbcc");
  BackboneTree t = backbone_tree(g, *r.trees[0]);
  expect(cf_valid_parse_tree(cf, t), "skeleton tree is not a parse tree of the skeleton");
  expect(flat(backbone_yield(t)) == "ababcc",
         "skeleton yield of aabbcc should be ababcc, got " + flat(backbone_yield(t)));

  PolyRecognizer poly(g);
  for (int n = 1; n <= 3; ++n) {
    std::string surface(static_cast<std::size_t>(n), 'a');
    surface.append(static_cast<std::size_t>(n), 'b');
    surface.append(static_cast<std::size_t>(n), 'c');
    std::string deep;
    for (int i = 0; i < n; ++i) deep += "ab";
    deep.append(static_cast<std::size_t>(n), 'c');
    PolyResult pr = poly.run(to_word(g, chars(surface)), /*want_tree=*/true);
    expect(pr.tree != nullptr, "no derivation tree for " + surface);
    std::string got = flat(backbone_yield(backbone_tree(g, *pr.tree)));
    expect(got == deep, "deep structure of " + surface + " should be " + deep + ", got " + got);
  }
  return "four-rule skeleton isomorphic to the reference, deep yields (ab)^n c^n for n=1..3";
}

// ---------------------------------------------------------------- check 5
// Intersection grammars accept exactly the common words.

CFGrammar random_cf(std::uint32_t seed) {
  std::mt19937 rng(seed);
  CFGrammar cf;
  std::uint32_t term[2] = {cf_intern_terminal(cf, "a"), cf_intern_terminal(cf, "b")};
  std::uniform_int_distribution<int> nt_count_dist(2, 4);
  int nts = nt_count_dist(rng);
  for (int i = 0; i < nts; ++i)
    cf_intern_nonterminal(cf, "P" + std::to_string(i));
  cf.start = 0;
  std::uniform_int_distribution<int> rule_count_dist(1, 3);
  std::uniform_int_distribution<int> percent(0, 99);
  std::uniform_int_distribution<int> extra_dist(0, 2);
  std::uniform_int_distribution<int> term_pick(0, 1);
  std::uniform_int_distribution<int> nt_pick(0, nts - 1);
  for (int h = 0; h < nts; ++h) {
    int rules = rule_count_dist(rng);
    for (int r = 0; r < rules; ++r) {
      CFRule rule;
      rule.head = static_cast<std::uint32_t>(h);
      if (percent(rng) >= 25) {
        // Never left-recursive: every nonempty right side starts with a
        // terminal, so recursive calls always sit after consumed input.
        rule.rhs.push_back({true, term[static_cast<std::size_t>(term_pick(rng))]});
        int extra = extra_dist(rng);
        for (int e = 0; e < extra; ++e) {
          if (percent(rng) < 50)
            rule.rhs.push_back({true, term[static_cast<std::size_t>(term_pick(rng))]});
          else
            rule.rhs.push_back({false, static_cast<std::uint32_t>(nt_pick(rng))});
        }
      }
      cf.rules.push_back(rule);
    }
  }
  return cf;
}

// B accepts everything A does: extra rules only ever add words.
CFGrammar widened(const CFGrammar& base, std::uint32_t seed) {
  std::mt19937 rng(seed);
  CFGrammar cf = base;
  std::uniform_int_distribution<int> extra_rules(1, 2);
  std::uniform_int_distribution<int> len_dist(1, 3);
  std::uniform_int_distribution<int> term_pick(0, 1);
  std::uniform_int_distribution<int> head_pick(0, static_cast<int>(cf.nonterminals.size()) - 1);
  int extras = extra_rules(rng);
  for (int r = 0; r < extras; ++r) {
    CFRule rule;
    rule.head = static_cast<std::uint32_t>(head_pick(rng));
    int len = len_dist(rng);
    for (int k = 0; k < len; ++k)
      rule.rhs.push_back({true, static_cast<std::uint32_t>(term_pick(rng))});
    cf.rules.push_back(rule);
  }
  return cf;
}

std::string check_intersection() {
  auto start = Clock::now();
  std::vector<std::string> ab_words = all_words("ab", 8);
  std::size_t pairs_checked = 0;
  std::size_t common_total = 0;

  for (std::uint32_t i = 0; i < 20; ++i) {
    CFGrammar A = random_cf(1000 + 2 * i);
    // Half the pairs are independent draws (overlap mostly empty), half are
    // grammar-plus-superset (overlap is exactly the first language).
    CFGrammar B = (i % 2 == 0) ? random_cf(1001 + 2 * i) : widened(A, 1001 + 2 * i);
    Grammar inter = intersect(A, B);
    for (const std::string& text : ab_words) {
      std::vector<std::string> tokens = chars(text);
      bool expected = cf_parse(A, tokens).accept && cf_parse(B, tokens).accept;
      GeneralResult got = recognize_general(inter, to_word(inter, tokens));
      expect(got.status == GeneralStatus::Accept || got.status == GeneralStatus::Reject,
             "intersection engine aborted on \"" + text + "\" (pair " + std::to_string(i) + ")");
      expect((got.status == GeneralStatus::Accept) == expected,
             "intersection disagrees on \"" + text + "\" (pair " + std::to_string(i) + ")");
      common_total += expected ? 1 : 0;
    }
    ++pairs_checked;
  }
  expect(common_total >= 50, "random pairs produced too few common words to be meaningful");

  // A pair of movement grammars: equal-count prefixes against equal-count
  // suffixes leaves exactly the triple-count words.
  Grammar g1 = load_fixture("anbn_cstar.lmg");
  Grammar g2 = load_fixture("astar_bncn.lmg");
  PolyRecognizer p1(g1), p2(g2);
  expect(p1.eligible() && p2.eligible(), "fixture pair should run on the memoizing engine");
  Grammar inter = intersect(g1, g2);
  std::size_t fixture_members = 0;
  for (const std::string& text : all_words("abc", 8)) {
    std::vector<std::string> tokens = chars(text);
    bool expected = p1.run(to_word(g1, tokens)).status == PolyStatus::Accept &&
                    p2.run(to_word(g2, tokens)).status == PolyStatus::Accept;
    expect(expected == is_triple_block(text),
           "fixture pair membership should be the triple-count language");
    GeneralStatus got = recognize_general(inter, to_word(inter, tokens)).status;
    expect((got == GeneralStatus::Accept) == expected,
           "fixture intersection disagrees on \"" + text + "\"");
    fixture_members += expected ? 1 : 0;
  }
  expect(fixture_members == 3, "fixture intersection should have 3 members up to length 8");
  ++pairs_checked;

  double elapsed = seconds_since(start);
  std::ostringstream note;
  note << pairs_checked << " grammar pairs, exact agreement on every word up to length 8 ("
       << common_total << " common words across the random pairs), "
       << static_cast<int>(elapsed * 1000) << " ms";
  return note.str();
}

// ---------------------------------------------------------------- check 6
// Memo growth stays within the cubic bound; runtime scales polynomially.

std::string check_poly_scaling() {
  auto start = Clock::now();
  Grammar g = load_fixture("anbncn.lmg");
  PolyRecognizer poly(g);
  expect(poly.eligible(), "memoizing engine refused the triple-count grammar");
  double rules = static_cast<double>(g.rules.size());

  struct Sample {
    int n;
    std::uint64_t memo;
    double avg_us;
  };
  std::vector<Sample> samples;
  for (int n : {8, 16, 32, 64}) {
    std::string text(static_cast<std::size_t>(n), 'a');
    text.append(static_cast<std::size_t>(n), 'b');
    text.append(static_cast<std::size_t>(n), 'c');
    Word input = to_word(g, chars(text));

    PolyResult first = poly.run(input);
    expect(first.status == PolyStatus::Accept, "memoizing engine rejected a member");
    GeneralStatus gs = recognize_general(g, input).status;
    expect(gs == GeneralStatus::Accept, "engines disagree on a member");

    std::string off = text.substr(0, text.size() - 1);
    expect(poly.run(to_word(g, chars(off))).status == PolyStatus::Reject &&
               recognize_general(g, to_word(g, chars(off))).status == GeneralStatus::Reject,
           "engines disagree on a near-member");

    const int reps = 20;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) poly.run(input);
    double avg_us = seconds_since(t0) * 1e6 / reps;
    samples.push_back({n, first.stats.memo_entries, avg_us});
  }

  double c = static_cast<double>(samples[0].memo) / (512.0 * rules);
  for (const Sample& s : samples) {
    double bound = c * static_cast<double>(s.n) * s.n * s.n * rules;
    expect(static_cast<double>(s.memo) <= bound + 1e-6,
           "memo entries exceed the cubic bound at n=" + std::to_string(s.n));
  }
  expect(samples[2].avg_us > 0.0, "timer resolution too coarse at n=32");
  double ratio = samples[3].avg_us / samples[2].avg_us;
  expect(ratio <= 160.0,
         "doubling 32->64 scaled time by " + std::to_string(ratio) + ", bound 160");

  double elapsed = seconds_since(start);
  expect(elapsed < 120.0, "exceeded the 120 s budget");

  std::ostringstream note;
  note << "memo";
  for (const Sample& s : samples) note << " " << s.memo << "@n=" << s.n;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", ratio);
  note << ", verdicts agree at every size, 64:32 time ratio " << buf << " (bound 160)";
  return note.str();
}

// ---------------------------------------------------------------- check 7
// On a plain context-free grammar the memoizing engine evaluates exactly the
// calls the reference context-free recognizer evaluates.

std::string check_call_set_identity() {
  Grammar g = load_fixture("nullary_cfg.lmg");
  CFGrammar cf = *cf_from_lmg(g);
  PolyRecognizer poly(g);
  expect(poly.eligible(), "memoizing engine refused the plain context-free grammar");

  const char* inputs[] = {"n+n*n", "(n+n)*n", "n", "n*(n+n+n)", "n+)n("};
  std::ostringstream sizes;
  for (const char* s : inputs) {
    std::vector<std::string> tokens = chars(s);
    PolyResult pr = poly.run(to_word(g, tokens));
    CFParseResult cr = cf_parse(cf, tokens);
    expect((pr.status == PolyStatus::Accept) == cr.accept,
           std::string("recognizers disagree on \"") + s + "\"");
    expect(pr.stats.memo_entries == cr.stats.memo_entries,
           std::string("call sets differ on \"") + s + "\": " +
               std::to_string(pr.stats.memo_entries) + " vs " +
               std::to_string(cr.stats.memo_entries));
    sizes << (sizes.tellp() > 0 ? " " : "") << pr.stats.memo_entries;
  }
  return "identical call counts on all 5 inputs (" + sizes.str() + ")";
}

// ---------------------------------------------------------------- check 8
// Text format round-trips; every emitted derivation replays against its input.

std::string check_roundtrip_and_replay() {
  const char* fixtures[] = {
      "anbncn.lmg",     "dutch.lmg",      "dutch_vfin.lmg",     "anbn_cstar.lmg",
      "astar_bncn.lmg", "nullary_cfg.lmg", "hidden_leftrec.lmg", "leftbind_a.lmg",
      "leftbind_b.lmg", "leftbind_c.lmg",
  };
  for (const char* name : fixtures) {
    Grammar g = load_fixture(name);
    GrammarParse again = parse_grammar(print_grammar(g));
    expect(again.ok(), std::string(name) + " failed to reparse after printing");
    expect(grammars_equal(g, *again.grammar),
           std::string(name) + " changed across print and reparse");
  }

  std::size_t derivations = 0;
  auto replay_all = [&derivations](const Grammar& g, const Word& input,
                                   const std::string& label) {
    GeneralParseResult r = parse_general(g, input);
    expect(r.status == GeneralStatus::Accept, "expected Accept for " + label);
    expect(!r.trees.empty(), "no derivations for " + label);
    for (const auto& tree : r.trees) {
      expect(replay(g, *tree, input), "derivation does not replay for " + label);
      ++derivations;
    }
  };

  Grammar triple = load_fixture("anbncn.lmg");
  PolyRecognizer triple_poly(triple);
  for (int n = 0; n <= 4; ++n) {
    std::string text(static_cast<std::size_t>(n), 'a');
    text.append(static_cast<std::size_t>(n), 'b');
    text.append(static_cast<std::size_t>(n), 'c');
    Word input = to_word(triple, chars(text));
    replay_all(triple, input, "triple-count \"" + text + "\"");
    PolyResult pr = triple_poly.run(input, /*want_tree=*/true);
    expect(pr.tree != nullptr, "memoizing engine returned no tree for \"" + text + "\"");
    expect(replay(triple, *pr.tree, input),
           "memoizing-engine derivation does not replay for \"" + text + "\"");
    ++derivations;
  }

  Grammar dutch = load_fixture("dutch.lmg");
  const char* sentences[] = {
      "dat jan marie kuste",
      "jan kuste marie",
      "kuste jan marie",
      "dat marie jan fred anne hoorde helpen overtuigen",
      "marie zag fred anne kussen",
  };
  for (const char* s : sentences)
    replay_all(dutch, to_word(dutch, words(s)), std::string("\"") + s + "\"");

  Grammar lba = load_fixture("leftbind_a.lmg");
  replay_all(lba, to_word(lba, words("w")), "deferred-check grammar on \"w\"");

  Grammar cfg = load_fixture("nullary_cfg.lmg");
  PolyRecognizer cfg_poly(cfg);
  for (const char* s : {"n+n*n", "(n)"}) {
    Word input = to_word(cfg, chars(s));
    replay_all(cfg, input, std::string("expression \"") + s + "\"");
    PolyResult pr = cfg_poly.run(input, /*want_tree=*/true);
    expect(pr.tree != nullptr && replay(cfg, *pr.tree, input),
           std::string("memoizing-engine derivation does not replay for \"") + s + "\"");
    ++derivations;
  }

  Grammar inter = intersect(load_fixture("anbn_cstar.lmg"), load_fixture("astar_bncn.lmg"));
  for (const char* s : {"abc", "aabbcc"})
    replay_all(inter, to_word(inter, chars(s)), std::string("intersection \"") + s + "\"");

  std::ostringstream note;
  note << "10 grammars round-trip, " << derivations << "/" << derivations
       << " derivations replay exactly";
  return note.str();
}

}  // namespace

int main() {
  struct Check {
    const char* label;
    std::function<std::string()> run;
  };
  const Check checks[] = {
      {"three deciders agree on every word up to length 9 of the triple-count language",
       check_triple_language_exactly},
      {"crossed-dependency sentences accepted, scrambled variants rejected",
       check_crossed_dependencies},
      {"static analysis classifies the corpus grammars correctly",
       check_restriction_classification},
      {"the context-free skeleton matches the reference and exposes deep structure",
       check_skeleton},
      {"intersection grammars accept exactly the words both grammars accept",
       check_intersection},
      {"memo size stays within the cubic bound and runtime scales polynomially",
       check_poly_scaling},
      {"the memoizing engine's call set matches the plain context-free recognizer's",
       check_call_set_identity},
      {"grammars round-trip through the text format and every derivation replays",
       check_roundtrip_and_replay},
  };

  bool all_ok = true;
  int index = 0;
  for (const Check& check : checks) {
    ++index;
    std::string verdict;
    std::string detail;
    try {
      detail = check.run();
      verdict = "[PASS]";
    } catch (const Failure& f) {
      verdict = "[FAIL]";
      detail = f.why;
      all_ok = false;
    } catch (const std::exception& e) {
      verdict = "[FAIL]";
      detail = std::string("unexpected exception: ") + e.what();
      all_ok = false;
    }
    std::printf("%s criterion %d: %s — %s\n", verdict.c_str(), index, check.label,
                detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}

// Exhaustive reference decision procedure: membership, instance queries,
// language enumeration, budgets, and cut soundness.
#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "lmg/engine_general.hpp"
#include "lmg/oracle.hpp"
#include "lmg/syntax.hpp"
#include "test_util.hpp"

using namespace lmg;
using testutil::chars;
using testutil::load_fixture;
using testutil::parse_or_throw;

namespace {

Word w(const Grammar& g, const std::string& s) { return to_word(g, chars(s)); }

std::set<std::string> member_strings(const Grammar& g, const LanguageSample& sample) {
  std::set<std::string> out;
  for (const Word& m : sample.members) out.insert(word_to_string(g, m));
  return out;
}

}  // namespace

TEST_CASE("triple-count membership") {
  Grammar g = load_fixture("anbncn.lmg");
  OracleSession s(g);
  for (const char* yes : {"", "abc", "aabbcc", "aaabbbccc"})
    CHECK_MESSAGE(s.accepts(w(g, yes)) == OracleVerdict::Yes, "expected Yes for " << yes);
  for (const char* no : {"a", "ab", "ba", "abcc", "aabbc", "abcabc", "cba", "aabcbc"})
    CHECK_MESSAGE(s.accepts(w(g, no)) == OracleVerdict::No, "expected No for " << no);
}

TEST_CASE("instance queries take explicit argument words") {
  Grammar g = load_fixture("anbncn.lmg");
  NonterminalId B = *g.symbols.find_nonterminal("B");
  OracleSession s(g);
  CHECK(s.derives(B, {w(g, "aa")}, w(g, "bbcc")) == OracleVerdict::Yes);
  CHECK(s.derives(B, {w(g, "a")}, w(g, "bc")) == OracleVerdict::Yes);
  CHECK(s.derives(B, {w(g, "")}, w(g, "")) == OracleVerdict::Yes);
  CHECK(s.derives(B, {w(g, "aa")}, w(g, "bc")) == OracleVerdict::No);
  CHECK(s.derives(B, {w(g, "ab")}, w(g, "bc")) == OracleVerdict::No);
  CHECK_THROWS_AS(s.derives(B, {}, w(g, "bc")), std::invalid_argument);
  CHECK_THROWS_AS(s.derives(B, {w(g, "a"), w(g, "a")}, w(g, "bc")), std::invalid_argument);
}

TEST_CASE("language enumeration is exact on the triple-count fixture") {
  Grammar g = load_fixture("anbncn.lmg");
  LanguageSample sample = oracle_language_upto(g, 6);
  CHECK(sample.undecided.empty());
  CHECK(member_strings(g, sample) == std::set<std::string>{"", "a b c", "a a b b c c"});
}

TEST_CASE("language enumeration matches the two block-count fixtures") {
  Grammar g1 = load_fixture("anbn_cstar.lmg");
  CHECK(member_strings(g1, oracle_language_upto(g1, 4)) ==
        std::set<std::string>{"", "c", "a b", "c c", "a b c", "c c c", "a a b b", "a b c c",
                              "c c c c"});

  Grammar g2 = load_fixture("astar_bncn.lmg");
  CHECK(member_strings(g2, oracle_language_upto(g2, 4)) ==
        std::set<std::string>{"", "a", "a a", "a a a", "a a a a", "b c", "a b c", "a a b c",
                              "b b c c"});
}

TEST_CASE("a cycle is cut without losing derivations that exist elsewhere") {
  Grammar g = parse_or_throw(
      "start S;\n"
      "S() -> S() ;\n"
      "S() -> \"a\" ;\n",
      "self-loop");
  OracleSession s(g);
  CHECK(s.accepts(w(g, "a")) == OracleVerdict::Yes);
  CHECK(s.accepts(w(g, "")) == OracleVerdict::No);
  CHECK(s.accepts(w(g, "aa")) == OracleVerdict::No);
}

TEST_CASE("the empty-language trap answers No, not a hang") {
  Grammar g = load_fixture("hidden_leftrec.lmg");
  OracleSession s(g);
  CHECK(s.accepts(Word{}) == OracleVerdict::No);
}

TEST_CASE("a tiny step budget reports exhaustion, not a wrong answer") {
  Grammar g = load_fixture("anbncn.lmg");
  OracleSession s(g, Budget{5, 64});
  CHECK(s.accepts(w(g, "aaaabbbbcccc")) == OracleVerdict::BudgetExhausted);
}

TEST_CASE("a tiny depth budget reports exhaustion") {
  Grammar g = load_fixture("anbncn.lmg");
  OracleSession s(g, Budget{2'000'000, 2});
  CHECK(s.accepts(w(g, "aaaabbbbcccc")) == OracleVerdict::BudgetExhausted);
}

TEST_CASE("the step budget applies per query and the memo persists") {
  Grammar g = load_fixture("anbncn.lmg");
  OracleSession s(g);
  CHECK(s.accepts(w(g, "aabbcc")) == OracleVerdict::Yes);
  std::uint64_t first = s.last_steps();
  std::size_t entries = s.memo_size();
  CHECK(first > 0);
  CHECK(entries > 0);
  // Second identical query hits the memo: fewer steps, no new entries.
  CHECK(s.accepts(w(g, "aabbcc")) == OracleVerdict::Yes);
  CHECK(s.last_steps() < first);
  CHECK(s.memo_size() == entries);
}

TEST_CASE("oracle and backtracking engine agree word for word") {
  Grammar g = load_fixture("anbn_cstar.lmg");
  OracleSession s(g);
  // Every word over {a,b,c} of length <= 5.
  std::vector<std::string> alphabet{"a", "b", "c"};
  std::vector<std::string> current{""};
  for (std::size_t len = 0; len <= 5; ++len) {
    std::vector<std::string> next;
    for (const std::string& word_text : current) {
      OracleVerdict ov = s.accepts(w(g, word_text));
      GeneralResult gr = recognize_general(g, w(g, word_text));
      REQUIRE(ov != OracleVerdict::BudgetExhausted);
      REQUIRE((gr.status == GeneralStatus::Accept || gr.status == GeneralStatus::Reject));
      CHECK_MESSAGE((ov == OracleVerdict::Yes) == (gr.status == GeneralStatus::Accept),
                    "disagreement on \"" << word_text << "\"");
      for (const std::string& c : alphabet) next.push_back(word_text + c);
    }
    current = std::move(next);
  }
}

TEST_CASE("quantifier bodies and slash numerators may be bare terminals") {
  // x:"a" binds x to exactly one "a"; "b"/x then replays it as a failure
  // (b is not a), while "a"/x succeeds.
  Grammar ok = parse_or_throw(
      "start S;\n"
      "S() -> x:\"a\" \"a\"/x ;\n",
      "terminal-quant-ok");
  OracleSession s1(ok);
  CHECK(s1.accepts(w(ok, "a")) == OracleVerdict::Yes);
  CHECK(s1.accepts(w(ok, "aa")) == OracleVerdict::No);
  CHECK(s1.accepts(w(ok, "")) == OracleVerdict::No);

  Grammar bad = parse_or_throw(
      "start S;\n"
      "S() -> x:\"a\" \"b\"/x ;\n",
      "terminal-quant-bad");
  OracleSession s2(bad);
  CHECK(s2.accepts(w(bad, "a")) == OracleVerdict::No);
}

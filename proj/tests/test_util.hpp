// Shared helpers for the unit and acceptance suites.
#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmg/syntax.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(LMG_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline lmg::Grammar parse_or_throw(const std::string& text, const std::string& what) {
  lmg::GrammarParse p = lmg::parse_grammar(text);
  if (!p.ok()) {
    std::string msg = "grammar " + what + " failed to parse:";
    for (const auto& e : p.errors)
      msg += "\n  " + std::to_string(e.line) + ":" + std::to_string(e.col) + ": " + e.message;
    throw std::runtime_error(msg);
  }
  return std::move(*p.grammar);
}

inline lmg::Grammar load_fixture(const std::string& name) {
  return parse_or_throw(slurp(fixture_path(name)), name);
}

// One token per byte; good enough for the ASCII alphabets the suites use.
inline std::vector<std::string> chars(const std::string& s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (char c : s) out.emplace_back(1, c);
  return out;
}

inline std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace testutil

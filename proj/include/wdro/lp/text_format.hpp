// Copyright 2026 The wdro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wdro/lp/spec.hpp"

namespace wdro::lp {

/// Shortest text form that round-trips a double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Emits a CPLEX-style LP-format document: objective, constraints, a bounds
/// line per variable, a binaries section, and the end marker.
inline std::string export_lp_text(const LinearProgramSpec& spec) {
  spec.validate();
  std::ostringstream out;
  out << (spec.sense == Sense::maximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  bool any = false;
  for (int j = 0; j < spec.num_vars(); ++j) {
    const double c = spec.objective[j];
    if (c == 0.0) continue;
    out << (c < 0 ? " - " : (any ? " + " : " ")) << fmt17(std::abs(c)) << " x"
        << j;
    any = true;
  }
  out << "\nSubject To\n";
  for (int r = 0; r < spec.num_rows(); ++r) {
    const auto& row = spec.rows[r];
    out << " c" << r << ":";
    bool first = true;
    for (const auto& [j, a] : row.terms) {
      out << (a < 0 ? " - " : (first ? " " : " + ")) << fmt17(std::abs(a))
          << " x" << j;
      first = false;
    }
    if (first) out << " 0 x0";  // constant row; keep the line well formed
    switch (row.sense) {
      case RowSense::le: out << " <= "; break;
      case RowSense::ge: out << " >= "; break;
      case RowSense::eq: out << " = "; break;
    }
    out << fmt17(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < spec.num_vars(); ++j) {
    const double lo = spec.lower[j], hi = spec.upper[j];
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << " x" << j << " free\n";
    } else if (lo == hi) {
      out << " x" << j << " = " << fmt17(lo) << "\n";
    } else {
      out << " " << (std::isfinite(lo) ? fmt17(lo) : "-inf") << " <= x" << j
          << " <= " << (std::isfinite(hi) ? fmt17(hi) : "+inf") << "\n";
    }
  }
  if (spec.any_binary()) {
    out << "Binaries\n";
    for (int j = 0; j < spec.num_vars(); ++j)
      if (spec.is_binary[j]) out << " x" << j << "\n";
  }
  out << "End\n";
  return out.str();
}

namespace detail {

struct LpToken {
  enum Kind { word, number, op } kind;
  std::string text;  // words and ops
  double value = 0.0;
};

inline std::vector<LpToken> lex_lp(const std::string& text) {
  std::vector<LpToken> toks;
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == '\\') {  // comment to end of line
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                       text[j] == '.'))
        ++j;
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          ++k;
          while (k < n && std::isdigit(static_cast<unsigned char>(text[k])))
            ++k;
          j = k;
        }
      }
      toks.push_back({LpToken::number, text.substr(i, j - i),
                      std::stod(text.substr(i, j - i))});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                       text[j] == '_' || text[j] == '.' || text[j] == '#'))
        ++j;
      toks.push_back({LpToken::word, text.substr(i, j - i), 0.0});
      i = j;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < n && (text[i + 1] == '=' || text[i + 1] == '<' ||
                        text[i + 1] == '>'))
        op += text[++i];
      ++i;
      // Normalize =<, => and bare <, > to <=, >=, =.
      if (op == "=<" || op == "<" || op == "<=") op = "<=";
      else if (op == "=>" || op == ">" || op == ">=") op = ">=";
      else op = "=";
      toks.push_back({LpToken::op, op, 0.0});
      continue;
    }
    if (c == '+' || c == '-' || c == ':') {
      toks.push_back({LpToken::op, std::string(1, c), 0.0});
      ++i;
      continue;
    }
    throw Error(ErrorCode::io,
                std::string("unexpected character in LP text: '") + c + "'");
  }
  return toks;
}

inline std::string lowered(const std::string& s) {
  std::string r = s;
  for (auto& ch : r) ch = static_cast<char>(std::tolower(ch));
  return r;
}

inline bool is_inf_word(const std::string& w) {
  const std::string l = lowered(w);
  return l == "inf" || l == "infinity";
}

}  // namespace detail

/// Parses an LP-format document back into a spec. Variables are indexed by
/// order of first appearance; unmentioned bounds default to [0, +inf)
/// ([0, 1] for binaries), matching the usual LP-format convention.
inline LinearProgramSpec parse_lp_text(const std::string& text) {
  using detail::LpToken;
  const auto toks = detail::lex_lp(text);
  std::size_t pos = 0;
  const auto peek = [&]() -> const LpToken* {
    return pos < toks.size() ? &toks[pos] : nullptr;
  };
  const auto is_section = [&](const LpToken& t, std::size_t at) {
    if (t.kind != LpToken::word) return std::string();
    const std::string l = detail::lowered(t.text);
    if (l == "subject" || l == "such") return std::string("subject");
    if (l == "st" || l == "s.t.") return std::string("subject");
    if (l == "bounds" || l == "bound") return std::string("bounds");
    if (l == "binaries" || l == "binary" || l == "bin")
      return std::string("binaries");
    if (l == "end") return std::string("end");
    (void)at;
    return std::string();
  };

  LinearProgramSpec spec;
  std::map<std::string, int> index;
  std::vector<std::string> names;
  const auto var_of = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const int id = spec.add_variable(0.0, kInf, 0.0, false);
    index.emplace(name, id);
    names.push_back(name);
    return id;
  };
  std::set<int> explicit_bounds;

  if (!peek()) throw Error(ErrorCode::io, "empty LP document");
  {
    const std::string l = detail::lowered(peek()->text);
    if (l == "minimize" || l == "min" || l == "minimise")
      spec.sense = Sense::minimize;
    else if (l == "maximize" || l == "max" || l == "maximise")
      spec.sense = Sense::maximize;
    else
      throw Error(ErrorCode::io, "LP document must start with an objective sense");
    ++pos;
  }

  // Expression reader: consumes [label:] terms, stops at a sense op or a
  // section keyword. Returns accumulated (var, coeff) terms.
  const auto read_expr = [&](bool allow_label) {
    std::vector<std::pair<int, double>> terms;
    double sign = 1.0;
    bool have_num = false;
    double num = 0.0;
    bool label_possible = allow_label;
    while (const LpToken* t = peek()) {
      if (t->kind == LpToken::op &&
          (t->text == "<=" || t->text == ">=" || t->text == "="))
        break;
      if (!is_section(*t, pos).empty()) break;
      if (t->kind == LpToken::op && t->text == "+") {
        ++pos;
        continue;
      }
      if (t->kind == LpToken::op && t->text == "-") {
        sign = -sign;
        ++pos;
        continue;
      }
      if (t->kind == LpToken::number) {
        if (have_num)
          throw Error(ErrorCode::io, "two consecutive numbers in expression");
        num = t->value;
        have_num = true;
        ++pos;
        continue;
      }
      if (t->kind == LpToken::word) {
        if (label_possible && pos + 1 < toks.size() &&
            toks[pos + 1].kind == LpToken::op && toks[pos + 1].text == ":") {
          pos += 2;  // swallow the label
          label_possible = false;
          continue;
        }
        label_possible = false;
        const int j = var_of(t->text);
        terms.emplace_back(j, sign * (have_num ? num : 1.0));
        sign = 1.0;
        have_num = false;
        ++pos;
        continue;
      }
      throw Error(ErrorCode::io, "unexpected token in expression: " + t->text);
    }
    if (have_num)
      throw Error(ErrorCode::io, "dangling coefficient in expression");
    return terms;
  };

  // Objective.
  for (const auto& [j, a] : read_expr(true)) spec.objective[j] += a;

  // Subject To.
  if (!peek() || is_section(*peek(), pos) != "subject")
    throw Error(ErrorCode::io, "missing 'Subject To' section");
  ++pos;
  if (peek() && detail::lowered(peek()->text) == "to") ++pos;

  while (peek() && is_section(*peek(), pos).empty()) {
    auto terms = read_expr(true);
    const LpToken* op = peek();
    if (!op || op->kind != LpToken::op)
      throw Error(ErrorCode::io, "constraint missing a relational operator");
    RowSense sense = RowSense::le;
    if (op->text == "<=") sense = RowSense::le;
    else if (op->text == ">=") sense = RowSense::ge;
    else sense = RowSense::eq;
    ++pos;
    double rhs_sign = 1.0;
    while (peek() && peek()->kind == LpToken::op &&
           (peek()->text == "-" || peek()->text == "+")) {
      if (peek()->text == "-") rhs_sign = -rhs_sign;
      ++pos;
    }
    if (!peek() || peek()->kind != LpToken::number)
      throw Error(ErrorCode::io, "constraint missing a numeric rhs");
    const double rhs = rhs_sign * peek()->value;
    ++pos;
    // Drop zero-coefficient placeholder terms used for constant rows.
    std::vector<std::pair<int, double>> clean;
    for (const auto& term : terms)
      if (term.second != 0.0) clean.push_back(term);
    spec.add_row(std::move(clean), sense, rhs);
  }

  const auto read_bound_value = [&](bool& infinite, double& value) {
    double sign = 1.0;
    while (peek() && peek()->kind == LpToken::op &&
           (peek()->text == "-" || peek()->text == "+")) {
      if (peek()->text == "-") sign = -sign;
      ++pos;
    }
    if (peek() && peek()->kind == LpToken::number) {
      infinite = false;
      value = sign * peek()->value;
      ++pos;
      return true;
    }
    if (peek() && peek()->kind == LpToken::word &&
        detail::is_inf_word(peek()->text)) {
      infinite = true;
      value = sign * kInf;
      ++pos;
      return true;
    }
    return false;
  };

  while (peek()) {
    const std::string section = is_section(*peek(), pos);
    if (section == "end") break;
    if (section == "bounds") {
      ++pos;
      while (peek() && is_section(*peek(), pos).empty()) {
        bool inf1 = false;
        double v1 = 0.0;
        if (read_bound_value(inf1, v1)) {
          // form: value <= name [<= value]
          if (!peek() || peek()->kind != LpToken::op || peek()->text != "<=")
            throw Error(ErrorCode::io, "malformed bound line");
          ++pos;
          if (!peek() || peek()->kind != LpToken::word)
            throw Error(ErrorCode::io, "bound line missing a variable name");
          const int j = var_of(peek()->text);
          ++pos;
          spec.lower[j] = inf1 ? -kInf : v1;
          explicit_bounds.insert(j);
          if (peek() && peek()->kind == LpToken::op && peek()->text == "<=") {
            ++pos;
            bool inf2 = false;
            double v2 = 0.0;
            if (!read_bound_value(inf2, v2))
              throw Error(ErrorCode::io, "bound line missing an upper value");
            spec.upper[j] = inf2 ? kInf : v2;
          }
          continue;
        }
        if (peek()->kind == LpToken::word) {
          const std::string name = peek()->text;
          ++pos;
          if (peek() && peek()->kind == LpToken::word &&
              detail::lowered(peek()->text) == "free") {
            const int j = var_of(name);
            spec.lower[j] = -kInf;
            spec.upper[j] = kInf;
            explicit_bounds.insert(j);
            ++pos;
            continue;
          }
          if (!peek() || peek()->kind != LpToken::op)
            throw Error(ErrorCode::io, "malformed bound line");
          const std::string op = peek()->text;
          ++pos;
          bool infv = false;
          double v = 0.0;
          if (!read_bound_value(infv, v))
            throw Error(ErrorCode::io, "bound line missing a value");
          const int j = var_of(name);
          if (op == "<=") spec.upper[j] = infv ? kInf : v;
          else if (op == ">=") spec.lower[j] = infv ? -kInf : v;
          else {
            spec.lower[j] = v;
            spec.upper[j] = v;
          }
          explicit_bounds.insert(j);
          continue;
        }
        throw Error(ErrorCode::io, "malformed bounds section");
      }
      continue;
    }
    if (section == "binaries") {
      ++pos;
      while (peek() && is_section(*peek(), pos).empty()) {
        if (peek()->kind != LpToken::word)
          throw Error(ErrorCode::io, "binaries section expects variable names");
        const int j = var_of(peek()->text);
        spec.is_binary[j] = true;
        ++pos;
      }
      continue;
    }
    throw Error(ErrorCode::io, "unexpected content after constraints: " +
                                   peek()->text);
  }

  for (int j = 0; j < spec.num_vars(); ++j) {
    if (spec.is_binary[j] && !explicit_bounds.count(j)) {
      spec.lower[j] = 0.0;
      spec.upper[j] = 1.0;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace wdro::lp

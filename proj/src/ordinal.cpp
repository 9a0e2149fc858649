// Copyright 2026 the forcelab authors
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

#include "forcelab/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace flab {

Countable Countable::from_terms(std::vector<CnfTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0)
      fail(ErrorKind::kInvalidArgument, "CNF coefficient must be positive");
    if (i > 0 && terms[i - 1].exp <= terms[i].exp)
      fail(ErrorKind::kInvalidArgument,
           "CNF exponents must be strictly descending");
  }
  Countable c;
  c.terms_ = std::move(terms);
  return c;
}

Countable Countable::plus(std::uint64_t n) const {
  if (n == 0) return *this;
  Countable out = *this;
  if (out.is_successor()) {
    out.terms_.back().coeff += n;
  } else {
    out.terms_.push_back({0, n});
  }
  return out;
}

Countable Countable::pred() const {
  if (!is_successor())
    fail(ErrorKind::kInvalidArgument, "pred of a non-successor countable");
  Countable out = *this;
  if (out.terms_.back().coeff == 1) {
    out.terms_.pop_back();
  } else {
    out.terms_.back().coeff -= 1;
  }
  return out;
}

Countable Countable::doubled() const {
  Countable out = *this;
  if (out.is_successor()) out.terms_.back().coeff *= 2;
  return out;
}

std::strong_ordering operator<=>(const Countable& a, const Countable& b) {
  const auto& x = a.terms_;
  const auto& y = b.terms_;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (auto c = x[i].exp <=> y[i].exp; c != 0) return c;
    if (auto c = x[i].coeff <=> y[i].coeff; c != 0) return c;
  }
  return x.size() <=> y.size();
}

std::string to_string(CofClass c) {
  switch (c) {
    case CofClass::kZero: return "zero";
    case CofClass::kSuccessor: return "successor";
    case CofClass::kSmallLimit: return "small-limit";
    case CofClass::kLargeLimit: return "large-limit";
  }
  return "?";
}

OrdinalNotation OrdinalNotation::pred() const {
  if (cof_class(*this) != CofClass::kSuccessor)
    fail(ErrorKind::kInvalidArgument, "pred of a non-successor ordinal");
  return OrdinalNotation(kappa_, tail_.pred());
}

CofClass cof_class(const OrdinalNotation& a) {
  if (a.is_zero()) return CofClass::kZero;
  if (a.tail_part().is_successor()) return CofClass::kSuccessor;
  if (a.tail_part().is_limit()) return CofClass::kSmallLimit;
  // tail 0, kappa part nonzero
  if (a.kappa_part().is_limit()) return CofClass::kSmallLimit;
  return CofClass::kLargeLimit;
}

OrdinalNotation fundamental_sequence(const OrdinalNotation& delta, std::uint64_t i) {
  switch (cof_class(delta)) {
    case CofClass::kZero:
    case CofClass::kSuccessor:
      fail(ErrorKind::kInvalidArgument,
           "fundamental_sequence requires a limit ordinal, got " +
               format_ordinal(delta));
    case CofClass::kSmallLimit: {
      if (delta.tail_part().is_limit()) {
        // ...+w^{e+1}*c  ->  ...+w^{e+1}*(c-1)+w^e*i
        std::vector<CnfTerm> terms = delta.tail_part().terms();
        CnfTerm last = terms.back();
        terms.pop_back();
        if (last.coeff > 1) terms.push_back({last.exp, last.coeff - 1});
        if (i > 0) terms.push_back({last.exp - 1, i});
        return OrdinalNotation(delta.kappa_part(), Countable::from_terms(terms));
      }
      // tail 0, kappa part a countable limit: kappa * c_a(i)
      OrdinalNotation inner(Countable(), delta.kappa_part());
      OrdinalNotation step = fundamental_sequence(inner, i);
      return OrdinalNotation(step.tail_part(), Countable());
    }
    case CofClass::kLargeLimit: {
      // kappa*(a'+1)  ->  kappa*a' + i  (finite window of a kappa-cofinal map)
      return OrdinalNotation(delta.kappa_part().pred(), Countable(i));
    }
  }
  fail(ErrorKind::kInternal, "unreachable");
}

namespace {

struct ParsedTerm {
  bool kappa = false;
  std::uint32_t exp = 0;
  std::uint64_t coeff = 1;
};

std::uint64_t parse_number(const std::string& s, std::size_t& pos) {
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
    fail(ErrorKind::kInvalidArgument, "expected a number at '" + s.substr(pos) +
                                          "' in ordinal literal");
  std::uint64_t value = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    value = value * 10 + static_cast<std::uint64_t>(s[pos] - '0');
    ++pos;
  }
  return value;
}

// term := 'k' ['*' wpart] | wpart ; wpart := 'w' ['^' num] ['*' num] | num
ParsedTerm parse_term(const std::string& s, std::size_t& pos) {
  ParsedTerm t;
  if (pos < s.size() && s[pos] == 'k') {
    t.kappa = true;
    ++pos;
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
    } else {
      return t;  // bare 'k' = kappa*1
    }
  }
  if (pos < s.size() && s[pos] == 'w') {
    ++pos;
    t.exp = 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      std::uint64_t e = parse_number(s, pos);
      if (e > 1000)
        fail(ErrorKind::kUnsupported, "CNF exponent too large");
      t.exp = static_cast<std::uint32_t>(e);
    }
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
      t.coeff = parse_number(s, pos);
    }
  } else {
    t.exp = 0;
    t.coeff = parse_number(s, pos);
  }
  return t;
}

}  // namespace

OrdinalNotation parse_ordinal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::kInvalidArgument, "empty ordinal literal");
  if (s == "0") return OrdinalNotation();

  std::vector<CnfTerm> kappa_terms;
  std::vector<CnfTerm> tail_terms;
  std::size_t pos = 0;
  bool seen_tail = false;
  while (true) {
    ParsedTerm t = parse_term(s, pos);
    if (t.coeff == 0)
      fail(ErrorKind::kInvalidArgument,
           "zero coefficient in ordinal literal; drop the term for canonical "
           "form");
    auto& dst = t.kappa ? kappa_terms : tail_terms;
    if (t.kappa && seen_tail)
      fail(ErrorKind::kInvalidArgument,
           "kappa terms must precede countable terms in canonical form");
    if (!t.kappa) seen_tail = true;
    if (!dst.empty() && dst.back().exp <= t.exp)
      fail(ErrorKind::kInvalidArgument,
           "exponents must be strictly descending per part; normalize '" +
               text + "'");
    dst.push_back({t.exp, t.coeff});
    if (pos == s.size()) break;
    if (s[pos] != '+')
      fail(ErrorKind::kInvalidArgument, "expected '+' at '" + s.substr(pos) +
                                            "' in ordinal literal");
    ++pos;
  }
  return OrdinalNotation(Countable::from_terms(std::move(kappa_terms)),
                         Countable::from_terms(std::move(tail_terms)));
}

namespace {

void format_countable(std::ostringstream& out, const Countable& c,
                      const char* prefix, bool& first) {
  for (const CnfTerm& t : c.terms()) {
    if (!first) out << "+";
    first = false;
    out << prefix;
    if (t.exp == 0) {
      if (*prefix != '\0') {
        if (t.coeff != 1) out << "*" << t.coeff;
      } else {
        out << t.coeff;
      }
      continue;
    }
    if (*prefix != '\0') out << "*";
    out << "w";
    if (t.exp > 1) out << "^" << t.exp;
    if (t.coeff != 1) out << "*" << t.coeff;
  }
}

}  // namespace

std::string format_ordinal(const OrdinalNotation& a) {
  if (a.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  format_countable(out, a.kappa_part(), "k", first);
  format_countable(out, a.tail_part(), "", first);
  return out.str();
}

}  // namespace flab

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

#ifndef FORCELAB_ORDINAL_HPP_
#define FORCELAB_ORDINAL_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "forcelab/error.hpp"

namespace flab {

// One Cantor-normal-form term w^exp * coeff, exp < omega, coeff >= 1.
struct CnfTerm {
  std::uint32_t exp = 0;
  std::uint64_t coeff = 0;
  friend bool operator==(const CnfTerm&, const CnfTerm&) = default;
};

// Ordinal below w^w: a finite sum of CNF terms with strictly descending
// exponents and positive coefficients. The empty sum is zero.
class Countable {
 public:
  Countable() = default;
  explicit Countable(std::uint64_t n) {
    if (n > 0) terms_.push_back({0, n});
  }
  // Terms must be canonical (descending exponents, coeffs >= 1).
  static Countable from_terms(std::vector<CnfTerm> terms);
  static Countable omega(std::uint32_t exp = 1, std::uint64_t coeff = 1) {
    return from_terms({{exp, coeff}});
  }

  const std::vector<CnfTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Ends in a finite part, i.e. last term has exponent 0.
  bool is_successor() const { return !terms_.empty() && terms_.back().exp == 0; }
  bool is_limit() const { return !terms_.empty() && terms_.back().exp > 0; }

  // Value of the trailing w^0 term, 0 if none.
  std::uint64_t finite_part() const {
    return is_successor() ? terms_.back().coeff : 0;
  }
  // a + n for natural n.
  Countable plus(std::uint64_t n) const;
  // a - 1; requires a successor.
  Countable pred() const;
  // 2 * a (ordinal product, finite tail doubles, limit part absorbs).
  Countable doubled() const;

  friend std::strong_ordering operator<=>(const Countable& a, const Countable& b);
  friend bool operator==(const Countable&, const Countable&) = default;

 private:
  std::vector<CnfTerm> terms_;
};

enum class CofClass { kZero, kSuccessor, kSmallLimit, kLargeLimit };

std::string to_string(CofClass c);

// Two-tier notation kappa * a + b with a, b < w^w. kappa_part() == 0 encodes
// purely countable ordinals; kappa itself is kappa*1+0.
class OrdinalNotation {
 public:
  OrdinalNotation() = default;
  explicit OrdinalNotation(std::uint64_t n) : tail_(n) {}
  OrdinalNotation(Countable kappa_part, Countable tail)
      : kappa_(std::move(kappa_part)), tail_(std::move(tail)) {}
  static OrdinalNotation kappa(Countable a = Countable(1)) {
    return OrdinalNotation(std::move(a), Countable());
  }
  static OrdinalNotation omega(std::uint32_t exp = 1, std::uint64_t coeff = 1) {
    return OrdinalNotation(Countable(), Countable::omega(exp, coeff));
  }

  const Countable& kappa_part() const { return kappa_; }
  const Countable& tail_part() const { return tail_; }
  bool is_zero() const { return kappa_.is_zero() && tail_.is_zero(); }
  bool is_countable() const { return kappa_.is_zero(); }

  OrdinalNotation plus(std::uint64_t n) const {
    return OrdinalNotation(kappa_, tail_.plus(n));
  }
  // a - 1; requires cof_class == kSuccessor.
  OrdinalNotation pred() const;

  friend std::strong_ordering operator<=>(const OrdinalNotation& a,
                                          const OrdinalNotation& b) {
    if (auto c = a.kappa_ <=> b.kappa_; c != 0) return c;
    return a.tail_ <=> b.tail_;
  }
  friend bool operator==(const OrdinalNotation&, const OrdinalNotation&) = default;

 private:
  Countable kappa_;
  Countable tail_;
};

// Three-way order on canonical notations: lexicographic on
// (kappa_part, tail_part) under CNF order.
inline std::strong_ordering ord_compare(const OrdinalNotation& a,
                                        const OrdinalNotation& b) {
  return a <=> b;
}

// Right addition of a natural.
inline OrdinalNotation ord_add_natural(const OrdinalNotation& a, std::uint64_t n) {
  return a.plus(n);
}

CofClass cof_class(const OrdinalNotation& a);

// The fixed cofinal maps c_delta used throughout: for a tail ending in
// w^{e+1}*c the CNF convention ...+w^{e+1}*(c-1)+w^e*i; for kappa-limits
// kappa*(fs of the kappa part); for kappa*(a'+1) the finite window kappa*a'+i.
// Requires a limit notation; strictly increasing in i and below delta.
OrdinalNotation fundamental_sequence(const OrdinalNotation& delta, std::uint64_t i);

// Textual syntax: `k*w^2*3+k*5+w*2+7` denotes kappa*(w^2*3+5)+w*2+7, `0`
// denotes zero. Whitespace-insensitive. Non-canonical input (ascending or
// duplicate exponents, zero coefficients, tail terms before kappa terms) is
// rejected with a diagnostic naming the offending term.
OrdinalNotation parse_ordinal(const std::string& text);
std::string format_ordinal(const OrdinalNotation& a);

}  // namespace flab

#endif  // FORCELAB_ORDINAL_HPP_

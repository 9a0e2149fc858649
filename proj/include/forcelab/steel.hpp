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

#ifndef FORCELAB_STEEL_HPP_
#define FORCELAB_STEEL_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "forcelab/address.hpp"
#include "forcelab/fragment.hpp"
#include "forcelab/ordinal.hpp"

namespace flab {

// Tagged-tree condition: a finite prefix-closed tree whose nodes carry
// exactly one of a firm tag (rho) or a promise tag (rho_bar).
struct SteelCondition {
  std::set<NodeAddress> t;
  std::map<NodeAddress, OrdinalNotation> rho;
  std::map<NodeAddress, OrdinalNotation> rho_bar;

  bool firm(const NodeAddress& n) const { return rho.count(n) != 0; }
  bool promised(const NodeAddress& n) const { return rho_bar.count(n) != 0; }
  friend bool operator==(const SteelCondition&, const SteelCondition&) = default;
};

// The parent-child case split admits two readings of its third case (child
// firm under a promised parent). The structural reading compares the child's
// firm tag against the parent's promise; the literal reading, whose displayed
// inequality mentions no child, imposes no inequality there. Campaigns run
// both and report divergence.
enum class OrderingReading { kStructural, kLiteral };

ValidationReport steel_validate(const OrdinalNotation& alpha,
                                const SteelCondition& p,
                                OrderingReading reading = OrderingReading::kStructural);

bool steel_is_strict(const SteelCondition& p);

// q extends p: tree and firm tags preserved, promises kept no lower or
// resolved to a firm tag no lower.
bool steel_leq(const SteelCondition& q, const SteelCondition& p);

// Largest tag present (firm or promised); 0 when untagged.
OrdinalNotation steel_crank(const SteelCondition& p);

// Retagging: firm tags below beta survive; every other node receives the
// promise max(beta, child tag + 1) computed bottom-up, old promises below
// beta staying put.
SteelCondition retag(const SteelCondition& p, const OrdinalNotation& beta,
                     bool promise_floor = true);

struct SteelConflict {
  NodeAddress node;
  std::string detail;
};

// Merged witness: the firm closure of the union tree under pointwise maxima.
// When the result extends both inputs it is the canonical compatibility
// witness; otherwise the certificate names an offending node.
std::variant<SteelCondition, SteelConflict> steel_merge_witness(
    const SteelCondition& p, const SteelCondition& r);

// Refined threshold: beta' is one past the largest tag of p below
// beta + height_cap, and q = retag(p, beta').
struct RefinedThreshold {
  OrdinalNotation beta_prime;
  SteelCondition reduct;
};
RefinedThreshold refined_threshold(const SteelCondition& p,
                                   const OrdinalNotation& beta,
                                   std::size_t height_cap);

std::size_t steel_height(const SteelCondition& p);

// Exhaustive fragment: trees over a width-capped address universe of at most
// `size_cap` nodes, tags drawn from the menu.
struct SteelFragment {
  OrdinalNotation alpha;        // ambient bound, tags stay strictly below
  std::vector<OrdinalNotation> tag_menu;
  std::uint32_t size_cap = 3;   // |t| <= s
  std::uint32_t width = 2;      // child indices < w, depth < size_cap
  OrderingReading reading = OrderingReading::kStructural;
};

std::vector<SteelCondition> enumerate_steel(const SteelFragment& fragment);

struct SteelMenus {
  std::vector<OrdinalNotation> betas;
  bool promise_floor = true;  // drop for the retag mutation control
};

// crank(retag(p, beta)) <= beta + height(t_p), the compatibility transfer
// through the merged witness, and the retag identities.
CampaignResult campaign_steel_rank(const SteelFragment& fragment,
                                   const SteelMenus& menus, int jobs);

// The refined lemma: competitors of the form retag(t, beta) compatible with
// retag(p, beta') are compatible with p. Divergence between the two ordering
// readings is reported as a note.
CampaignResult campaign_refined_threshold(const SteelFragment& fragment,
                                          const std::vector<OrdinalNotation>& betas,
                                          int jobs);

}  // namespace flab

#endif  // FORCELAB_STEEL_HPP_

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

#ifndef FORCELAB_FRAGMENT_HPP_
#define FORCELAB_FRAGMENT_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forcelab/alpha.hpp"

namespace flab {

// Bitset over the R-atoms (nonleaf node x point) of one fragment universe.
struct AtomMask {
  static constexpr std::size_t kWords = 3;  // up to 192 atoms
  std::array<std::uint64_t, kWords> w{};

  bool test(int b) const { return (w[b >> 6] >> (b & 63)) & 1ULL; }
  void set(int b) { w[b >> 6] |= 1ULL << (b & 63); }
  void reset(int b) { w[b >> 6] &= ~(1ULL << (b & 63)); }
  bool none() const { return !(w[0] | w[1] | w[2]); }
  int count() const;
  friend AtomMask operator&(const AtomMask& a, const AtomMask& b) {
    AtomMask out;
    for (std::size_t i = 0; i < kWords; ++i) out.w[i] = a.w[i] & b.w[i];
    return out;
  }
  friend AtomMask operator|(const AtomMask& a, const AtomMask& b) {
    AtomMask out;
    for (std::size_t i = 0; i < kWords; ++i) out.w[i] = a.w[i] | b.w[i];
    return out;
  }
  bool intersects(const AtomMask& o) const {
    return (w[0] & o.w[0]) | (w[1] & o.w[1]) | (w[2] & o.w[2]);
  }
  friend bool operator==(const AtomMask&, const AtomMask&) = default;
  friend auto operator<=>(const AtomMask& a, const AtomMask& b) {
    return a.w <=> b.w;
  }
  template <typename Fn>
  void for_each_bit(Fn&& fn) const;
};

// Enumeration request: condition atoms range over nodes up to `depth` (with
// index cap w at successor nodes) and leaf labels over `labels`.
struct AlphaFragment {
  ForcingParams params;
  std::uint32_t depth;
  std::vector<std::string> labels;
  std::uint64_t hard_cap = 200000;  // enumeration ceiling, LAB_HARD_CAP overrides
};

struct PackedCondition {
  std::uint32_t f_id = 0;
  AtomMask mask;
  friend bool operator==(const PackedCondition&, const PackedCondition&) = default;
};

// A fragment universe with every clause of the validator precompiled into
// masks, plus the exhaustive list of valid conditions.
class FragmentSet {
 public:
  explicit FragmentSet(AlphaFragment fragment);

  const AlphaFragment& fragment() const { return fragment_; }
  const ForcingParams& params() const { return fragment_.params; }
  const std::vector<PackedCondition>& conditions() const { return conditions_; }
  const std::vector<NodeAddress>& nodes() const { return nodes_; }
  const std::vector<NodeAddress>& nonleaf_nodes() const { return nonleaf_; }
  std::size_t atom_count() const { return atoms_; }

  AlphaCondition unpack(const PackedCondition& c) const;
  // Fails with kInternal when the condition leaves the universe.
  PackedCondition pack(const AlphaCondition& p) const;

  bool mask_valid(const AtomMask& mask, const AtomMask& forbid) const;
  bool compatible(const PackedCondition& a, const PackedCondition& b) const;

  // Atoms whose point avoids H and whose node rank is >= beta (resp. > beta):
  // crank(p, H) < beta iff the mask avoids the first, <= beta the second.
  AtomMask atoms_rank_at_least(const OrdinalNotation& beta, const PointSet& H) const;
  AtomMask atoms_rank_above(const OrdinalNotation& beta, const PointSet& H) const;

  const AtomMask& forbid_of(std::uint32_t f_id) const { return f_forbid_[f_id]; }
  bool f_compatible(std::uint32_t a, std::uint32_t b) const {
    return f_compat_[a * f_table_.size() + b];
  }
  std::size_t f_count() const { return f_table_.size(); }
  // f-ids reachable by removing one entry (for the monotonicity sweep).
  const std::vector<std::uint32_t>& f_shrinks(std::uint32_t f_id) const {
    return f_shrink_[f_id];
  }

  int atom_of(const NodeAddress& node, std::size_t point) const;
  std::pair<NodeAddress, std::size_t> atom_pair(int atom) const;
  std::string atom_name(int atom) const;
  const AtomMask& conflict_of(int atom) const { return conflict_[atom]; }

 private:
  void build_universe();
  void build_f_table();
  void build_masks();
  void enumerate_conditions();

  AlphaFragment fragment_;
  std::vector<NodeAddress> nodes_;
  std::vector<OrdinalNotation> ranks_;
  std::vector<int> node_parent_;
  std::vector<bool> node_leaf_;
  std::vector<bool> node_small_limit_;
  std::vector<std::vector<int>> node_children_;
  std::vector<NodeAddress> nonleaf_;
  std::vector<int> nonleaf_index_;  // node id -> nonleaf position or -1
  std::map<NodeAddress, int> node_lookup_;
  std::size_t atoms_ = 0;

  std::vector<AtomMask> conflict_;  // per atom, clause (c) partners
  AtomMask banned_;                 // clauses (d) and (e)

  struct CriticalEntry {
    int pred_atom;  // -1 when the node is the root
    bool a_route;
    bool b_route;
    AtomMask witness;
    std::vector<AtomMask> cover;  // one per limit child
  };
  std::vector<CriticalEntry> critical_;

  std::vector<std::vector<std::pair<int, int>>> f_table_;  // (leaf node id, label)
  std::map<std::vector<std::pair<int, int>>, std::uint32_t> f_lookup_;
  std::vector<AtomMask> f_forbid_;
  std::vector<bool> f_compat_;
  std::vector<std::vector<std::uint32_t>> f_shrink_;

  std::vector<PackedCondition> conditions_;
};

struct CampaignResult {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::uint64_t enumerated = 0;
  std::uint64_t checks = 0;
  std::vector<std::string> counterexamples;
  std::vector<std::string> notes;  // informational, never failing
  double wall_seconds = 0.0;
  bool pass() const { return counterexamples.empty(); }
};

// Density of D_{eta,x}: every (condition, nonleaf node, point) strengthens to
// a valid extension inside the dense set.
CampaignResult campaign_density(const FragmentSet& set, int jobs);

// The glb law: on every pair the union validates exactly when a common lower
// bound exists; validity is downward closed under removing one promise or one
// label (which pins the law on the whole 2s fragment), and a deterministic
// sample of incompatible pairs is re-checked by direct search.
CampaignResult campaign_glb(const FragmentSet& set, int jobs);

struct RankMenus {
  std::vector<OrdinalNotation> betas;
  std::vector<std::pair<std::string, PointSet>> loci;  // (name, H)
  ReductPrep prep;
};

// The single-step rank property: for every p and menu beta the reduct q is
// compatible with p, has crank <= beta, and every enumerated r with
// crank(r, H) < beta compatible with q is compatible with p.
CampaignResult campaign_rank(const FragmentSet& set, const RankMenus& menus,
                             int jobs);

struct HeartParams {
  std::vector<NodeAddress> run_nodes;  // atom sub-universe for run enumeration
  int rounds = 2;                      // Player-II moves per run
};

// Strategy-run enumeration and pairwise merge of final Player-I moves under
// the linked-cell surrogate precondition.
CampaignResult campaign_heart(const FragmentSet& set, const HeartParams& hp);

// Chain closure of strict conditions: unions along enumerated descending
// strict chains of the given length stay valid and strict.
CampaignResult campaign_strict_chains(const FragmentSet& set, int length);

std::uint64_t enumeration_hard_cap(std::uint64_t fallback);

}  // namespace flab

#endif  // FORCELAB_FRAGMENT_HPP_

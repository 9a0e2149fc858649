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

#ifndef FORCELAB_ALPHA_HPP_
#define FORCELAB_ALPHA_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "forcelab/address.hpp"
#include "forcelab/ordinal.hpp"
#include "forcelab/space.hpp"
#include "forcelab/template_tree.hpp"

namespace flab {

// Parameters of one condition calculus: the template tree for alpha with
// limit width c, a finite space, disjoint constraint sets A and B, the size
// cap s and the successor-node width w with s < w (the regularity slack that
// keeps every fresh-node choice executable).
struct ForcingParams {
  ForcingParams(OrdinalNotation alpha_in, std::uint32_t limit_width,
                FiniteSpace space_in, PointSet a, PointSet b, std::uint32_t s,
                std::uint32_t w);

  OrdinalNotation alpha;
  TemplateTree tree;
  FiniteSpace space;
  PointSet A;
  PointSet B;
  std::uint32_t size_cap;  // s
  std::uint32_t width;     // w
};

// A condition: a finite partial leaf labeling f and a finite promise
// relation R between nonleaf nodes and points.
struct AlphaCondition {
  std::map<NodeAddress, std::string> f;
  std::set<std::pair<NodeAddress, std::size_t>> R;

  bool has_pair(const NodeAddress& node, std::size_t point) const {
    return R.count({node, point}) != 0;
  }
  // q <= p iff f_p subset of f_q and R_p subset of R_q.
  bool extends(const AlphaCondition& p) const;

  friend bool operator==(const AlphaCondition&, const AlphaCondition&) = default;
  friend bool operator<(const AlphaCondition& a, const AlphaCondition& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.R < b.R;
  }
};

struct Violation {
  std::string clause;  // "structural", "a".."f"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Clause checks (a)-(f). `cap` overrides the size cap (unions and
// strengthenings run at 2s).
ValidationReport validate(const ForcingParams& params, const AlphaCondition& p,
                          std::optional<std::uint32_t> cap = std::nullopt);

// The three bullets: a small-limit node whose predecessor promise (or A/B
// membership at the top) collides with a grandchild promise below it.
bool is_x_critical(const ForcingParams& params, const AlphaCondition& p,
                   const NodeAddress& eta, std::size_t x);

// Strict variant: every critical node carries a child promise.
bool is_strict(const ForcingParams& params, const AlphaCondition& p);

// All critical (node, point) pairs of p, sorted.
std::vector<std::pair<NodeAddress, std::size_t>> critical_pairs(
    const ForcingParams& params, const AlphaCondition& p);

struct Incompatible {
  ValidationReport why;
};

// Greatest lower bound: the componentwise union when it validates at cap 2s,
// incompatible otherwise.
std::variant<AlphaCondition, Incompatible> union_glb(const ForcingParams& params,
                                                     const AlphaCondition& p,
                                                     const AlphaCondition& q);

// Is p in the dense set D_{eta,x}: at rank-1 nodes a promise at eta or a
// leaf label below eta capturing x; at higher ranks a promise at eta or at a
// child of eta.
bool in_dense_set(const ForcingParams& params, const AlphaCondition& p,
                  const NodeAddress& eta, std::size_t x);

// Strengthen every critical pair to a child promise (the strict closure).
AlphaCondition strictify(const ForcingParams& params, const AlphaCondition& p);

// The density algorithm: returns p' <= p with p' in D_{eta,x}, following the
// constructive case analysis (top A-case, small-limit subcases, critical
// nodes via strict closure, fresh successors, and the preparatory recursion
// for successors of small-limit nodes). Failure to produce a valid p' is a
// library bug and throws kInternal; an unresolvable rank-1 label request
// throws kInvalidArgument (space resolution).
AlphaCondition strengthen_into_dense(const ForcingParams& params,
                                     const AlphaCondition& p,
                                     const NodeAddress& eta, std::size_t x);

// sup of node ranks over promises whose point avoids H, 0 when empty.
OrdinalNotation crank_single(const ForcingParams& params, const AlphaCondition& p,
                             const PointSet& H);

struct ReductPrep {
  bool limit_gap = true;          // grandchild witnesses below limit promises
  bool strict_below_pred = true;  // child witnesses for pred-promise criticality
  bool low_child_plant = true;    // the successor-of-small-limit planting
};

struct ReductResult {
  AlphaCondition prepared;  // p+ <= p
  AlphaCondition reduct;    // q >= p+, crank(q, H) <= beta
};

// The single-step rank reduct: prepare p (see ReductPrep; flags exist for
// mutation controls only), then keep exactly the promises whose point lies
// in H or whose node rank is <= beta.
ReductResult rank_reduct_single(const ForcingParams& params,
                                const AlphaCondition& p,
                                const OrdinalNotation& beta, const PointSet& H,
                                const ReductPrep& prep = {});

// One Player-I move of the closure-game strategy: extend `last` (the latest
// Player-II move) to a strict condition that also pins, for every small-limit
// node with a grandchild promise but no child promise, the node itself or its
// predecessor.
AlphaCondition heart_strategy_step(const ForcingParams& params,
                                   const AlphaCondition& last);

enum class MergeStatus { kMerged, kPreconditionFailed, kConflict };

struct MergeOutcome {
  MergeStatus status;
  AlphaCondition merged;    // meaningful when kMerged
  ValidationReport report;  // names the violated clause on kConflict
};

// Union of the final Player-I moves of two strategy runs. The precondition is
// the linked-cell surrogate: leafwise label compatibility and no direct
// clause-(c) conflicts across the runs. Under it, a conflict outcome is a
// counterexample to the implementation.
MergeOutcome heart_merge_check(const ForcingParams& params,
                               const AlphaCondition& final_move_1,
                               const AlphaCondition& final_move_2);

}  // namespace flab

#endif  // FORCELAB_ALPHA_HPP_

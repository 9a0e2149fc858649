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

#ifndef FORCELAB_ITERATION_HPP_
#define FORCELAB_ITERATION_HPP_

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "forcelab/alpha.hpp"
#include "forcelab/fragment.hpp"

namespace flab {

// A finite product of condition calculi with concrete ground parameters.
// Stage 0 runs with A = B = empty; a later stage with constraints must sit at
// a successor ordinal and either exceed alpha_0 or live on a smaller space.
class IterationSpec {
 public:
  explicit IterationSpec(std::vector<ForcingParams> stages);
  const std::vector<ForcingParams>& stages() const { return stages_; }
  const ForcingParams& stage(std::size_t i) const { return stages_.at(i); }
  std::size_t size() const { return stages_.size(); }

 private:
  std::vector<ForcingParams> stages_;
};

// Finitely supported product condition; absent coordinates are the greatest
// element.
struct GoodCondition {
  std::map<std::size_t, AlphaCondition> coords;

  const AlphaCondition& at(std::size_t stage) const {
    static const AlphaCondition kTop{};
    auto it = coords.find(stage);
    return it == coords.end() ? kTop : it->second;
  }
  std::vector<std::size_t> support() const;
  bool extends(const GoodCondition& p) const;
  friend bool operator==(const GoodCondition&, const GoodCondition&) = default;
};

// Stage-indexed exemption sets. Stage 0 always carries support; a stage with
// constraints at or below alpha_0 is all-or-nothing.
class GroundLocus {
 public:
  GroundLocus(const IterationSpec& spec, std::map<std::size_t, PointSet> H);
  const PointSet& at(std::size_t stage) const;
  bool in_support(std::size_t stage) const;
  const std::map<std::size_t, PointSet>& entries() const { return H_; }

 private:
  std::map<std::size_t, PointSet> H_;
  std::vector<bool> support_;
};

struct StageViolation {
  std::size_t stage;
  ValidationReport report;
};

struct GroundValidation {
  std::vector<StageViolation> stages;
  bool ok() const { return stages.empty(); }
  std::string summary() const;
};

GroundValidation validate_good(const IterationSpec& spec, const GoodCondition& p);

// Rank with the infinity sentinel for support escaping the locus.
struct GroundRank {
  bool infinite = false;
  OrdinalNotation value;
  friend bool operator==(const GroundRank&, const GroundRank&) = default;
};

GroundRank crank_ground(const IterationSpec& spec, const GoodCondition& p,
                        const GroundLocus& H);

struct StageIncompatible {
  std::size_t stage;
  ValidationReport report;
};

// Coordinatewise union; the certificate names the first failing stage.
std::variant<GoodCondition, StageIncompatible> pointwise_union(
    const IterationSpec& spec, const std::vector<GoodCondition>& family);

struct GroundReduct {
  GoodCondition prepared;
  GoodCondition reduct;
};

// Per-stage preparation (the three properties) followed by per-stage
// truncation; coordinates outside supp(p) intersect supp(H) are zeroed.
// Requires beta < alpha_0.
GroundReduct rank_reduct_ground(const IterationSpec& spec, const GoodCondition& p,
                                const OrdinalNotation& beta, const GroundLocus& H,
                                const ReductPrep& prep = {});

// Smallest-footprint locus zeroing every condition in F: close the touched
// points stage by stage, inflating all-or-nothing stages to their whole
// space. Fails when an inflated stage exceeds the budget.
GroundLocus small_locus_builder(const IterationSpec& spec,
                                const std::vector<GoodCondition>& F,
                                std::size_t budget);

// Exhaustive product fragments for the ground campaigns.
struct GroundFragment {
  IterationSpec spec;
  std::vector<AlphaFragment> stage_fragments;  // one per stage, same order
};

struct GroundMenus {
  std::vector<OrdinalNotation> betas;  // each < alpha_0
  std::vector<std::pair<std::string, std::map<std::size_t, PointSet>>> loci;
  ReductPrep prep;
  bool stop_on_first = false;  // mutation demos only need one counterexample
};

CampaignResult campaign_rank_ground(const GroundFragment& fragment,
                                    const GroundMenus& menus, int jobs);

// Bit-for-bit agreement of the one-stage product with the single-step
// calculus: validation, crank and reduct per enumerated condition.
CampaignResult campaign_degenerate_agreement(const AlphaFragment& fragment,
                                             const RankMenus& menus, int jobs);

}  // namespace flab

#endif  // FORCELAB_ITERATION_HPP_

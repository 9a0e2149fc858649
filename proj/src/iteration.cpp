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

#include "forcelab/iteration.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace flab {

IterationSpec::IterationSpec(std::vector<ForcingParams> stages)
    : stages_(std::move(stages)) {
  if (stages_.empty())
    fail(ErrorKind::kInvalidArgument, "an iteration needs at least one stage");
  if (!stages_[0].A.empty() || !stages_[0].B.empty())
    fail(ErrorKind::kInvalidArgument, "stage 0 must run with empty A and B");
  const OrdinalNotation& alpha0 = stages_[0].alpha;
  for (std::size_t g = 1; g < stages_.size(); ++g) {
    const ForcingParams& st = stages_[g];
    if (st.A.empty() && st.B.empty()) continue;
    if (cof_class(st.alpha) != CofClass::kSuccessor)
      fail(ErrorKind::kInvalidArgument,
           "constrained stage " + std::to_string(g) +
               " needs a successor ordinal");
    if (!(alpha0 < st.alpha) && !(st.space.size() < stages_[0].space.size()))
      fail(ErrorKind::kInvalidArgument,
           "constrained stage " + std::to_string(g) +
               " must exceed alpha_0 or live on a smaller space");
  }
}

std::vector<std::size_t> GoodCondition::support() const {
  std::vector<std::size_t> out;
  for (const auto& [stage, cond] : coords)
    if (!cond.f.empty() || !cond.R.empty()) out.push_back(stage);
  return out;
}

bool GoodCondition::extends(const GoodCondition& p) const {
  for (const auto& [stage, cond] : p.coords)
    if (!at(stage).extends(cond)) return false;
  return true;
}

GroundLocus::GroundLocus(const IterationSpec& spec,
                         std::map<std::size_t, PointSet> H)
    : H_(std::move(H)) {
  support_.assign(spec.size(), false);
  for (const auto& [stage, set] : H_) {
    if (stage >= spec.size())
      fail(ErrorKind::kInvalidArgument, "locus stage out of range");
    if (set.universe_size() != spec.stage(stage).space.size())
      fail(ErrorKind::kInvalidArgument, "locus set sized for the wrong space");
    support_[stage] = !set.empty();
  }
  for (std::size_t g = 0; g < spec.size(); ++g)
    H_.emplace(g, PointSet(spec.stage(g).space.size()));
  if (support_.empty() || !support_[0])
    fail(ErrorKind::kInvalidArgument, "a locus always carries stage 0");
  const OrdinalNotation& alpha0 = spec.stage(0).alpha;
  for (std::size_t g = 1; g < spec.size(); ++g) {
    const ForcingParams& st = spec.stage(g);
    if (st.A.empty() && st.B.empty()) continue;
    if (alpha0 < st.alpha) continue;
    const PointSet& set = at(g);
    if (!set.empty() && set != st.space.full_set())
      fail(ErrorKind::kInvalidArgument,
           "constrained low stage " + std::to_string(g) +
               " must carry an empty or full locus entry");
  }
}

const PointSet& GroundLocus::at(std::size_t stage) const {
  auto it = H_.find(stage);
  if (it == H_.end()) fail(ErrorKind::kInvalidArgument, "locus stage out of range");
  return it->second;
}

bool GroundLocus::in_support(std::size_t stage) const {
  return stage < support_.size() && support_[stage];
}

std::string GroundValidation::summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0) out << "; ";
    out << "stage " << stages[i].stage << ": " << stages[i].report.summary();
  }
  return out.str();
}

GroundValidation validate_good(const IterationSpec& spec, const GoodCondition& p) {
  GroundValidation out;
  for (const auto& [stage, cond] : p.coords) {
    if (stage >= spec.size()) {
      out.stages.push_back(
          {stage, {{{"structural", "stage index out of range"}}}});
      continue;
    }
    ValidationReport report = validate(spec.stage(stage), cond);
    if (!report.ok()) out.stages.push_back({stage, std::move(report)});
  }
  return out;
}

GroundRank crank_ground(const IterationSpec& spec, const GoodCondition& p,
                        const GroundLocus& H) {
  for (std::size_t stage : p.support())
    if (!H.in_support(stage)) return {true, OrdinalNotation()};
  GroundRank out;
  for (const auto& [stage, cond] : p.coords) {
    OrdinalNotation r = crank_single(spec.stage(stage), cond, H.at(stage));
    if (out.value < r) out.value = r;
  }
  return out;
}

std::variant<GoodCondition, StageIncompatible> pointwise_union(
    const IterationSpec& spec, const std::vector<GoodCondition>& family) {
  GoodCondition out;
  for (const GoodCondition& p : family) {
    for (const auto& [stage, cond] : p.coords) {
      AlphaCondition& slot = out.coords[stage];
      for (const auto& [leaf, label] : cond.f) {
        auto [it, inserted] = slot.f.emplace(leaf, label);
        if (!inserted && it->second != label)
          return StageIncompatible{
              stage,
              {{{"structural", "leaf labels disagree at " + format_address(leaf)}}}};
      }
      slot.R.insert(cond.R.begin(), cond.R.end());
    }
  }
  for (const auto& [stage, cond] : out.coords) {
    ValidationReport report =
        validate(spec.stage(stage), cond, 2 * spec.stage(stage).size_cap);
    if (!report.ok()) return StageIncompatible{stage, std::move(report)};
  }
  return out;
}

GroundReduct rank_reduct_ground(const IterationSpec& spec, const GoodCondition& p,
                                const OrdinalNotation& beta, const GroundLocus& H,
                                const ReductPrep& prep) {
  if (!(beta < spec.stage(0).alpha))
    fail(ErrorKind::kInvalidArgument, "ground reduct needs beta < alpha_0");
  GroundReduct out;
  for (const auto& [stage, cond] : p.coords) {
    const ForcingParams& params = spec.stage(stage);
    PointSet local = H.in_support(stage) ? H.at(stage)
                                         : PointSet(params.space.size());
    ReductResult rr = rank_reduct_single(params, cond, beta, local, prep);
    out.prepared.coords[stage] = rr.prepared;
    if (H.in_support(stage)) out.reduct.coords[stage] = rr.reduct;
  }
  return out;
}

GroundLocus small_locus_builder(const IterationSpec& spec,
                                const std::vector<GoodCondition>& F,
                                std::size_t budget) {
  std::map<std::size_t, PointSet> H;
  for (std::size_t g = 0; g < spec.size(); ++g)
    H.emplace(g, PointSet(spec.stage(g).space.size()));
  for (const GoodCondition& p : F)
    for (const auto& [stage, cond] : p.coords)
      for (const auto& [node, point] : cond.R) H.at(stage).set(point);

  const OrdinalNotation& alpha0 = spec.stage(0).alpha;
  for (std::size_t g = 1; g < spec.size(); ++g) {
    const ForcingParams& st = spec.stage(g);
    const bool constrained = !st.A.empty() || !st.B.empty();
    if (!constrained || alpha0 < st.alpha) continue;
    if (H.at(g).empty()) continue;
    // All-or-nothing stage touched by F: inflate to the whole space.
    if (st.space.size() > budget)
      fail(ErrorKind::kLimit,
           "locus infeasible: stage " + std::to_string(g) +
               " must inflate beyond the budget");
    H.at(g) = st.space.full_set();
  }
  if (H.at(0).empty()) H.at(0).set(0);  // stage 0 always carries support
  if (H.at(0).count() > budget)
    fail(ErrorKind::kLimit, "locus infeasible: stage 0 exceeds the budget");
  return GroundLocus(spec, std::move(H));
}

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

CampaignResult campaign_rank_ground(const GroundFragment& fragment,
                                    const GroundMenus& menus, int jobs) {
  (void)jobs;
  Stopwatch watch;
  CampaignResult result;
  result.name = "ground-rank";
  const IterationSpec& spec = fragment.spec;

  std::vector<FragmentSet> sets;
  sets.reserve(fragment.stage_fragments.size());
  for (const AlphaFragment& f : fragment.stage_fragments) sets.emplace_back(f);

  // Product enumeration over per-stage packed conditions.
  std::vector<std::size_t> sizes;
  std::uint64_t total = 1;
  for (const FragmentSet& s : sets) {
    sizes.push_back(s.conditions().size());
    total *= s.conditions().size();
  }
  const std::uint64_t cap = enumeration_hard_cap(200000);
  if (total > cap)
    fail(ErrorKind::kLimit, "ground fragment exceeds the hard cap");
  result.enumerated = total;
  result.parameters["conditions"] = std::to_string(total);

  auto coords_of = [&](std::uint64_t index) {
    std::vector<std::uint32_t> out(sets.size());
    for (std::size_t g = 0; g < sets.size(); ++g) {
      out[g] = static_cast<std::uint32_t>(index % sizes[g]);
      index /= sizes[g];
    }
    return out;
  };
  auto unpack_good = [&](const std::vector<std::uint32_t>& idx) {
    GoodCondition out;
    for (std::size_t g = 0; g < sets.size(); ++g) {
      AlphaCondition c = sets[g].unpack(sets[g].conditions()[idx[g]]);
      if (!c.f.empty() || !c.R.empty()) out.coords[g] = std::move(c);
    }
    return out;
  };

  for (const OrdinalNotation& beta : menus.betas) {
    for (const auto& [locus_name, locus_map] : menus.loci) {
      GroundLocus H(spec, locus_map);
      // Per-stage masks for rank tests and reducts.
      std::vector<AtomMask> at_least(sets.size()), above(sets.size());
      std::vector<bool> stage_in_support(sets.size());
      for (std::size_t g = 0; g < sets.size(); ++g) {
        PointSet local = H.in_support(g) ? H.at(g)
                                         : PointSet(spec.stage(g).space.size());
        at_least[g] = sets[g].atoms_rank_at_least(beta, local);
        above[g] = sets[g].atoms_rank_above(beta, local);
        stage_in_support[g] = H.in_support(g);
      }

      // Low-rank competitors: finite rank below beta.
      std::vector<std::vector<std::uint32_t>> low_indices;
      std::vector<std::uint64_t> lows;
      for (std::uint64_t i = 0; i < total; ++i) {
        auto idx = coords_of(i);
        bool low = true;
        for (std::size_t g = 0; g < sets.size() && low; ++g) {
          const PackedCondition& c = sets[g].conditions()[idx[g]];
          const bool empty_stage = c.mask.none() && c.f_id == 0;
          if (!stage_in_support[g] && !empty_stage) low = false;  // infinite
          if (c.mask.intersects(at_least[g])) low = false;
        }
        if (low) lows.push_back(i);
      }

      for (std::uint64_t i = 0; i < total; ++i) {
        auto idx = coords_of(i);
        GoodCondition p = unpack_good(idx);
        GroundReduct gr;
        try {
          gr = rank_reduct_ground(spec, p, beta, H, menus.prep);
        } catch (const Error& e) {
          result.counterexamples.push_back("ground reduct failed at p#" +
                                           std::to_string(i) + ": " + e.what());
          continue;
        }
        ++result.checks;
        GroundValidation gv = validate_good(spec, gr.reduct);
        if (!gv.ok()) {
          result.counterexamples.push_back("ground reduct invalid at p#" +
                                           std::to_string(i));
          continue;
        }
        GroundRank qr = crank_ground(spec, gr.reduct, H);
        if (qr.infinite || beta < qr.value) {
          result.counterexamples.push_back("ground reduct rank exceeds beta at p#" +
                                           std::to_string(i));
          continue;
        }
        if (!gr.prepared.extends(p) || !gr.prepared.extends(gr.reduct)) {
          result.counterexamples.push_back("ground reduct ordering broken at p#" +
                                           std::to_string(i));
          continue;
        }
        if (gr.reduct == p) continue;  // trivially safe
        // Packed per-stage images of q and p for the competitor sweep.
        std::vector<PackedCondition> qs(sets.size()), ps(sets.size());
        bool packable = true;
        for (std::size_t g = 0; g < sets.size(); ++g) {
          ps[g] = sets[g].conditions()[idx[g]];
          try {
            qs[g] = sets[g].pack(gr.reduct.at(g));
          } catch (const Error&) {
            packable = false;
          }
        }
        if (!packable) {
          result.counterexamples.push_back("ground reduct left the universe at p#" +
                                           std::to_string(i));
          continue;
        }
        for (std::uint64_t li : lows) {
          ++result.checks;
          auto ridx = coords_of(li);
          bool rq = true, rp = true;
          for (std::size_t g = 0; g < sets.size(); ++g) {
            const PackedCondition& r = sets[g].conditions()[ridx[g]];
            if (rq && !sets[g].compatible(r, qs[g])) rq = false;
            if (rp && !sets[g].compatible(r, ps[g])) rp = false;
          }
          if (rq && !rp && result.counterexamples.size() < 25)
            result.counterexamples.push_back(
                "ground rank property fails: beta=" + format_ordinal(beta) +
                " H=" + locus_name + " p#" + std::to_string(i) + " r#" +
                std::to_string(li));
          if (menus.stop_on_first && !result.counterexamples.empty()) break;
        }
        if (menus.stop_on_first && !result.counterexamples.empty()) break;
      }
      if (menus.stop_on_first && !result.counterexamples.empty()) break;
    }
    if (menus.stop_on_first && !result.counterexamples.empty()) break;
  }
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_degenerate_agreement(const AlphaFragment& fragment,
                                             const RankMenus& menus, int jobs) {
  (void)jobs;
  Stopwatch watch;
  CampaignResult result;
  result.name = "degenerate-agreement";

  FragmentSet set(fragment);
  IterationSpec spec({fragment.params});
  result.enumerated = set.conditions().size();

  for (const PackedCondition& pc : set.conditions()) {
    AlphaCondition c = set.unpack(pc);
    GoodCondition g;
    if (!c.f.empty() || !c.R.empty()) g.coords[0] = c;

    ++result.checks;
    const bool single_ok = validate(fragment.params, c).ok();
    const bool ground_ok = validate_good(spec, g).ok();
    if (single_ok != ground_ok) {
      result.counterexamples.push_back("validation mismatch");
      continue;
    }
    for (const OrdinalNotation& beta : menus.betas) {
      for (const auto& [name, H] : menus.loci) {
        if (H.empty()) continue;  // a ground locus always carries stage 0
        GroundLocus locus(spec, {{0, H}});
        ++result.checks;
        OrdinalNotation single_rank = crank_single(fragment.params, c, H);
        GroundRank ground_rank = crank_ground(spec, g, locus);
        if (ground_rank.infinite || ground_rank.value != single_rank) {
          result.counterexamples.push_back("crank mismatch at H=" + name);
          continue;
        }
        if (!(beta < fragment.params.alpha)) continue;
        ReductResult rr =
            rank_reduct_single(fragment.params, c, beta, H, menus.prep);
        GroundReduct gr = rank_reduct_ground(spec, g, beta, locus, menus.prep);
        if (gr.reduct.at(0) != rr.reduct || gr.prepared.at(0) != rr.prepared)
          result.counterexamples.push_back(
              "reduct mismatch at beta=" + format_ordinal(beta) + " H=" + name);
      }
    }
  }
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

}  // namespace flab

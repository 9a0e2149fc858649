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

#include "forcelab/fragment.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

namespace flab {

int AtomMask::count() const {
  int n = 0;
  for (auto word : w) n += std::popcount(word);
  return n;
}

template <typename Fn>
void AtomMask::for_each_bit(Fn&& fn) const {
  for (std::size_t i = 0; i < kWords; ++i) {
    std::uint64_t word = w[i];
    while (word) {
      int b = std::countr_zero(word);
      fn(static_cast<int>(i * 64 + b));
      word &= word - 1;
    }
  }
}

std::uint64_t enumeration_hard_cap(std::uint64_t fallback) {
  if (const char* env = std::getenv("LAB_HARD_CAP")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return fallback;
}

FragmentSet::FragmentSet(AlphaFragment fragment) : fragment_(std::move(fragment)) {
  build_universe();
  build_f_table();
  build_masks();
  enumerate_conditions();
}

void FragmentSet::build_universe() {
  const TemplateTree& tree = fragment_.params.tree;
  const std::uint32_t w = fragment_.params.width;
  // Breadth-first over the truncated universe.
  nodes_.push_back(NodeAddress());
  ranks_.push_back(fragment_.params.alpha);
  node_parent_.push_back(-1);
  for (std::size_t head = 0; head < nodes_.size(); ++head) {
    const NodeAddress& addr = nodes_[head];
    const OrdinalNotation& rank = ranks_[head];
    CofClass cls = cof_class(rank);
    node_leaf_.push_back(cls == CofClass::kZero);
    node_small_limit_.push_back(cls == CofClass::kSmallLimit);
    node_children_.emplace_back();
    if (cls == CofClass::kZero || addr.size() >= fragment_.depth) continue;
    std::uint32_t fanout =
        cls == CofClass::kSuccessor ? w : tree.limit_width();
    for (std::uint32_t i = 0; i < fanout; ++i) {
      NodeAddress child = addr.child(i);
      auto child_rank = tree.node_rank(child);
      if (!child_rank) fail(ErrorKind::kInternal, "universe walked off the tree");
      node_children_[head].push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back(child);
      ranks_.push_back(*child_rank);
      node_parent_.push_back(static_cast<int>(head));
    }
  }
  nonleaf_index_.assign(nodes_.size(), -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    node_lookup_[nodes_[i]] = static_cast<int>(i);
    if (!node_leaf_[i]) {
      nonleaf_index_[i] = static_cast<int>(nonleaf_.size());
      nonleaf_.push_back(nodes_[i]);
    }
  }
  atoms_ = nonleaf_.size() * fragment_.params.space.size();
  if (atoms_ > AtomMask::kWords * 64)
    fail(ErrorKind::kUnsupported,
         "fragment universe exceeds the packed atom capacity");
}

int FragmentSet::atom_of(const NodeAddress& node, std::size_t point) const {
  auto it = node_lookup_.find(node);
  if (it == node_lookup_.end() || nonleaf_index_[it->second] < 0)
    fail(ErrorKind::kInternal,
         "address outside the fragment universe: " + format_address(node));
  return nonleaf_index_[it->second] * static_cast<int>(fragment_.params.space.size()) +
         static_cast<int>(point);
}

std::pair<NodeAddress, std::size_t> FragmentSet::atom_pair(int atom) const {
  const std::size_t npts = fragment_.params.space.size();
  return {nonleaf_[atom / npts], atom % npts};
}

std::string FragmentSet::atom_name(int atom) const {
  const std::size_t npts = fragment_.params.space.size();
  const NodeAddress& node = nonleaf_[atom / npts];
  return format_address(node) + "/" +
         fragment_.params.space.point_name(atom % npts);
}

void FragmentSet::build_f_table() {
  std::vector<int> leaf_ids;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (node_leaf_[i]) leaf_ids.push_back(static_cast<int>(i));
  const int nlabels = static_cast<int>(fragment_.labels.size());
  for (const std::string& label : fragment_.labels)
    (void)fragment_.params.space.subbasic(label);  // validate up front

  std::vector<std::pair<int, int>> current;
  auto emit = [&] {
    f_lookup_[current] = static_cast<std::uint32_t>(f_table_.size());
    f_table_.push_back(current);
  };
  // All partial maps with at most size_cap entries, leaves ascending.
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    emit();
    if (current.size() >= fragment_.params.size_cap) return;
    for (std::size_t li = from; li < leaf_ids.size(); ++li) {
      for (int lab = 0; lab < nlabels; ++lab) {
        current.push_back({leaf_ids[li], lab});
        rec(li + 1);
        current.pop_back();
      }
    }
  };
  rec(0);

  // Compatibility: no shared leaf with differing labels.
  const std::size_t F = f_table_.size();
  f_compat_.assign(F * F, false);
  for (std::size_t i = 0; i < F; ++i) {
    for (std::size_t j = i; j < F; ++j) {
      bool ok = true;
      for (const auto& [leaf_i, lab_i] : f_table_[i])
        for (const auto& [leaf_j, lab_j] : f_table_[j])
          if (leaf_i == leaf_j && lab_i != lab_j) ok = false;
      f_compat_[i * F + j] = f_compat_[j * F + i] = ok;
    }
  }

  // Clause (c) against labels: a promise at the parent of a labeled leaf is
  // forbidden for every point the label captures.
  f_forbid_.assign(F, AtomMask());
  const std::size_t npts = fragment_.params.space.size();
  for (std::size_t i = 0; i < F; ++i) {
    for (const auto& [leaf, lab] : f_table_[i]) {
      int parent = node_parent_[leaf];
      if (parent < 0 || nonleaf_index_[parent] < 0) continue;
      const PointSet& extent =
          fragment_.params.space.subbasic(fragment_.labels[lab]);
      for (std::size_t x = 0; x < npts; ++x)
        if (extent.test(x)) f_forbid_[i].set(atom_of(nodes_[parent], x));
    }
  }

  f_shrink_.assign(F, {});
  for (std::size_t i = 0; i < F; ++i) {
    for (std::size_t k = 0; k < f_table_[i].size(); ++k) {
      auto sub = f_table_[i];
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(k));
      f_shrink_[i].push_back(f_lookup_.at(sub));
    }
  }
}

void FragmentSet::build_masks() {
  const std::size_t npts = fragment_.params.space.size();
  conflict_.assign(atoms_, AtomMask());
  for (std::size_t node = 0; node < nodes_.size(); ++node) {
    if (nonleaf_index_[node] < 0) continue;
    for (int child : node_children_[node]) {
      if (nonleaf_index_[child] < 0) continue;
      for (std::size_t x = 0; x < npts; ++x) {
        int a = atom_of(nodes_[node], x);
        int b = atom_of(nodes_[child], x);
        conflict_[a].set(b);
        conflict_[b].set(a);
      }
    }
  }
  banned_ = AtomMask();
  for (std::size_t x = 0; x < npts; ++x) {
    if (fragment_.params.B.test(x)) banned_.set(atom_of(NodeAddress(), x));
  }
  for (std::size_t node = 0; node < nodes_.size(); ++node) {
    if (nodes_[node].size() != 1 || nonleaf_index_[node] < 0) continue;
    for (std::size_t x = 0; x < npts; ++x)
      if (fragment_.params.A.test(x)) banned_.set(atom_of(nodes_[node], x));
  }

  for (std::size_t node = 0; node < nodes_.size(); ++node) {
    if (!node_small_limit_[node]) continue;
    for (std::size_t x = 0; x < npts; ++x) {
      CriticalEntry ce;
      ce.pred_atom = -1;
      if (node_parent_[node] >= 0)
        ce.pred_atom = atom_of(nodes_[node_parent_[node]], x);
      ce.a_route = nodes_[node].size() == 1 && fragment_.params.A.test(x);
      ce.b_route = nodes_[node].empty() && fragment_.params.B.test(x);
      for (int child : node_children_[node]) {
        AtomMask cover;
        for (int grand : node_children_[child])
          if (nonleaf_index_[grand] >= 0) {
            cover.set(atom_of(nodes_[grand], x));
            ce.witness.set(atom_of(nodes_[grand], x));
          }
        ce.cover.push_back(cover);
      }
      if (!ce.witness.none()) critical_.push_back(std::move(ce));
    }
  }
}

bool FragmentSet::mask_valid(const AtomMask& mask, const AtomMask& forbid) const {
  if (mask.intersects(banned_)) return false;
  for (std::size_t i = 0; i < AtomMask::kWords; ++i) {
    std::uint64_t word = mask.w[i];
    while (word) {
      int b = static_cast<int>(i * 64) + std::countr_zero(word);
      word &= word - 1;
      if (conflict_[b].intersects(mask)) return false;
    }
  }
  if (forbid.intersects(mask)) return false;
  for (const CriticalEntry& ce : critical_) {
    if (!(ce.a_route || ce.b_route ||
          (ce.pred_atom >= 0 && mask.test(ce.pred_atom))))
      continue;
    if (!ce.witness.intersects(mask)) continue;
    bool free_child = false;
    for (const AtomMask& cover : ce.cover)
      if (!cover.intersects(mask)) {
        free_child = true;
        break;
      }
    if (!free_child) return false;
  }
  return true;
}

bool FragmentSet::compatible(const PackedCondition& a,
                             const PackedCondition& b) const {
  if (!f_compatible(a.f_id, b.f_id)) return false;
  AtomMask u = a.mask | b.mask;
  return mask_valid(u, f_forbid_[a.f_id] | f_forbid_[b.f_id]);
}

void FragmentSet::enumerate_conditions() {
  const std::uint64_t cap = enumeration_hard_cap(fragment_.hard_cap);
  std::vector<AtomMask> rmasks;
  AtomMask current;
  std::function<void(int, std::uint32_t)> rec = [&](int from, std::uint32_t used) {
    rmasks.push_back(current);
    if (used >= fragment_.params.size_cap) return;
    for (int b = from; b < static_cast<int>(atoms_); ++b) {
      if (banned_.test(b)) continue;
      if (conflict_[b].intersects(current)) continue;
      current.set(b);
      rec(b + 1, used + 1);
      current.reset(b);
    }
  };
  rec(0, 0);
  // Clause (f) is not incremental; filter now.
  std::vector<AtomMask> valid_masks;
  for (const AtomMask& m : rmasks)
    if (mask_valid(m, AtomMask())) valid_masks.push_back(m);

  for (std::uint32_t f = 0; f < f_table_.size(); ++f) {
    for (const AtomMask& m : valid_masks) {
      if (f_forbid_[f].intersects(m)) continue;
      conditions_.push_back({f, m});
      if (conditions_.size() > cap)
        fail(ErrorKind::kLimit,
             "fragment too large: enumeration exceeds the hard cap of " +
                 std::to_string(cap));
    }
  }
}

AlphaCondition FragmentSet::unpack(const PackedCondition& c) const {
  AlphaCondition out;
  for (const auto& [leaf, lab] : f_table_[c.f_id])
    out.f[nodes_[leaf]] = fragment_.labels[lab];
  const std::size_t npts = fragment_.params.space.size();
  c.mask.for_each_bit([&](int b) {
    out.R.insert({nonleaf_[b / npts], b % npts});
  });
  return out;
}

PackedCondition FragmentSet::pack(const AlphaCondition& p) const {
  std::vector<std::pair<int, int>> fvec;
  for (const auto& [leaf, label] : p.f) {
    auto it = node_lookup_.find(leaf);
    if (it == node_lookup_.end())
      fail(ErrorKind::kInternal, "pack: leaf outside universe");
    auto lab = std::find(fragment_.labels.begin(), fragment_.labels.end(), label);
    if (lab == fragment_.labels.end())
      fail(ErrorKind::kInternal, "pack: label outside menu");
    fvec.push_back({it->second,
                    static_cast<int>(lab - fragment_.labels.begin())});
  }
  std::sort(fvec.begin(), fvec.end());
  auto fit = f_lookup_.find(fvec);
  if (fit == f_lookup_.end()) fail(ErrorKind::kInternal, "pack: f outside table");
  PackedCondition out;
  out.f_id = fit->second;
  for (const auto& [node, point] : p.R) out.mask.set(atom_of(node, point));
  return out;
}

AtomMask FragmentSet::atoms_rank_at_least(const OrdinalNotation& beta,
                                          const PointSet& H) const {
  AtomMask out;
  const std::size_t npts = fragment_.params.space.size();
  for (std::size_t i = 0; i < nonleaf_.size(); ++i) {
    auto rank = fragment_.params.tree.node_rank(nonleaf_[i]);
    if (*rank < beta) continue;
    for (std::size_t x = 0; x < npts; ++x)
      if (!H.test(x)) out.set(static_cast<int>(i * npts + x));
  }
  return out;
}

AtomMask FragmentSet::atoms_rank_above(const OrdinalNotation& beta,
                                       const PointSet& H) const {
  AtomMask out;
  const std::size_t npts = fragment_.params.space.size();
  for (std::size_t i = 0; i < nonleaf_.size(); ++i) {
    auto rank = fragment_.params.tree.node_rank(nonleaf_[i]);
    if (*rank <= beta) continue;
    for (std::size_t x = 0; x < npts; ++x)
      if (!H.test(x)) out.set(static_cast<int>(i * npts + x));
  }
  return out;
}

namespace {

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hc, 1u, 8u));
}

// Deterministic parallel sweep: fn(chunk, begin, end) fills slot `chunk`;
// results are merged in chunk order, so the schedule never shows.
template <typename Fn>
void run_chunks(std::size_t n, int jobs, Fn&& fn) {
  int J = std::max(1, std::min<int>(resolve_jobs(jobs), static_cast<int>(n ? n : 1)));
  std::vector<std::thread> threads;
  for (int c = 0; c < J; ++c) {
    std::size_t begin = n * c / J;
    std::size_t end = n * (c + 1) / J;
    threads.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
  for (auto& t : threads) t.join();
}

struct ChunkAccumulator {
  std::vector<std::uint64_t> checks;
  std::vector<std::vector<std::string>> counterexamples;
  explicit ChunkAccumulator(int jobs)
      : checks(static_cast<std::size_t>(std::max(1, jobs + 64))),
        counterexamples(checks.size()) {}
  void merge_into(CampaignResult& result) {
    for (auto c : checks) result.checks += c;
    for (auto& list : counterexamples)
      result.counterexamples.insert(result.counterexamples.end(), list.begin(),
                                    list.end());
    std::sort(result.counterexamples.begin(), result.counterexamples.end());
  }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

constexpr std::size_t kMaxCounterexamples = 25;

void record(std::vector<std::string>& list, std::string what) {
  if (list.size() < kMaxCounterexamples) list.push_back(std::move(what));
}

}  // namespace

CampaignResult campaign_density(const FragmentSet& set, int jobs) {
  Stopwatch watch;
  CampaignResult result;
  result.name = "density";
  const auto& conds = set.conditions();
  const auto& params = set.params();
  result.enumerated = conds.size();
  result.parameters["conditions"] = std::to_string(conds.size());

  ChunkAccumulator acc(resolve_jobs(jobs));
  run_chunks(conds.size(), jobs, [&](int chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      AlphaCondition p = set.unpack(conds[i]);
      for (const NodeAddress& eta : set.nonleaf_nodes()) {
        for (std::size_t x = 0; x < params.space.size(); ++x) {
          ++acc.checks[chunk];
          try {
            AlphaCondition p2 = strengthen_into_dense(params, p, eta, x);
            if (!p2.extends(p)) {
              record(acc.counterexamples[chunk],
                     "strengthening is not an extension at p#" +
                         std::to_string(i) + " " + format_address(eta) + "/" +
                         params.space.point_name(x));
              continue;
            }
            if (!in_dense_set(params, p2, eta, x) ||
                !validate(params, p2, 2 * params.size_cap).ok()) {
              record(acc.counterexamples[chunk],
                     "strengthening failed postconditions at p#" +
                         std::to_string(i));
            }
          } catch (const Error& e) {
            record(acc.counterexamples[chunk],
                   "strengthening threw at p#" + std::to_string(i) + " " +
                       format_address(eta) + "/" + params.space.point_name(x) +
                       ": " + e.what());
          }
        }
      }
    }
  });
  acc.merge_into(result);
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_glb(const FragmentSet& set, int jobs) {
  Stopwatch watch;
  CampaignResult result;
  result.name = "glb";
  const auto& conds = set.conditions();
  const auto& params = set.params();
  result.enumerated = conds.size();
  result.parameters["conditions"] = std::to_string(conds.size());

  const std::size_t n = conds.size();
  // Sampling strides sized for ~2000 deep cross-checks and ~200 searches.
  const std::uint64_t total_pairs = n * (n + 1) / 2;
  const std::uint64_t deep_stride = std::max<std::uint64_t>(1, total_pairs / 2000);
  const std::uint64_t search_stride = std::max<std::uint64_t>(1, total_pairs / 200);

  ChunkAccumulator acc(resolve_jobs(jobs));
  run_chunks(n, jobs, [&](int chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i; j < conds.size(); ++j) {
        ++acc.checks[chunk];
        const bool compat = set.compatible(conds[i], conds[j]);
        const std::uint64_t key = i * 2654435761u + j;
        if (key % deep_stride == 0) {
          // Cross-validate the packed engine against the public operation.
          AlphaCondition a = set.unpack(conds[i]);
          AlphaCondition b = set.unpack(conds[j]);
          auto u = union_glb(params, a, b);
          const bool deep = std::holds_alternative<AlphaCondition>(u);
          if (deep != compat) {
            record(acc.counterexamples[chunk],
                   "packed/unpacked union disagree on pair " + std::to_string(i) +
                       "," + std::to_string(j));
            continue;
          }
          if (deep) {
            const auto& glb = std::get<AlphaCondition>(u);
            if (!glb.extends(a) || !glb.extends(b))
              record(acc.counterexamples[chunk],
                     "union is not below both at pair " + std::to_string(i) + "," +
                         std::to_string(j));
          }
        }
        if (!compat && key % search_stride == 0) {
          // Direct search for a common lower bound the union missed: extend
          // the union mask by up to two more atoms (labels fixed).
          if (set.f_compatible(conds[i].f_id, conds[j].f_id)) {
            AtomMask u = conds[i].mask | conds[j].mask;
            AtomMask forbid =
                set.forbid_of(conds[i].f_id) | set.forbid_of(conds[j].f_id);
            bool found = set.mask_valid(u, forbid);
            for (int b1 = 0; !found && b1 < static_cast<int>(set.atom_count());
                 ++b1) {
              if (u.test(b1)) continue;
              AtomMask u1 = u;
              u1.set(b1);
              if (set.mask_valid(u1, forbid)) found = true;
              for (int b2 = b1 + 1;
                   !found && b2 < static_cast<int>(set.atom_count()); ++b2) {
                if (u1.test(b2)) continue;
                AtomMask u2 = u1;
                u2.set(b2);
                if (set.mask_valid(u2, forbid)) found = true;
              }
            }
            if (found)
              record(acc.counterexamples[chunk],
                     "incompatible pair has a lower bound: " + std::to_string(i) +
                         "," + std::to_string(j));
          }
        }
      }
    }
  });
  acc.merge_into(result);

  // Downward closure of validity: dropping one promise or one label keeps a
  // condition valid. With it, the pair law extends to the whole 2s fragment.
  std::uint64_t mono_checks = 0;
  for (const PackedCondition& c : set.conditions()) {
    AtomMask mask = c.mask;
    mask.for_each_bit([&](int b) {
      AtomMask smaller = mask;
      smaller.reset(b);
      ++mono_checks;
      if (!set.mask_valid(smaller, set.forbid_of(c.f_id)))
        record(result.counterexamples,
               "validity not downward closed at atom " + set.atom_name(b));
    });
    for (std::uint32_t sub : set.f_shrinks(c.f_id)) {
      ++mono_checks;
      if (!set.mask_valid(mask, set.forbid_of(sub)))
        record(result.counterexamples, "validity not downward closed in f");
    }
  }
  result.checks += mono_checks;
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_rank(const FragmentSet& set, const RankMenus& menus,
                             int jobs) {
  Stopwatch watch;
  CampaignResult result;
  result.name = "alpha-rank";
  const auto& conds = set.conditions();
  const auto& params = set.params();
  result.enumerated = conds.size();
  result.parameters["conditions"] = std::to_string(conds.size());

  for (const OrdinalNotation& beta : menus.betas) {
    for (const auto& [locus_name, H] : menus.loci) {
      AtomMask at_least = set.atoms_rank_at_least(beta, H);
      AtomMask above = set.atoms_rank_above(beta, H);
      std::vector<std::uint32_t> low;  // crank(r, H) < beta
      for (std::uint32_t i = 0; i < conds.size(); ++i)
        if (!conds[i].mask.intersects(at_least)) low.push_back(i);

      ChunkAccumulator acc(resolve_jobs(jobs));
      run_chunks(conds.size(), jobs, [&](int chunk, std::size_t begin,
                                         std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          AlphaCondition p = set.unpack(conds[i]);
          ReductResult rr;
          try {
            rr = rank_reduct_single(params, p, beta, H, menus.prep);
          } catch (const Error& e) {
            record(acc.counterexamples[chunk],
                   "reduct failed at p#" + std::to_string(i) + ": " + e.what());
            continue;
          }
          PackedCondition q{conds[i].f_id, set.pack(rr.reduct).mask};
          ++acc.checks[chunk];
          if (q.mask.intersects(above)) {
            record(acc.counterexamples[chunk],
                   "crank(q) exceeds beta at p#" + std::to_string(i));
            continue;
          }
          if (!set.compatible(q, conds[i])) {
            record(acc.counterexamples[chunk],
                   "reduct incompatible with p at p#" + std::to_string(i));
            continue;
          }
          if (q.mask == conds[i].mask && rr.prepared == p) continue;  // q == p
          for (std::uint32_t ri : low) {
            ++acc.checks[chunk];
            if (set.compatible(conds[ri], q) &&
                !set.compatible(conds[ri], conds[i])) {
              record(acc.counterexamples[chunk],
                     "rank property fails: beta=" + format_ordinal(beta) +
                         " H=" + locus_name + " p#" + std::to_string(i) +
                         " r#" + std::to_string(ri));
            }
          }
        }
      });
      acc.merge_into(result);
    }
  }
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_heart(const FragmentSet& set, const HeartParams& hp) {
  Stopwatch watch;
  CampaignResult result;
  result.name = "heart";
  const auto& params = set.params();

  AtomMask sub;
  for (const NodeAddress& node : hp.run_nodes)
    for (std::size_t x = 0; x < params.space.size(); ++x) {
      int atom = set.atom_of(node, x);
      sub.set(atom);
    }

  std::vector<int> sub_atoms;
  sub.for_each_bit([&](int b) { sub_atoms.push_back(b); });

  auto strategy_packed = [&](const PackedCondition& last) {
    AlphaCondition stepped = heart_strategy_step(params, set.unpack(last));
    return set.pack(stepped);
  };

  // Enumerate strategy runs: Player II grows the last Player-I move by at
  // most one sub-universe atom per round; Player I answers with the strategy.
  std::set<AtomMask> finals;
  std::uint64_t runs = 0;
  std::function<void(const PackedCondition&, int)> expand =
      [&](const PackedCondition& last_one, int round) {
        std::vector<PackedCondition> replies;
        replies.push_back(last_one);  // Player II repeats
        for (int b : sub_atoms) {
          if (last_one.mask.test(b)) continue;
          PackedCondition two = last_one;
          two.mask.set(b);
          if (!set.mask_valid(two.mask, set.forbid_of(two.f_id))) continue;
          replies.push_back(two);
        }
        for (const PackedCondition& two : replies) {
          PackedCondition one = strategy_packed(two);
          if (round + 1 >= hp.rounds) {
            ++runs;
            finals.insert(one.mask);
          } else {
            expand(one, round + 1);
          }
        }
      };
  PackedCondition top;  // the greatest element
  expand(top, 0);
  result.enumerated = runs;
  result.parameters["runs"] = std::to_string(runs);
  result.parameters["distinct_final_moves"] = std::to_string(finals.size());

  std::vector<AtomMask> final_list(finals.begin(), finals.end());
  std::uint64_t pre_failed = 0;
  std::uint64_t deep_counter = 0;
  for (std::size_t i = 0; i < final_list.size(); ++i) {
    // Clause-(c) partners of every promise in run i.
    AtomMask partners;
    final_list[i].for_each_bit(
        [&](int b) { partners = partners | set.conflict_of(b); });
    for (std::size_t j = i; j < final_list.size(); ++j) {
      ++result.checks;
      // Linked-cell surrogate: no direct clause-(c) conflicts across runs.
      if (partners.intersects(final_list[j])) {
        ++pre_failed;
        continue;
      }
      AtomMask merged = final_list[i] | final_list[j];
      if (!set.mask_valid(merged, AtomMask())) {
        record(result.counterexamples,
               "merge of compatible strategy runs failed at pair " +
                   std::to_string(i) + "," + std::to_string(j));
        continue;
      }
      // Cross-validate a sample against the public merge operation.
      if (++deep_counter % 997 == 0) {
        MergeOutcome outcome = heart_merge_check(
            params, set.unpack({0, final_list[i]}), set.unpack({0, final_list[j]}));
        if (outcome.status != MergeStatus::kMerged)
          record(result.counterexamples,
                 "packed and public merge disagree at pair " + std::to_string(i) +
                     "," + std::to_string(j));
      }
    }
  }
  result.parameters["precondition_failed_pairs"] = std::to_string(pre_failed);
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_strict_chains(const FragmentSet& set, int length) {
  Stopwatch watch;
  CampaignResult result;
  result.name = "strict-chains";
  const auto& params = set.params();

  // Walk descending chains of strict conditions grown one promise at a time;
  // the finite union of a chain is its last element and must remain a valid
  // strict condition.
  std::function<void(const AlphaCondition&, int)> walk = [&](const AlphaCondition& p,
                                                             int depth) {
    ++result.checks;
    ValidationReport report = validate(params, p, params.size_cap);
    if (!report.ok() || !is_strict(params, p)) {
      record(result.counterexamples,
             "chain union not a strict condition: " + report.summary());
      return;
    }
    if (depth >= length) return;
    for (std::size_t atom = 0; atom < set.atom_count(); ++atom) {
      auto [node, point] = set.atom_pair(static_cast<int>(atom));
      AlphaCondition next = p;
      next.R.insert({node, point});
      if (next.R.size() != p.R.size() + 1) continue;
      if (!validate(params, next, params.size_cap).ok()) continue;
      AlphaCondition strict_next = strictify(params, next);
      if (strict_next.R.size() > params.size_cap) continue;
      if (!validate(params, strict_next, params.size_cap).ok()) continue;
      walk(strict_next, depth + 1);
    }
  };
  walk(AlphaCondition{}, 0);
  result.enumerated = result.checks;
  result.wall_seconds = watch.seconds();
  return result;
}

}  // namespace flab

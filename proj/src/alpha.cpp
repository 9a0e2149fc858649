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

#include "forcelab/alpha.hpp"

#include <algorithm>
#include <sstream>

namespace flab {

namespace {

std::string pair_detail(const ForcingParams& params, const NodeAddress& node,
                        std::size_t point) {
  return format_address(node) + " / " + params.space.point_name(point);
}

}  // namespace

ForcingParams::ForcingParams(OrdinalNotation alpha_in, std::uint32_t limit_width,
                             FiniteSpace space_in, PointSet a, PointSet b,
                             std::uint32_t s, std::uint32_t w)
    : alpha(std::move(alpha_in)),
      tree(alpha, limit_width),
      space(std::move(space_in)),
      A(std::move(a)),
      B(std::move(b)),
      size_cap(s),
      width(w) {
  if (!(OrdinalNotation(1) < alpha))
    fail(ErrorKind::kInvalidArgument, "alpha must exceed 1");
  PointSet both = A;
  both &= B;
  if (!both.empty())
    fail(ErrorKind::kInvalidArgument, "A and B must be disjoint");
  if (s == 0 || s >= w)
    fail(ErrorKind::kInvalidArgument, "need 0 < s < w (regularity slack)");
}

bool AlphaCondition::extends(const AlphaCondition& p) const {
  for (const auto& [leaf, label] : p.f) {
    auto it = f.find(leaf);
    if (it == f.end() || it->second != label) return false;
  }
  return std::includes(R.begin(), R.end(), p.R.begin(), p.R.end());
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << "; ";
    out << "(" << violations[i].clause << ") " << violations[i].detail;
  }
  return out.str();
}

bool is_x_critical(const ForcingParams& params, const AlphaCondition& p,
                   const NodeAddress& eta, std::size_t x) {
  auto rank = params.tree.node_rank(eta);
  if (!rank || cof_class(*rank) != CofClass::kSmallLimit) return false;
  bool gate = false;
  if (!eta.empty() && p.has_pair(eta.parent(), x)) gate = true;
  if (eta.size() == 1 && params.A.test(x)) gate = true;
  if (eta.empty() && params.B.test(x)) gate = true;
  if (!gate) return false;
  for (const auto& [node, point] : p.R) {
    if (point == x && node.size() == eta.size() + 2 && eta.is_prefix_of(node))
      return true;
  }
  return false;
}

std::vector<std::pair<NodeAddress, std::size_t>> critical_pairs(
    const ForcingParams& params, const AlphaCondition& p) {
  std::set<std::pair<NodeAddress, std::size_t>> seen;
  for (const auto& [node, point] : p.R) {
    if (node.size() < 2) continue;
    NodeAddress eta = node.prefix(node.size() - 2);
    if (seen.count({eta, point})) continue;
    if (is_x_critical(params, p, eta, point)) seen.insert({eta, point});
  }
  return {seen.begin(), seen.end()};
}

namespace {

// Clause (f) for one critical pair: some child of eta has no x-promise among
// its own children. Small-limit nodes have exactly limit_width children.
bool has_free_child(const ForcingParams& params, const AlphaCondition& p,
                    const NodeAddress& eta, std::size_t x) {
  for (std::uint32_t i = 0; i < params.tree.limit_width(); ++i) {
    NodeAddress child = eta.child(i);
    bool covered = false;
    for (const auto& [node, point] : p.R) {
      if (point == x && child.is_parent_of(node)) {
        covered = true;
        break;
      }
    }
    if (!covered) return true;
  }
  return false;
}

// Lowest-index child of a small-limit node whose own children carry no
// x-promise. Exists in every valid condition by clause (f).
std::optional<NodeAddress> lowest_free_child(const ForcingParams& params,
                                             const AlphaCondition& p,
                                             const NodeAddress& eta,
                                             std::size_t x) {
  for (std::uint32_t i = 0; i < params.tree.limit_width(); ++i) {
    NodeAddress child = eta.child(i);
    bool covered = false;
    for (const auto& [node, point] : p.R)
      if (point == x && child.is_parent_of(node)) covered = true;
    if (!covered) return child;
  }
  return std::nullopt;
}

}  // namespace

ValidationReport validate(const ForcingParams& params, const AlphaCondition& p,
                          std::optional<std::uint32_t> cap) {
  ValidationReport report;
  const std::uint32_t limit = cap.value_or(params.size_cap);

  for (const auto& [leaf, label] : p.f) {
    auto rank = params.tree.node_rank(leaf);
    if (!rank) {
      report.violations.push_back(
          {"structural", "f-address not in tree: " + format_address(leaf)});
      continue;
    }
    if (!rank->is_zero())
      report.violations.push_back(
          {"structural", "f-address is not a leaf: " + format_address(leaf)});
    if (!params.space.has_subbasic(label))
      report.violations.push_back({"structural", "unknown label: " + label});
  }
  for (const auto& [node, point] : p.R) {
    auto rank = params.tree.node_rank(node);
    if (!rank) {
      report.violations.push_back(
          {"structural", "R-address not in tree: " + format_address(node)});
      continue;
    }
    if (rank->is_zero())
      report.violations.push_back(
          {"structural", "R-address is a leaf: " + format_address(node)});
    if (point >= params.space.size())
      report.violations.push_back({"structural", "point out of range"});
  }
  if (!report.ok()) return report;

  if (p.f.size() > limit)
    report.violations.push_back({"a", "|f| exceeds the size cap"});
  if (p.R.size() > limit)
    report.violations.push_back({"b", "|R| exceeds the size cap"});

  // (c): a promise at eta forbids a same-point promise at a child and a
  // leaf label below eta capturing the point.
  for (const auto& [eta, x] : p.R) {
    for (const auto& [nu, y] : p.R)
      if (x == y && eta.is_parent_of(nu))
        report.violations.push_back(
            {"c", "promise at child of a promised node: " +
                      pair_detail(params, nu, x)});
    for (const auto& [leaf, label] : p.f)
      if (eta.is_parent_of(leaf) && params.space.subbasic(label).test(x))
        report.violations.push_back(
            {"c", "leaf label below " + format_address(eta) + " captures " +
                      params.space.point_name(x)});
  }

  for (const auto& [node, point] : p.R) {
    if (node.empty() && params.B.test(point))
      report.violations.push_back(
          {"d", "top promise on a B-point: " + params.space.point_name(point)});
    if (node.size() == 1 && params.A.test(point))
      report.violations.push_back(
          {"e", "depth-1 promise on an A-point: " + params.space.point_name(point)});
  }

  for (const auto& [eta, x] : critical_pairs(params, p)) {
    if (!has_free_child(params, p, eta, x))
      report.violations.push_back(
          {"f", "criticality violated at " + pair_detail(params, eta, x)});
  }
  return report;
}

bool is_strict(const ForcingParams& params, const AlphaCondition& p) {
  for (const auto& [eta, x] : critical_pairs(params, p)) {
    bool witnessed = false;
    for (const auto& [node, point] : p.R)
      if (point == x && eta.is_parent_of(node)) witnessed = true;
    if (!witnessed) return false;
  }
  return true;
}

std::variant<AlphaCondition, Incompatible> union_glb(const ForcingParams& params,
                                                     const AlphaCondition& p,
                                                     const AlphaCondition& q) {
  AlphaCondition u = p;
  for (const auto& [leaf, label] : q.f) {
    auto [it, inserted] = u.f.emplace(leaf, label);
    if (!inserted && it->second != label)
      return Incompatible{
          {{{"structural", "leaf labels disagree at " + format_address(leaf)}}}};
  }
  u.R.insert(q.R.begin(), q.R.end());
  ValidationReport report = validate(params, u, 2 * params.size_cap);
  if (!report.ok()) return Incompatible{std::move(report)};
  return u;
}

bool in_dense_set(const ForcingParams& params, const AlphaCondition& p,
                  const NodeAddress& eta, std::size_t x) {
  auto rank = params.tree.node_rank(eta);
  if (!rank || rank->is_zero())
    fail(ErrorKind::kInvalidArgument,
         "dense sets are indexed by nonleaf nodes: " + format_address(eta));
  if (p.has_pair(eta, x)) return true;
  if (*rank == OrdinalNotation(1)) {
    for (const auto& [leaf, label] : p.f)
      if (eta.is_parent_of(leaf) && params.space.subbasic(label).test(x))
        return true;
    return false;
  }
  for (const auto& [node, point] : p.R)
    if (point == x && eta.is_parent_of(node)) return true;
  return false;
}

namespace {

// Smallest index whose whole subtree below `eta` is untouched by p. The s < w
// slack guarantees one below w; minting may also step past w at successor
// nodes, whose true index set is unbounded.
NodeAddress fresh_child(const ForcingParams& params, const AlphaCondition& p,
                        const NodeAddress& eta) {
  for (std::uint32_t i = 0;; ++i) {
    NodeAddress child = eta.child(i);
    bool touched = false;
    for (const auto& [node, point] : p.R)
      if (child.is_prefix_of(node)) touched = true;
    for (const auto& [leaf, label] : p.f)
      if (child.is_prefix_of(leaf)) touched = true;
    if (!touched) return child;
  }
}

AlphaCondition with_pair(const AlphaCondition& p, const NodeAddress& node,
                         std::size_t x) {
  AlphaCondition out = p;
  out.R.insert({node, x});
  return out;
}

}  // namespace

AlphaCondition strictify(const ForcingParams& params, const AlphaCondition& p) {
  AlphaCondition out = p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [eta, x] : critical_pairs(params, out)) {
      bool witnessed = false;
      for (const auto& [node, point] : out.R)
        if (point == x && eta.is_parent_of(node)) witnessed = true;
      if (witnessed) continue;
      auto child = lowest_free_child(params, out, eta, x);
      if (!child)
        fail(ErrorKind::kInternal,
             "strict closure found a critical node without a free child");
      out.R.insert({*child, x});
      changed = true;
    }
  }
  return out;
}

AlphaCondition strengthen_into_dense(const ForcingParams& params,
                                     const AlphaCondition& p,
                                     const NodeAddress& eta, std::size_t x) {
  auto rank = params.tree.node_rank(eta);
  if (!rank || rank->is_zero())
    fail(ErrorKind::kInvalidArgument,
         "strengthening target must be a nonleaf node: " + format_address(eta));
  if (x >= params.space.size())
    fail(ErrorKind::kInvalidArgument, "point out of range");
  if (in_dense_set(params, p, eta, x)) return p;

  AlphaCondition work = strictify(params, p);
  if (in_dense_set(params, work, eta, x)) return work;

  auto finish = [&](AlphaCondition out, const char* where) {
    ValidationReport report = validate(params, out, 2 * params.size_cap);
    if (!report.ok())
      fail(ErrorKind::kInternal, std::string("density step produced an invalid "
                                             "condition (") +
                                     where + "): " + report.summary());
    if (!in_dense_set(params, out, eta, x))
      fail(ErrorKind::kInternal,
           std::string("density step missed the dense set (") + where + ")");
    return out;
  };

  // Top node with an A-point: pin it directly.
  if (eta.empty() && params.A.test(x))
    return finish(with_pair(work, eta, x), "top A-case");

  if (cof_class(*rank) == CofClass::kSmallLimit) {
    if (is_x_critical(params, work, eta, x))
      fail(ErrorKind::kInternal,
           "critical node not in the dense set after strict closure");
    // Not critical, so no grandchild promise interferes below some child.
    if ((eta.empty() && params.B.test(x)) ||
        (eta.size() == 1 && params.A.test(x)) ||
        (!eta.empty() && work.has_pair(eta.parent(), x))) {
      auto child = lowest_free_child(params, work, eta, x);
      if (!child)
        fail(ErrorKind::kInternal, "no free child below a non-critical node");
      return finish(with_pair(work, *child, x), "small-limit child case");
    }
    return finish(with_pair(work, eta, x), "small-limit direct case");
  }

  // Successor of a small-limit node: prepare the dense set of the parent
  // first, then spend a fresh successor. The fresh grandchild promise may
  // turn the parent critical; the preparation supplies its clause-(f) slack.
  if (!eta.empty() && params.tree.is_small_limit_node(eta.parent())) {
    work = strengthen_into_dense(params, work, eta.parent(), x);
    if (in_dense_set(params, work, eta, x)) return work;
    NodeAddress nu = fresh_child(params, work, eta);
    return finish(with_pair(work, nu, x), "successor-of-small-limit case");
  }

  // Generic case. Pin eta itself when nothing objects, else spend a fresh
  // successor (a label below rank-1 nodes, a promise elsewhere).
  {
    AlphaCondition direct = with_pair(work, eta, x);
    if (validate(params, direct, 2 * params.size_cap).ok() &&
        in_dense_set(params, direct, eta, x))
      return direct;
  }
  NodeAddress nu = fresh_child(params, work, eta);
  if (*rank == OrdinalNotation(1)) {
    // Lexicographically least label isolating x from the promised points.
    PointSet conflicts(params.space.size());
    for (const auto& [node, point] : work.R)
      if (node == eta) conflicts.set(point);
    for (const auto& [label, extent] : params.space.subbasics()) {
      if (!extent.test(x)) continue;
      PointSet overlap = extent;
      overlap &= conflicts;
      if (!overlap.empty()) continue;
      AlphaCondition out = work;
      out.f[nu] = label;
      return finish(std::move(out), "rank-1 label case");
    }
    fail(ErrorKind::kInvalidArgument,
         "space resolution: no subbasic isolates " + params.space.point_name(x) +
             " from the promised points at " + format_address(eta));
  }
  return finish(with_pair(work, nu, x), "generic successor case");
}

OrdinalNotation crank_single(const ForcingParams& params, const AlphaCondition& p,
                             const PointSet& H) {
  OrdinalNotation best(0);
  for (const auto& [node, point] : p.R) {
    if (H.test(point)) continue;
    auto rank = params.tree.node_rank(node);
    if (!rank) fail(ErrorKind::kInvalidArgument, "condition leaves the tree");
    if (best < *rank) best = *rank;
  }
  return best;
}

ReductResult rank_reduct_single(const ForcingParams& params,
                                const AlphaCondition& p,
                                const OrdinalNotation& beta, const PointSet& H,
                                const ReductPrep& prep) {
  AlphaCondition prepared = p;

  if (prep.limit_gap) {
    // For a promise at a limit node above beta, every child of rank below
    // beta gets a grandchild witness on an untouched successor.
    for (const auto& [eta, x] : p.R) {
      auto rank = params.tree.node_rank(eta);
      if (!rank) fail(ErrorKind::kInvalidArgument, "condition leaves the tree");
      CofClass cls = cof_class(*rank);
      if (cls != CofClass::kSmallLimit && cls != CofClass::kLargeLimit) continue;
      if (!(beta < *rank)) continue;
      for (std::uint32_t i = 0; i < params.tree.limit_width(); ++i) {
        NodeAddress nu = eta.child(i);
        auto nu_rank = params.tree.node_rank(nu);
        if (!nu_rank || !(*nu_rank < beta)) continue;
        bool witnessed = false;
        for (const auto& [node, point] : prepared.R)
          if (point == x && nu.is_parent_of(node)) witnessed = true;
        if (!witnessed)
          prepared.R.insert({fresh_child(params, prepared, nu), x});
      }
    }
  }

  if (prep.strict_below_pred) {
    // Criticality driven by a predecessor promise gets its child witness, as
    // in the strict closure.
    for (const auto& [eta, x] : critical_pairs(params, prepared)) {
      if (eta.empty() || !prepared.has_pair(eta.parent(), x)) continue;
      bool witnessed = false;
      for (const auto& [node, point] : prepared.R)
        if (point == x && eta.is_parent_of(node)) witnessed = true;
      if (witnessed) continue;
      auto child = lowest_free_child(params, prepared, eta, x);
      if (!child)
        fail(ErrorKind::kInternal, "reduct preparation lost clause (f)");
      prepared.R.insert({*child, x});
    }
  }

  if (prep.low_child_plant && cof_class(params.alpha) == CofClass::kSuccessor &&
      cof_class(params.alpha.pred()) == CofClass::kSmallLimit) {
    // Depth-1 nodes are small limits. Where a grandchild promise exists and
    // some low-rank child is still free, pin such a child so that any cheap
    // competitor must collide with the reduct.
    std::set<std::pair<NodeAddress, std::size_t>> targets;
    for (const auto& [node, x] : p.R)
      if (node.size() == 3) targets.insert({node.prefix(1), x});
    for (const auto& [eta, x] : targets) {
      if (prepared.has_pair(eta, x)) continue;
      bool has_low_witness = false;
      std::optional<NodeAddress> plant;
      for (std::uint32_t i = 0; i < params.tree.limit_width(); ++i) {
        NodeAddress child = eta.child(i);
        auto child_rank = params.tree.node_rank(child);
        if (!child_rank || !(*child_rank <= beta)) continue;
        bool covered = false;
        for (const auto& [node, point] : prepared.R)
          if (point == x && child.is_parent_of(node)) covered = true;
        if (!covered) {
          has_low_witness = true;
          if (!plant) plant = child;
        }
      }
      if (has_low_witness && plant) prepared.R.insert({*plant, x});
    }
  }

  ValidationReport report = validate(params, prepared, 2 * params.size_cap);
  if (!report.ok())
    fail(ErrorKind::kLimit, "reduct preparation overflow or invalid: " +
                                report.summary());

  AlphaCondition reduct;
  reduct.f = prepared.f;
  for (const auto& [node, point] : prepared.R) {
    auto rank = params.tree.node_rank(node);
    if (H.test(point) || *rank <= beta) reduct.R.insert({node, point});
  }
  return {std::move(prepared), std::move(reduct)};
}

AlphaCondition heart_strategy_step(const ForcingParams& params,
                                   const AlphaCondition& last) {
  AlphaCondition out = strictify(params, last);
  // Second strategy clause: a grandchild promise below a small-limit node
  // with no child promise pins the node or its predecessor.
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<NodeAddress, std::size_t>> targets;
    for (const auto& [node, x] : out.R) {
      if (node.size() < 2) continue;
      NodeAddress eta = node.prefix(node.size() - 2);
      if (params.tree.is_small_limit_node(eta)) targets.insert({eta, x});
    }
    for (const auto& [eta, x] : targets) {
      bool child_promise = false;
      for (const auto& [node, point] : out.R)
        if (point == x && eta.is_parent_of(node)) child_promise = true;
      if (child_promise) continue;
      if (out.has_pair(eta, x)) continue;
      if (!eta.empty() && out.has_pair(eta.parent(), x)) continue;
      // Criticality was discharged by the strict closure, so pinning eta
      // itself is safe here.
      out.R.insert({eta, x});
      changed = true;
    }
    if (changed) out = strictify(params, out);
  }
  ValidationReport report = validate(params, out, 2 * params.size_cap);
  if (!report.ok())
    fail(ErrorKind::kLimit,
         "strategy step overflow or invalid: " + report.summary());
  return out;
}

MergeOutcome heart_merge_check(const ForcingParams& params,
                               const AlphaCondition& final_move_1,
                               const AlphaCondition& final_move_2) {
  // Linked-cell surrogate: leafwise label compatibility and no direct (c)
  // conflicts across the two moves.
  for (const auto& [leaf, label] : final_move_1.f) {
    auto it = final_move_2.f.find(leaf);
    if (it != final_move_2.f.end() && it->second != label)
      return {MergeStatus::kPreconditionFailed, {}, {}};
  }
  auto cross_conflict = [&](const AlphaCondition& a, const AlphaCondition& b) {
    for (const auto& [eta, x] : a.R) {
      for (const auto& [nu, y] : b.R)
        if (x == y && (eta.is_parent_of(nu) || nu.is_parent_of(eta))) return true;
      for (const auto& [leaf, label] : b.f)
        if (eta.is_parent_of(leaf) && params.space.subbasic(label).test(x))
          return true;
    }
    return false;
  };
  if (cross_conflict(final_move_1, final_move_2) ||
      cross_conflict(final_move_2, final_move_1))
    return {MergeStatus::kPreconditionFailed, {}, {}};

  AlphaCondition t = final_move_1;
  for (const auto& [leaf, label] : final_move_2.f) t.f.emplace(leaf, label);
  t.R.insert(final_move_2.R.begin(), final_move_2.R.end());
  ValidationReport report = validate(params, t, 2 * params.size_cap);
  if (!report.ok()) return {MergeStatus::kConflict, {}, std::move(report)};
  return {MergeStatus::kMerged, std::move(t), {}};
}

}  // namespace flab

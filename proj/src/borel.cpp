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

#include "forcelab/borel.hpp"

#include <algorithm>
#include <set>

namespace flab {

const BorelNode& BorelCode::node_at(const NodeAddress& addr) const {
  const BorelNode* node = &root_;
  for (std::size_t i = 0; i < addr.size(); ++i) {
    if (addr[i] >= node->children.size())
      fail(ErrorKind::kInvalidArgument,
           "address not in code tree: " + format_address(addr));
    node = &node->children[addr[i]];
  }
  return *node;
}

bool BorelCode::contains(const NodeAddress& addr) const {
  const BorelNode* node = &root_;
  for (std::size_t i = 0; i < addr.size(); ++i) {
    if (addr[i] >= node->children.size()) return false;
    node = &node->children[addr[i]];
  }
  return true;
}

std::size_t BorelCode::rank_of(const BorelNode& node) {
  std::size_t rank = 0;
  for (const BorelNode& child : node.children)
    rank = std::max(rank, rank_of(child) + 1);
  return rank;
}

std::string to_string(const CodeClass& c) {
  return (c.polarity == Polarity::kSigma ? "Sigma_" : "Pi_") +
         format_ordinal(c.level);
}

static PointSet interpret_node(const BorelNode& node, const FiniteSpace& space) {
  if (node.is_leaf()) return space.subbasic(node.label);
  PointSet out = space.full_set();
  for (const BorelNode& child : node.children) {
    PointSet piece = interpret_node(child, space).complement();
    out &= piece;
  }
  return out;
}

PointSet interpret(const BorelCode& code, const FiniteSpace& space,
                   const NodeAddress& node) {
  return interpret_node(code.node_at(node), space);
}

CodeClass code_class(const BorelCode& code) {
  const BorelNode& root = code.root();
  if (root.is_leaf()) return {Polarity::kPi, OrdinalNotation(0)};
  std::size_t rank = code.tree_rank();
  if (root.children.size() == 1)
    return {Polarity::kSigma, OrdinalNotation(static_cast<std::uint64_t>(rank - 1))};
  return {Polarity::kPi, OrdinalNotation(static_cast<std::uint64_t>(rank))};
}

std::size_t exact_level_oracle(const FiniteSpace& space, const PointSet& target) {
  if (!target.is_subset_of(space.full_set()))
    fail(ErrorKind::kInvalidArgument, "oracle target must be a subset of the space");

  // Stage 1: unions of finite intersections of subbasics. Close the subbasis
  // (plus the whole space, the empty intersection) under pairwise meets, then
  // under pairwise joins.
  auto close_under = [](std::set<PointSet>& family, bool meet) {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<PointSet> snapshot(family.begin(), family.end());
      for (std::size_t i = 0; i < snapshot.size(); ++i) {
        for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
          PointSet combined = snapshot[i];
          if (meet)
            combined &= snapshot[j];
          else
            combined |= snapshot[j];
          if (family.insert(combined).second) grew = true;
        }
      }
    }
  };

  std::set<PointSet> stage;
  stage.insert(space.full_set());
  for (const auto& [label, set] : space.subbasics()) stage.insert(set);
  close_under(stage, /*meet=*/true);
  stage.insert(space.empty_set());  // the empty union
  close_under(stage, /*meet=*/false);

  const PointSet co_target = [&] {
    PointSet out = target;
    return out.complement();
  }();

  for (std::size_t level = 1;; ++level) {
    if (stage.count(target) && stage.count(co_target)) return level;
    // Stage n+1: unions over stage-n sets and their complements.
    std::set<PointSet> next = stage;
    for (const PointSet& s : stage) next.insert(s.complement());
    close_under(next, /*meet=*/false);
    if (next == stage)
      fail(ErrorKind::kInternal,
           "saturation reached a fixpoint without capturing the target");
    stage = std::move(next);
  }
}

}  // namespace flab

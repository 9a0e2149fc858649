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

#ifndef FORCELAB_WF_HPP_
#define FORCELAB_WF_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forcelab/address.hpp"
#include "forcelab/borel.hpp"
#include "forcelab/ordinal.hpp"
#include "forcelab/space.hpp"

namespace flab {

// The finite address grid: entries below b, length at most d.
struct GridSpec {
  std::uint32_t branching = 2;
  std::uint32_t depth = 2;

  std::vector<NodeAddress> all_nodes() const;
  std::size_t node_count() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Syntax `grid(b=2,d=2)`.
GridSpec parse_grid_spec(const std::string& text);
std::string format_grid_spec(const GridSpec& grid);

// A membership set over the grid. It is a tree exactly when prefix-closed;
// the empty set counts as the empty tree of rank 0.
struct GridTree {
  GridSpec grid;
  std::uint64_t membership = 0;  // bit i = grid.all_nodes()[i] present

  bool contains(const NodeAddress& addr) const;
  std::vector<NodeAddress> members() const;
  bool is_tree() const;
};

GridTree grid_tree_from(const GridSpec& grid, const std::vector<NodeAddress>& nodes);

// Rank of the root under the standard recursion; the empty tree has rank 0.
// Requires a prefix-closed membership set.
OrdinalNotation wf_rank(const GridTree& tree);

// Prefix-closed and of rank below alpha.
bool wf_membership(const GridTree& tree, const OrdinalNotation& alpha);

// The displayed membership recursion evaluated over the finite rank menu,
// relative to the subtree above eta: that part must be a tree (the empty
// part counts) and some beta below alpha bounds every present branch.
// Agrees with wf_membership applied to the subtree above eta.
bool recursion_membership(const GridTree& tree, const OrdinalNotation& alpha,
                          const NodeAddress& eta);

// The class table: (Sigma, 2a) for kappa*a, (Pi, 2a+1) for kappa*a + b with
// countable b > 0 (the a = 0 row covers bounded-rank trees). Zero is
// rejected; 2a is the ordinal double of the kappa coefficient.
CodeClass claimed_class(const OrdinalNotation& alpha);

struct WfCode {
  BorelCode code;
  FiniteSpace space;  // all membership sets, subbasics = the literals used
};

// Borel code for { T : recursion_membership(T, alpha, eta) } over the space
// of all membership sets, assembled by structural recursion: the tree screen
// plus the rank recursion, with kappa coefficients unfolding into union
// layers over the finite beta menu. The emitted shape matches claimed_class.
WfCode build_wf_code(const OrdinalNotation& alpha, const GridSpec& grid,
                     const NodeAddress& eta = NodeAddress());

// Point id of a membership set inside the space built by build_wf_code.
std::string wf_point_name(std::uint64_t membership);

}  // namespace flab

#endif  // FORCELAB_WF_HPP_

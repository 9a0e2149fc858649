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

#ifndef FORCELAB_TEMPLATE_TREE_HPP_
#define FORCELAB_TEMPLATE_TREE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "forcelab/address.hpp"
#include "forcelab/ordinal.hpp"

namespace flab {

// Lazy navigator for the canonical template tree of a given root ordinal.
// Nothing is materialized: every query descends from the root consuming
// address entries. Successor-rank nodes accept any child index (the true
// index set is unbounded); limit-rank nodes expose exactly `limit_width`
// children, child i descending to fundamental_sequence(rank, i) + 4. The
// node keeps its symbolic limit rank; the identity
// rank(node) = sup(child ranks) + 1 holds only in the untruncated tree.
class TemplateTree {
 public:
  TemplateTree(OrdinalNotation alpha, std::uint32_t limit_width)
      : alpha_(std::move(alpha)), limit_width_(limit_width) {
    if (limit_width_ < 2)
      fail(ErrorKind::kInvalidArgument, "limit_width must be at least 2");
  }

  const OrdinalNotation& alpha() const { return alpha_; }
  std::uint32_t limit_width() const { return limit_width_; }

  // Symbolic rank of the addressed node, or nullopt when the address leaves
  // the tree.
  std::optional<OrdinalNotation> node_rank(const NodeAddress& addr) const;

  bool contains(const NodeAddress& addr) const { return node_rank(addr).has_value(); }
  // Both require the address to be in the tree.
  bool is_leaf(const NodeAddress& addr) const;
  bool is_small_limit_node(const NodeAddress& addr) const;

  // Child addresses: indices 0..window-1 at successor-rank nodes, exactly
  // 0..limit_width-1 at limit-rank nodes. Requires a nonleaf address.
  std::vector<NodeAddress> children(const NodeAddress& addr,
                                    std::uint32_t window) const;

  // The locality property of small-limit neighborhoods: the sets {pred},
  // {node}, succ, succ^2, succ^3 of each input plus the leaves are pairwise
  // disjoint, except possibly pred(a) == pred(b). Requires two distinct
  // small-limit addresses.
  bool neighborhood_disjointness_check(const NodeAddress& a,
                                       const NodeAddress& b) const;

 private:
  OrdinalNotation alpha_;
  std::uint32_t limit_width_;
};

// Tree spec syntax `Talpha(<ordinal>, c=<n>)`.
TemplateTree parse_tree_spec(const std::string& text);
std::string format_tree_spec(const TemplateTree& tree);

}  // namespace flab

#endif  // FORCELAB_TEMPLATE_TREE_HPP_

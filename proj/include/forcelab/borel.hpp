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

#ifndef FORCELAB_BOREL_HPP_
#define FORCELAB_BOREL_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forcelab/address.hpp"
#include "forcelab/ordinal.hpp"
#include "forcelab/space.hpp"

namespace flab {

// Finite well-founded code tree. Internal nodes denote the intersection of
// the complements of their children; leaves denote a labeled subbasic piece.
struct BorelNode {
  std::vector<BorelNode> children;
  std::string label;  // leaves only

  bool is_leaf() const { return children.empty(); }
};

class BorelCode {
 public:
  BorelCode() = default;
  explicit BorelCode(BorelNode root) : root_(std::move(root)) {}

  const BorelNode& root() const { return root_; }
  // Node lookup by address; fails when the address leaves the code tree.
  const BorelNode& node_at(const NodeAddress& addr) const;
  bool contains(const NodeAddress& addr) const;

  // Well-founded rank of the code tree (leaves rank 0).
  std::size_t tree_rank() const { return rank_of(root_); }
  static std::size_t rank_of(const BorelNode& node);

 private:
  BorelNode root_;
};

enum class Polarity { kSigma, kPi };

struct CodeClass {
  Polarity polarity;
  OrdinalNotation level;
  friend bool operator==(const CodeClass&, const CodeClass&) = default;
};

std::string to_string(const CodeClass& c);

// The displayed interpretation recursion: leaves evaluate to the labeled
// subbasic within the space, internal nodes to the intersection over their
// children of the complements of the children's interpretations.
PointSet interpret(const BorelCode& code, const FiniteSpace& space,
                   const NodeAddress& node = NodeAddress());

// Syntactic class of a code. A bare leaf is the clopen sentinel (Pi, 0).
// A multi-child root of tree rank r certifies Pi at level r. A single-child
// root is a negation wrapper: it certifies Sigma at the child's level, the
// code's tree rank minus one.
CodeClass code_class(const BorelCode& code);

// Least n >= 1 such that both the target and its complement appear in the
// n-th stage of the cumulative saturation: stage 1 is all unions of finite
// intersections of subbasics (the relative opens); stage n+1 adds all unions
// over stage-n sets and their complements. The finite lattice forces a
// fixpoint, and both polarities are reachable there.
std::size_t exact_level_oracle(const FiniteSpace& space, const PointSet& target);

}  // namespace flab

#endif  // FORCELAB_BOREL_HPP_

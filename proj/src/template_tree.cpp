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

#include "forcelab/template_tree.hpp"

#include <algorithm>
#include <sstream>

namespace flab {

std::optional<OrdinalNotation> TemplateTree::node_rank(const NodeAddress& addr) const {
  OrdinalNotation rank = alpha_;
  for (std::size_t i = 0; i < addr.size(); ++i) {
    switch (cof_class(rank)) {
      case CofClass::kZero:
        return std::nullopt;  // leaves have no children
      case CofClass::kSuccessor:
        rank = rank.pred();  // any index is a valid child
        break;
      case CofClass::kSmallLimit:
      case CofClass::kLargeLimit:
        if (addr[i] >= limit_width_) return std::nullopt;
        rank = fundamental_sequence(rank, addr[i]).plus(4);
        break;
    }
  }
  return rank;
}

bool TemplateTree::is_leaf(const NodeAddress& addr) const {
  auto rank = node_rank(addr);
  if (!rank)
    fail(ErrorKind::kInvalidArgument, "address not in tree: " + format_address(addr));
  return rank->is_zero();
}

bool TemplateTree::is_small_limit_node(const NodeAddress& addr) const {
  auto rank = node_rank(addr);
  if (!rank)
    fail(ErrorKind::kInvalidArgument, "address not in tree: " + format_address(addr));
  return cof_class(*rank) == CofClass::kSmallLimit;
}

std::vector<NodeAddress> TemplateTree::children(const NodeAddress& addr,
                                                std::uint32_t window) const {
  auto rank = node_rank(addr);
  if (!rank)
    fail(ErrorKind::kInvalidArgument, "address not in tree: " + format_address(addr));
  std::uint32_t count = 0;
  switch (cof_class(*rank)) {
    case CofClass::kZero:
      fail(ErrorKind::kInvalidArgument,
           "leaf node has no children: " + format_address(addr));
    case CofClass::kSuccessor:
      count = window;
      break;
    case CofClass::kSmallLimit:
    case CofClass::kLargeLimit:
      count = limit_width_;
      break;
  }
  std::vector<NodeAddress> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(addr.child(i));
  return out;
}

namespace {

// succ^k(base) viewed symbolically: all tree extensions of `base` by exactly
// `depth` entries. `depth` 0 is the singleton {base}.
struct LevelSet {
  NodeAddress base;
  std::size_t depth;
};

}  // namespace

// Does the subtree below `base` reach relative depth `depth`? Every node of
// nonzero rank has a child (index 0), so we walk the cheapest descent and
// also the widest, since limit children have increasing ranks.
static bool reaches_depth(const TemplateTree& tree, const NodeAddress& base,
                          std::size_t depth) {
  if (depth == 0) return tree.contains(base);
  auto rank = tree.node_rank(base);
  if (!rank || rank->is_zero()) return false;
  // Try each child shape; at successor nodes all children have equal rank.
  if (cof_class(*rank) == CofClass::kSuccessor)
    return reaches_depth(tree, base.child(0), depth - 1);
  for (std::uint32_t i = tree.limit_width(); i-- > 0;)
    if (reaches_depth(tree, base.child(i), depth - 1)) return true;
  return false;
}

static bool sets_intersect(const TemplateTree& tree, const LevelSet& s,
                           const LevelSet& t) {
  const std::size_t ds = s.base.size() + s.depth;
  const std::size_t dt = t.base.size() + t.depth;
  if (ds != dt) return false;
  const LevelSet& shallow = s.base.size() <= t.base.size() ? s : t;
  const LevelSet& deep = s.base.size() <= t.base.size() ? t : s;
  if (!shallow.base.is_prefix_of(deep.base)) return false;
  // Any witness extends the deeper base; the shallower set is then automatic.
  return reaches_depth(tree, deep.base, deep.depth);
}

// Can succ^depth(base) contain a leaf? Tracks the reachable rank set level
// by level; at successor nodes all children share one rank.
static bool level_contains_leaf(const TemplateTree& tree, const NodeAddress& base,
                                std::size_t depth) {
  auto rank = tree.node_rank(base);
  if (!rank) return false;
  std::vector<OrdinalNotation> ranks = {*rank};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<OrdinalNotation> next;
    for (const OrdinalNotation& r : ranks) {
      switch (cof_class(r)) {
        case CofClass::kZero:
          break;
        case CofClass::kSuccessor:
          next.push_back(r.pred());
          break;
        case CofClass::kSmallLimit:
        case CofClass::kLargeLimit: {
          OrdinalNotation inner = r;
          for (std::uint32_t i = 0; i < tree.limit_width(); ++i)
            next.push_back(fundamental_sequence(inner, i).plus(4));
          break;
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    ranks = std::move(next);
    if (ranks.empty()) return false;
  }
  return std::any_of(ranks.begin(), ranks.end(),
                     [](const OrdinalNotation& r) { return r.is_zero(); });
}

bool TemplateTree::neighborhood_disjointness_check(const NodeAddress& a,
                                                   const NodeAddress& b) const {
  if (a == b)
    fail(ErrorKind::kInvalidArgument,
         "neighborhood check requires two distinct nodes");
  if (!is_small_limit_node(a) || !is_small_limit_node(b))
    fail(ErrorKind::kInvalidArgument,
         "neighborhood check requires small-limit nodes");

  auto family = [&](const NodeAddress& n) {
    std::vector<LevelSet> sets;
    if (!n.empty()) sets.push_back({n.parent(), 0});
    sets.push_back({n, 0});
    sets.push_back({n, 1});
    sets.push_back({n, 2});
    sets.push_back({n, 3});
    return sets;
  };
  std::vector<LevelSet> fa = family(a);
  std::vector<LevelSet> fb = family(b);

  const bool a_has_pred = !a.empty();
  const bool b_has_pred = !b.empty();
  for (std::size_t i = 0; i < fa.size(); ++i) {
    for (std::size_t j = 0; j < fb.size(); ++j) {
      const bool pred_pair =
          a_has_pred && b_has_pred && i == 0 && j == 0 && a.parent() == b.parent();
      if (pred_pair) continue;  // the one allowed coincidence
      if (sets_intersect(*this, fa[i], fb[j])) return false;
    }
  }
  // None of the ten node sets may contain a leaf.
  for (const auto& sets : {fa, fb})
    for (const LevelSet& s : sets)
      if (level_contains_leaf(*this, s.base, s.depth)) return false;
  return true;
}

TemplateTree parse_tree_spec(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const std::string head = "Talpha(";
  if (s.rfind(head, 0) != 0 || s.back() != ')')
    fail(ErrorKind::kInvalidArgument,
         "tree spec must look like Talpha(<ordinal>, c=<n>): " + text);
  std::string inner = s.substr(head.size(), s.size() - head.size() - 1);
  auto comma = inner.rfind(",c=");
  if (comma == std::string::npos)
    fail(ErrorKind::kInvalidArgument, "tree spec missing c=<n>: " + text);
  OrdinalNotation alpha = parse_ordinal(inner.substr(0, comma));
  std::uint64_t c = std::stoull(inner.substr(comma + 3));
  return TemplateTree(alpha, static_cast<std::uint32_t>(c));
}

std::string format_tree_spec(const TemplateTree& tree) {
  std::ostringstream out;
  out << "Talpha(" << format_ordinal(tree.alpha()) << ", c=" << tree.limit_width()
      << ")";
  return out.str();
}

}  // namespace flab

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

#include "forcelab/space.hpp"

#include <bit>

namespace flab {

std::size_t PointSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool PointSet::empty() const {
  for (std::uint64_t w : words_)
    if (w) return false;
  return true;
}

PointSet& PointSet::operator&=(const PointSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

PointSet& PointSet::operator|=(const PointSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

PointSet PointSet::complement() const {
  PointSet out = *this;
  for (auto& w : out.words_) w = ~w;
  // mask tail bits beyond the universe
  const std::size_t rem = size_ % 64;
  if (rem != 0 && !out.words_.empty())
    out.words_.back() &= (1ULL << rem) - 1;
  return out;
}

bool PointSet::is_subset_of(const PointSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::vector<std::size_t> PointSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         std::map<std::string, std::vector<std::string>> subbasics)
    : points_(std::move(points)) {
  if (points_.empty())
    fail(ErrorKind::kInvalidArgument, "a space needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second)
      fail(ErrorKind::kInvalidArgument, "duplicate point id: " + points_[i]);
  }
  if (subbasics.empty())
    fail(ErrorKind::kInvalidArgument, "a space needs a nonempty subbasis");
  for (auto& [label, names] : subbasics) {
    PointSet set(points_.size());
    for (const std::string& name : names) set.set(point_index(name));
    subbasics_.emplace(label, std::move(set));
  }
}

std::size_t FiniteSpace::point_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    fail(ErrorKind::kInvalidArgument, "unknown point id: " + name);
  return it->second;
}

const PointSet& FiniteSpace::subbasic(const std::string& label) const {
  auto it = subbasics_.find(label);
  if (it == subbasics_.end())
    fail(ErrorKind::kInvalidArgument, "unknown subbasic label: " + label);
  return it->second;
}

PointSet FiniteSpace::set_of(const std::vector<std::string>& names) const {
  PointSet out(points_.size());
  for (const std::string& name : names) out.set(point_index(name));
  return out;
}

FiniteSpace make_cylinder_space(std::size_t n) {
  std::vector<std::string> points;
  for (std::size_t v = 0; v < (1ULL << n); ++v) {
    std::string bits;
    for (std::size_t i = 0; i < n; ++i)
      bits.push_back((v >> (n - 1 - i)) & 1 ? '1' : '0');
    points.push_back(bits);
  }
  std::map<std::string, std::vector<std::string>> subbasics;
  subbasics[""] = points;
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t v = 0; v < (1ULL << len); ++v) {
      std::string prefix;
      for (std::size_t i = 0; i < len; ++i)
        prefix.push_back((v >> (len - 1 - i)) & 1 ? '1' : '0');
      std::vector<std::string> extent;
      for (const std::string& p : points)
        if (p.compare(0, len, prefix) == 0) extent.push_back(p);
      subbasics[prefix] = extent;
    }
  }
  return FiniteSpace(std::move(points), std::move(subbasics));
}

}  // namespace flab

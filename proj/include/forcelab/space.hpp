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

#ifndef FORCELAB_SPACE_HPP_
#define FORCELAB_SPACE_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forcelab/error.hpp"

namespace flab {

// Subset of a finite space's points, as a bitset indexed by point position.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe_size)
      : size_(universe_size), words_((universe_size + 63) / 64, 0) {}

  std::size_t universe_size() const { return size_; }
  bool test(std::size_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1ULL;
  }
  void set(std::size_t i) { words_[i / 64] |= 1ULL << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(1ULL << (i % 64)); }
  std::size_t count() const;
  bool empty() const;

  PointSet& operator&=(const PointSet& o);
  PointSet& operator|=(const PointSet& o);
  PointSet complement() const;
  bool is_subset_of(const PointSet& o) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;
  friend bool operator<(const PointSet& a, const PointSet& b) {
    return a.words_ < b.words_;
  }

  std::vector<std::size_t> members() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// A finite space presented by points and a labeled subbasis. Each subbasic
// generator is a labeled point set standing for a basic clopen piece; every
// point is decided by every generator (in or out).
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> points,
              std::map<std::string, std::vector<std::string>> subbasics);

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point_name(std::size_t i) const { return points_[i]; }
  std::size_t point_index(const std::string& name) const;
  bool has_point(const std::string& name) const {
    return index_.count(name) != 0;
  }

  const std::map<std::string, PointSet>& subbasics() const { return subbasics_; }
  bool has_subbasic(const std::string& label) const {
    return subbasics_.count(label) != 0;
  }
  const PointSet& subbasic(const std::string& label) const;

  PointSet empty_set() const { return PointSet(points_.size()); }
  PointSet full_set() const { return empty_set().complement(); }
  PointSet set_of(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> points_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, PointSet> subbasics_;
};

// The standard test space: all length-n bit strings with cylinder generators
// for every prefix up to length n (the empty prefix included).
FiniteSpace make_cylinder_space(std::size_t n);

}  // namespace flab

#endif  // FORCELAB_SPACE_HPP_

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

#ifndef FORCELAB_ADDRESS_HPP_
#define FORCELAB_ADDRESS_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "forcelab/error.hpp"

namespace flab {

// Tree node address: a finite sequence of child indices, root = empty.
// Inline storage; desk-scale trees never exceed this depth.
class NodeAddress {
 public:
  static constexpr std::size_t kMaxDepth = 15;

  NodeAddress() = default;
  NodeAddress(std::initializer_list<std::uint32_t> entries) {
    for (std::uint32_t e : entries) push_back(e);
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  std::uint32_t back() const { return entries_[size_ - 1]; }

  void push_back(std::uint32_t index) {
    if (size_ >= kMaxDepth)
      fail(ErrorKind::kUnsupported, "node address deeper than supported");
    entries_[size_++] = index;
  }
  NodeAddress child(std::uint32_t index) const {
    NodeAddress out = *this;
    out.push_back(index);
    return out;
  }
  // Immediate predecessor; requires a non-root address.
  NodeAddress parent() const {
    if (empty()) fail(ErrorKind::kInvalidArgument, "root has no predecessor");
    NodeAddress out = *this;
    out.size_ -= 1;
    return out;
  }
  NodeAddress prefix(std::size_t length) const {
    NodeAddress out = *this;
    out.size_ = static_cast<std::uint8_t>(length);
    return out;
  }
  bool is_prefix_of(const NodeAddress& other) const {
    if (size_ > other.size_) return false;
    for (std::size_t i = 0; i < size_; ++i)
      if (entries_[i] != other.entries_[i]) return false;
    return true;
  }
  // other == this + exactly one entry.
  bool is_parent_of(const NodeAddress& other) const {
    return size_ + 1 == other.size_ && is_prefix_of(other);
  }

  friend std::strong_ordering operator<=>(const NodeAddress& a,
                                          const NodeAddress& b) {
    for (std::size_t i = 0; i < std::min<std::size_t>(a.size_, b.size_); ++i)
      if (auto c = a.entries_[i] <=> b.entries_[i]; c != 0) return c;
    return a.size_ <=> b.size_;
  }
  friend bool operator==(const NodeAddress& a, const NodeAddress& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (a.entries_[i] != b.entries_[i]) return false;
    return true;
  }

 private:
  std::array<std::uint32_t, kMaxDepth> entries_{};
  std::uint8_t size_ = 0;
};

// Syntax `[i0,i1,...]`, root `[]`.
NodeAddress parse_address(const std::string& text);
std::string format_address(const NodeAddress& addr);

}  // namespace flab

#endif  // FORCELAB_ADDRESS_HPP_

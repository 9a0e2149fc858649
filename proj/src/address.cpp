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

#include "forcelab/address.hpp"

#include <cctype>
#include <sstream>

namespace flab {

NodeAddress parse_address(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    fail(ErrorKind::kInvalidArgument, "address must look like [i0,i1,...]: " + text);
  NodeAddress addr;
  std::size_t pos = 1;
  if (s == "[]") return addr;
  while (pos < s.size() - 1) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
      fail(ErrorKind::kInvalidArgument, "bad index in address: " + text);
    std::uint64_t value = 0;
    while (pos < s.size() - 1 && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      value = value * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      ++pos;
    }
    addr.push_back(static_cast<std::uint32_t>(value));
    if (pos < s.size() - 1) {
      if (s[pos] != ',')
        fail(ErrorKind::kInvalidArgument, "expected ',' in address: " + text);
      ++pos;
    }
  }
  return addr;
}

std::string format_address(const NodeAddress& addr) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < addr.size(); ++i) {
    if (i > 0) out << ",";
    out << addr[i];
  }
  out << "]";
  return out.str();
}

}  // namespace flab

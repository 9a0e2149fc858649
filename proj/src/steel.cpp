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

#include "forcelab/steel.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

namespace flab {

ValidationReport steel_validate(const OrdinalNotation& alpha,
                                const SteelCondition& p, OrderingReading reading) {
  ValidationReport report;
  if (p.t.empty())
    report.violations.push_back({"structural", "the tree must contain the root"});
  for (const NodeAddress& n : p.t) {
    if (!n.empty() && !p.t.count(n.parent()))
      report.violations.push_back(
          {"structural", "tree not prefix-closed at " + format_address(n)});
    const bool f = p.firm(n), pr = p.promised(n);
    if (f == pr)
      report.violations.push_back(
          {"structural",
           "node must carry exactly one tag: " + format_address(n)});
  }
  for (const auto& [n, tag] : p.rho) {
    if (!p.t.count(n))
      report.violations.push_back({"structural", "firm tag off the tree"});
    if (!(tag < alpha))
      report.violations.push_back({"structural", "tag reaches alpha"});
  }
  for (const auto& [n, tag] : p.rho_bar) {
    if (!p.t.count(n))
      report.violations.push_back({"structural", "promise tag off the tree"});
    if (!(tag < alpha))
      report.violations.push_back({"structural", "tag reaches alpha"});
  }
  if (!report.ok()) return report;

  for (const NodeAddress& nu : p.t) {
    if (nu.empty()) continue;
    NodeAddress eta = nu.parent();
    if (p.firm(nu) && p.firm(eta)) {
      if (!(p.rho.at(nu) < p.rho.at(eta)))
        report.violations.push_back(
            {"decrease", "firm tags fail to decrease at " + format_address(nu)});
    } else if (p.promised(nu) && p.promised(eta)) {
      if (!(p.rho_bar.at(nu) < p.rho_bar.at(eta)))
        report.violations.push_back(
            {"decrease",
             "promise tags fail to decrease at " + format_address(nu)});
    } else if (p.firm(nu) && p.promised(eta)) {
      if (reading == OrderingReading::kStructural &&
          !(p.rho.at(nu) < p.rho_bar.at(eta)))
        report.violations.push_back(
            {"decrease",
             "firm child reaches its parent promise at " + format_address(nu)});
    } else {
      // promised child under a firm parent is never allowed
      report.violations.push_back(
          {"decrease", "promised child under a firm parent at " +
                           format_address(nu)});
    }
  }
  return report;
}

bool steel_is_strict(const SteelCondition& p) { return p.rho_bar.empty(); }

bool steel_leq(const SteelCondition& q, const SteelCondition& p) {
  if (!std::includes(q.t.begin(), q.t.end(), p.t.begin(), p.t.end())) return false;
  for (const auto& [n, tag] : p.rho) {
    auto it = q.rho.find(n);
    if (it == q.rho.end() || it->second != tag) return false;
  }
  for (const auto& [n, tag] : p.rho_bar) {
    if (auto it = q.rho_bar.find(n); it != q.rho_bar.end()) {
      if (it->second < tag) return false;
    } else if (auto jt = q.rho.find(n); jt != q.rho.end()) {
      if (jt->second < tag) return false;
    } else {
      return false;
    }
  }
  return true;
}

OrdinalNotation steel_crank(const SteelCondition& p) {
  OrdinalNotation best(0);
  for (const auto& [n, tag] : p.rho)
    if (best < tag) best = tag;
  for (const auto& [n, tag] : p.rho_bar)
    if (best < tag) best = tag;
  return best;
}

std::size_t steel_height(const SteelCondition& p) {
  std::size_t h = 0;
  for (const NodeAddress& n : p.t) h = std::max(h, n.size());
  return h;
}

SteelCondition retag(const SteelCondition& p, const OrdinalNotation& beta,
                     bool promise_floor) {
  SteelCondition out;
  out.t = p.t;
  for (const auto& [n, tag] : p.rho)
    if (tag < beta) out.rho.emplace(n, tag);

  // Children before parents: deeper addresses first.
  std::vector<NodeAddress> order(p.t.begin(), p.t.end());
  std::sort(order.begin(), order.end(), [](const NodeAddress& a, const NodeAddress& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  for (const NodeAddress& n : order) {
    if (out.firm(n)) continue;
    if (auto it = p.rho_bar.find(n); it != p.rho_bar.end() && it->second < beta) {
      out.rho_bar.emplace(n, it->second);
      continue;
    }
    OrdinalNotation promise = promise_floor ? beta : OrdinalNotation(0);
    for (const NodeAddress& child : p.t) {
      if (child.size() != n.size() + 1 || !n.is_prefix_of(child)) continue;
      if (auto it = out.rho.find(child); it != out.rho.end()) {
        OrdinalNotation bump = it->second.plus(1);
        if (promise < bump) promise = bump;
      }
      if (auto it = out.rho_bar.find(child); it != out.rho_bar.end()) {
        OrdinalNotation bump = it->second.plus(1);
        if (promise < bump) promise = bump;
      }
    }
    out.rho_bar.emplace(n, promise);
  }
  return out;
}

std::variant<SteelCondition, SteelConflict> steel_merge_witness(
    const SteelCondition& p, const SteelCondition& r) {
  SteelCondition out;
  out.t = p.t;
  out.t.insert(r.t.begin(), r.t.end());
  for (const NodeAddress& n : out.t) {
    std::optional<OrdinalNotation> tag;
    auto consider = [&](const std::map<NodeAddress, OrdinalNotation>& m) {
      if (auto it = m.find(n); it != m.end())
        if (!tag || *tag < it->second) tag = it->second;
    };
    consider(p.rho);
    consider(p.rho_bar);
    consider(r.rho);
    consider(r.rho_bar);
    out.rho.emplace(n, tag.value_or(OrdinalNotation(0)));
  }
  if (!steel_leq(out, p) || !steel_leq(out, r)) {
    // Name a node where a firm tag was overridden.
    for (const auto& [n, tag] : out.rho) {
      if (auto it = p.rho.find(n); it != p.rho.end() && it->second != tag)
        return SteelConflict{n, "firm tag of the first condition raised"};
      if (auto it = r.rho.find(n); it != r.rho.end() && it->second != tag)
        return SteelConflict{n, "firm tag of the second condition raised"};
    }
    return SteelConflict{NodeAddress(), "promise exceeded a final tag"};
  }
  return out;
}

RefinedThreshold refined_threshold(const SteelCondition& p,
                                   const OrdinalNotation& beta,
                                   std::size_t height_cap) {
  OrdinalNotation threshold = beta.plus(height_cap);
  OrdinalNotation sup(0);
  auto consider = [&](const std::map<NodeAddress, OrdinalNotation>& m) {
    for (const auto& [n, tag] : m)
      if (tag < threshold && sup < tag) sup = tag;
  };
  consider(p.rho);
  consider(p.rho_bar);
  OrdinalNotation beta_prime = sup.plus(1);
  return {beta_prime, retag(p, beta_prime)};
}

std::vector<SteelCondition> enumerate_steel(const SteelFragment& fragment) {
  // All prefix-closed trees with at most size_cap nodes over the width-capped
  // universe, then all tag assignments from the menu.
  std::vector<std::set<NodeAddress>> trees;
  std::set<NodeAddress> current = {NodeAddress()};
  std::function<void(std::vector<NodeAddress>)> grow =
      [&](std::vector<NodeAddress> frontier) {
        trees.push_back(current);
        if (current.size() >= fragment.size_cap) return;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
          const NodeAddress& next = frontier[i];
          current.insert(next);
          // Extensions must stay canonical: only nodes greater than `next`
          // in the frontier order, plus the children of `next`.
          std::vector<NodeAddress> grown(frontier.begin() + i + 1, frontier.end());
          if (next.size() + 1 < fragment.size_cap)
            for (std::uint32_t c = 0; c < fragment.width; ++c)
              grown.push_back(next.child(c));
          grow(std::move(grown));
          current.erase(next);
        }
      };
  std::vector<NodeAddress> roots_children;
  for (std::uint32_t c = 0; c < fragment.width; ++c)
    roots_children.push_back(NodeAddress().child(c));
  grow(roots_children);

  std::vector<SteelCondition> out;
  for (const auto& tree : trees) {
    std::vector<NodeAddress> nodes(tree.begin(), tree.end());
    std::vector<std::pair<bool, OrdinalNotation>> assignment(nodes.size());
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == nodes.size()) {
        SteelCondition cond;
        cond.t = tree;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          if (assignment[k].first)
            cond.rho.emplace(nodes[k], assignment[k].second);
          else
            cond.rho_bar.emplace(nodes[k], assignment[k].second);
        }
        if (steel_validate(fragment.alpha, cond, fragment.reading).ok())
          out.push_back(std::move(cond));
        return;
      }
      for (bool firm : {true, false}) {
        for (const OrdinalNotation& tag : fragment.tag_menu) {
          if (!(tag < fragment.alpha)) continue;
          assignment[i] = {firm, tag};
          assign(i + 1);
        }
      }
    };
    assign(0);
  }
  return out;
}

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void record(std::vector<std::string>& list, std::string what) {
  if (list.size() < 25) list.push_back(std::move(what));
}

bool steel_compatible(const SteelCondition& a, const SteelCondition& b) {
  return std::holds_alternative<SteelCondition>(steel_merge_witness(a, b));
}

// Order-embedding of the fragment tags (naturals and w + k) into integers,
// exact for max and +1 at desk scale.
std::uint32_t tag_code(const OrdinalNotation& tag) {
  if (!tag.is_countable())
    fail(ErrorKind::kUnsupported, "fragment tags must be countable");
  const auto& terms = tag.tail_part().terms();
  if (terms.empty()) return 0;
  if (terms.size() == 1 && terms[0].exp == 0)
    return static_cast<std::uint32_t>(terms[0].coeff);
  if (terms[0].exp == 1 && terms[0].coeff == 1) {
    std::uint64_t finite = tag.tail_part().finite_part();
    if (terms.size() <= 2) return static_cast<std::uint32_t>(100000 + finite);
  }
  fail(ErrorKind::kUnsupported, "fragment tags must be naturals or w + n");
}

// The fixed address universe of a fragment, deepest nodes first so that
// bottom-up passes are a single sweep.
struct SteelUniverse {
  std::vector<NodeAddress> nodes;  // index 0 is the root, children follow
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::map<NodeAddress, int> lookup;
  std::vector<int> bottom_up;  // node ids, deepest first

  explicit SteelUniverse(const SteelFragment& fragment) {
    nodes.push_back(NodeAddress());
    parent.push_back(-1);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
      children.emplace_back();
      if (nodes[head].size() + 1 >= fragment.size_cap) continue;
      for (std::uint32_t c = 0; c < fragment.width; ++c) {
        children[head].push_back(static_cast<int>(nodes.size()));
        nodes.push_back(nodes[head].child(c));
        parent.push_back(static_cast<int>(head));
      }
    }
    children.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      lookup[nodes[i]] = static_cast<int>(i);
    for (std::size_t i = nodes.size(); i-- > 0;)
      bottom_up.push_back(static_cast<int>(i));
    std::sort(bottom_up.begin(), bottom_up.end(), [&](int a, int b) {
      if (nodes[a].size() != nodes[b].size())
        return nodes[a].size() > nodes[b].size();
      return a < b;
    });
  }
};

constexpr std::size_t kMaxSteelNodes = 16;

struct PackedSteel {
  std::array<std::uint8_t, kMaxSteelNodes> state{};  // 0 absent, 1 firm, 2 promise
  std::array<std::uint32_t, kMaxSteelNodes> tag{};
  std::uint32_t crank = 0;
  std::uint32_t height = 0;
  friend bool operator==(const PackedSteel& a, const PackedSteel& b) {
    return a.state == b.state && a.tag == b.tag;
  }
};

PackedSteel pack_steel(const SteelUniverse& u, const SteelCondition& p) {
  PackedSteel out;
  for (const NodeAddress& n : p.t) {
    int id = u.lookup.at(n);
    if (p.firm(n)) {
      out.state[id] = 1;
      out.tag[id] = tag_code(p.rho.at(n));
    } else {
      out.state[id] = 2;
      out.tag[id] = tag_code(p.rho_bar.at(n));
    }
    out.crank = std::max(out.crank, out.tag[id]);
    out.height = std::max<std::uint32_t>(out.height,
                                         static_cast<std::uint32_t>(n.size()));
  }
  return out;
}

bool packed_compatible(const SteelUniverse& u, const PackedSteel& a,
                       const PackedSteel& b) {
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    if (!a.state[i] || !b.state[i]) continue;
    if (a.state[i] == 1 && b.state[i] == 1 && a.tag[i] != b.tag[i]) return false;
    if (a.state[i] == 1 && b.state[i] == 2 && a.tag[i] < b.tag[i]) return false;
    if (a.state[i] == 2 && b.state[i] == 1 && b.tag[i] < a.tag[i]) return false;
  }
  return true;
}

bool packed_leq(const SteelUniverse& u, const PackedSteel& q, const PackedSteel& p) {
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    if (!p.state[i]) continue;
    if (!q.state[i]) return false;
    if (p.state[i] == 1 && (q.state[i] != 1 || q.tag[i] != p.tag[i])) return false;
    if (p.state[i] == 2 && q.tag[i] < p.tag[i]) return false;
  }
  return true;
}

PackedSteel packed_retag(const SteelUniverse& u, const PackedSteel& p,
                         std::uint32_t beta, bool promise_floor) {
  PackedSteel out;
  for (int id : u.bottom_up) {
    if (!p.state[id]) continue;
    if (p.state[id] == 1 && p.tag[id] < beta) {
      out.state[id] = 1;
      out.tag[id] = p.tag[id];
    } else if (p.state[id] == 2 && p.tag[id] < beta) {
      out.state[id] = 2;
      out.tag[id] = p.tag[id];
    } else {
      std::uint32_t promise = promise_floor ? beta : 0;
      for (int child : u.children[id])
        if (out.state[child]) promise = std::max(promise, out.tag[child] + 1);
      out.state[id] = 2;
      out.tag[id] = promise;
    }
    out.crank = std::max(out.crank, out.tag[id]);
    out.height =
        std::max<std::uint32_t>(out.height,
                                static_cast<std::uint32_t>(u.nodes[id].size()));
  }
  return out;
}

}  // namespace

CampaignResult campaign_steel_rank(const SteelFragment& fragment,
                                   const SteelMenus& menus, int jobs) {
  (void)jobs;
  Stopwatch watch;
  CampaignResult result;
  result.name = "steel-rank";
  std::vector<SteelCondition> conds = enumerate_steel(fragment);
  result.enumerated = conds.size();
  result.parameters["conditions"] = std::to_string(conds.size());

  SteelUniverse u(fragment);
  std::vector<PackedSteel> packed;
  packed.reserve(conds.size());
  for (const SteelCondition& c : conds) packed.push_back(pack_steel(u, c));

  std::uint64_t deep = 0;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    const PackedSteel& p = packed[i];

    // Identity at one past the crank: everything survives as a firm tag.
    ++result.checks;
    if (!(packed_retag(u, p, p.crank + 1, menus.promise_floor) == p))
      record(result.counterexamples,
             "retag at crank+1 is not the identity at p#" + std::to_string(i));
    if (retag(conds[i], steel_crank(conds[i]).plus(1), menus.promise_floor) !=
        conds[i])
      record(result.counterexamples,
             "public retag at crank+1 is not the identity at p#" +
                 std::to_string(i));

    for (const OrdinalNotation& beta_ord : menus.betas) {
      const std::uint32_t beta = tag_code(beta_ord);
      PackedSteel q = packed_retag(u, p, beta, menus.promise_floor);
      ++result.checks;
      if (!packed_leq(u, p, q)) {
        record(result.counterexamples,
               "p does not extend its retag at p#" + std::to_string(i));
        continue;
      }
      if (!(packed_retag(u, q, beta, menus.promise_floor) == q))
        record(result.counterexamples,
               "retag not idempotent at p#" + std::to_string(i));
      if (q.crank > beta + p.height)
        record(result.counterexamples,
               "crank(retag) exceeds beta + height at p#" + std::to_string(i));
      for (const OrdinalNotation& beta2_ord : menus.betas) {
        const std::uint32_t beta2 = tag_code(beta2_ord);
        if (beta2 < beta) continue;
        ++result.checks;
        if (!packed_leq(u, packed_retag(u, p, beta2, menus.promise_floor), q))
          record(result.counterexamples,
                 "retag not anti-monotone at p#" + std::to_string(i));
      }
      // Cross-validate a thin sample against the public operations.
      if (++deep % 1009 == 0) {
        SteelCondition q_pub = retag(conds[i], beta_ord, menus.promise_floor);
        if (!(pack_steel(u, q_pub) == q))
          record(result.counterexamples,
                 "packed and public retag disagree at p#" + std::to_string(i));
        if (!steel_validate(fragment.alpha, q_pub, fragment.reading).ok())
          record(result.counterexamples,
                 "retag output invalid at p#" + std::to_string(i));
      }
      // The rank transfer: cheap competitors compatible with q meet p via
      // the merged witness.
      for (std::size_t ri = 0; ri < conds.size(); ++ri) {
        const PackedSteel& r = packed[ri];
        if (r.crank >= beta) continue;
        ++result.checks;
        if (packed_compatible(u, r, q) && !packed_compatible(u, r, p)) {
          record(result.counterexamples,
                 "steel rank property fails at p#" + std::to_string(i) + " r#" +
                     std::to_string(ri) + " beta=" + format_ordinal(beta_ord));
        } else if (packed_compatible(u, r, q) && (ri + i) % 4999 == 0) {
          auto merged = steel_merge_witness(conds[ri], conds[i]);
          if (!std::holds_alternative<SteelCondition>(merged))
            record(result.counterexamples,
                   "merged witness refuted packed compatibility at p#" +
                       std::to_string(i));
          else {
            const SteelCondition& hat = std::get<SteelCondition>(merged);
            if (!steel_leq(hat, conds[i]) || !steel_leq(hat, conds[ri]) ||
                !steel_is_strict(hat))
              record(result.counterexamples,
                     "merged witness not a strict lower bound at p#" +
                         std::to_string(i));
          }
        }
      }
    }
  }
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

CampaignResult campaign_refined_threshold(const SteelFragment& fragment,
                                          const std::vector<OrdinalNotation>& betas,
                                          int jobs) {
  (void)jobs;
  Stopwatch watch;
  CampaignResult result;
  result.name = "refined-threshold";

  SteelUniverse u(fragment);
  std::vector<std::size_t> census;
  for (OrderingReading reading :
       {OrderingReading::kStructural, OrderingReading::kLiteral}) {
    SteelFragment frag = fragment;
    frag.reading = reading;
    std::vector<SteelCondition> conds = enumerate_steel(frag);
    census.push_back(conds.size());
    if (reading == OrderingReading::kStructural) result.enumerated = conds.size();
    const std::size_t height_cap = frag.size_cap;

    std::vector<PackedSteel> packed;
    packed.reserve(conds.size());
    for (const SteelCondition& c : conds) packed.push_back(pack_steel(u, c));

    for (const OrdinalNotation& beta_ord : betas) {
      const std::uint32_t beta = tag_code(beta_ord);
      // Competitors of the special form retag(t, beta).
      std::vector<PackedSteel> competitors;
      competitors.reserve(packed.size());
      for (const PackedSteel& t : packed)
        competitors.push_back(packed_retag(u, t, beta, true));

      for (std::size_t i = 0; i < packed.size(); ++i) {
        const PackedSteel& p = packed[i];
        // beta' = sup of tags below beta + height_cap, plus one.
        std::uint32_t sup = 0;
        const std::uint32_t threshold = beta + static_cast<std::uint32_t>(height_cap);
        for (std::size_t k = 0; k < u.nodes.size(); ++k)
          if (p.state[k] && p.tag[k] < threshold) sup = std::max(sup, p.tag[k]);
        PackedSteel q = packed_retag(u, p, sup + 1, true);
        ++result.checks;
        if (!packed_leq(u, p, q)) {
          record(result.counterexamples,
                 "refined reduct above p fails at p#" + std::to_string(i));
          continue;
        }
        if (i % 467 == 0) {
          RefinedThreshold rt = refined_threshold(conds[i], beta_ord, height_cap);
          if (!(pack_steel(u, rt.reduct) == q) ||
              tag_code(rt.beta_prime) != sup + 1)
            record(result.counterexamples,
                   "packed and public refined threshold disagree at p#" +
                       std::to_string(i));
        }
        for (std::size_t ti = 0; ti < competitors.size(); ++ti) {
          const PackedSteel& r = competitors[ti];
          ++result.checks;
          if (packed_compatible(u, r, q) && !packed_compatible(u, r, p))
            record(result.counterexamples,
                   "refined threshold fails at p#" + std::to_string(i) + " t#" +
                       std::to_string(ti) + " beta=" + format_ordinal(beta_ord) +
                       (reading == OrderingReading::kLiteral ? " (literal)"
                                                             : " (structural)"));
        }
      }
    }
  }
  if (census.size() == 2 && census[0] != census[1])
    result.notes.push_back(
        "ordering readings admit different condition censuses: " +
        std::to_string(census[0]) + " structural vs " + std::to_string(census[1]) +
        " literal");
  std::sort(result.counterexamples.begin(), result.counterexamples.end());
  result.wall_seconds = watch.seconds();
  return result;
}

}  // namespace flab


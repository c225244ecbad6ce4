// Copyright 2026 The gtrellis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gtrellis/trellis.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <unordered_map>

namespace gtrellis {

namespace {

/// Maps the states of one depth to their positions. Dense table for narrow
/// trellises, hash map above.
class StateIndexer {
 public:
  StateIndexer(int tests, const TrellisLimits& limits) : dense_(tests <= limits.dense_tests) {
    if (dense_) table_.assign(std::size_t{1} << tests, -1);
  }

  void assign(const std::vector<StateMask>& states) {
    if (dense_) {
      for (StateMask s : current_) table_[s] = -1;
      for (std::size_t p = 0; p < states.size(); ++p) {
        table_[states[p]] = static_cast<std::int64_t>(p);
      }
    } else {
      map_.clear();
      map_.reserve(states.size());
      for (std::size_t p = 0; p < states.size(); ++p) map_.emplace(states[p], p);
    }
    current_ = states;
  }

  std::uint32_t position(StateMask s) const {
    if (dense_) return static_cast<std::uint32_t>(table_[s]);
    return static_cast<std::uint32_t>(map_.at(s));
  }

 private:
  bool dense_;
  std::vector<std::int64_t> table_;
  std::unordered_map<StateMask, std::size_t> map_;
  std::vector<StateMask> current_;
};

void check_width(int tests, const TrellisLimits& limits) {
  if (tests > limits.max_tests || tests > kMaxMaskTests) {
    throw ResourceError("trellis with " + std::to_string(tests) +
                        " tests exceeds the configured limit of " +
                        std::to_string(limits.max_tests));
  }
}

struct Layers {
  std::vector<std::vector<StateMask>> states;
  std::vector<EdgeSection> sections;
};

/// Forward construction from packed columns: from every active state one
/// 0-labeled self-loop and one 1-labeled edge to state | column.
Layers grow(const std::vector<StateMask>& columns, int tests, const TrellisLimits& limits) {
  Layers out;
  out.states.reserve(columns.size() + 1);
  out.sections.reserve(columns.size());
  out.states.push_back({StateMask{0}});
  StateIndexer indexer(tests, limits);

  for (std::size_t l = 0; l < columns.size(); ++l) {
    const StateMask column = columns[l];
    const std::vector<StateMask>& prev = out.states.back();
    std::vector<StateMask> next;
    next.reserve(2 * prev.size());
    for (StateMask s : prev) {
      next.push_back(s);
      next.push_back(s | column);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    indexer.assign(next);

    EdgeSection section{static_cast<Index>(l + 1), {}};
    section.edges.reserve(2 * prev.size());
    for (std::size_t p = 0; p < prev.size(); ++p) {
      const StateMask s = prev[p];
      const auto from = static_cast<std::uint32_t>(p);
      section.edges.push_back({s, s, from, indexer.position(s), 0});
      section.edges.push_back({s, s | column, from, indexer.position(s | column), 1});
    }
    out.sections.push_back(std::move(section));
    out.states.push_back(std::move(next));
  }
  return out;
}

/// Backward reachability from `final_state`, then forward reachability from
/// state 0 through surviving states. Keeps edge order.
Layers prune(const std::vector<std::vector<StateMask>>& states,
             const std::vector<EdgeSection>& sections, StateMask final_state) {
  const std::size_t n = sections.size();
  const auto& last = states[n];
  const auto it = std::lower_bound(last.begin(), last.end(), final_state);
  if (it == last.end() || *it != final_state) {
    throw NotASyndromeError("state " + std::to_string(final_state) +
                            " is not reachable: the test vector is not a syndrome of the matrix");
  }

  std::vector<std::vector<char>> alive(n + 1);
  for (std::size_t d = 0; d <= n; ++d) alive[d].assign(states[d].size(), 0);
  alive[n][static_cast<std::size_t>(it - last.begin())] = 1;
  for (std::size_t l = n; l-- > 0;) {
    for (const Edge& e : sections[l].edges) {
      if (alive[l + 1][e.to_pos]) alive[l][e.from_pos] = 1;
    }
  }

  std::vector<std::vector<char>> keep(n + 1);
  for (std::size_t d = 0; d <= n; ++d) keep[d].assign(states[d].size(), 0);
  const auto zero = std::lower_bound(states[0].begin(), states[0].end(), StateMask{0});
  const auto zero_pos = static_cast<std::size_t>(zero - states[0].begin());
  keep[0][zero_pos] = alive[0][zero_pos];
  for (std::size_t l = 0; l < n; ++l) {
    for (const Edge& e : sections[l].edges) {
      if (keep[l][e.from_pos] && alive[l + 1][e.to_pos]) keep[l + 1][e.to_pos] = 1;
    }
  }

  Layers out;
  std::vector<std::vector<std::uint32_t>> remap(n + 1);
  for (std::size_t d = 0; d <= n; ++d) {
    std::vector<StateMask> kept;
    remap[d].assign(states[d].size(), 0);
    for (std::size_t p = 0; p < states[d].size(); ++p) {
      if (keep[d][p]) {
        remap[d][p] = static_cast<std::uint32_t>(kept.size());
        kept.push_back(states[d][p]);
      }
    }
    out.states.push_back(std::move(kept));
  }
  for (std::size_t l = 0; l < n; ++l) {
    EdgeSection section{sections[l].depth, {}};
    for (const Edge& e : sections[l].edges) {
      if (keep[l][e.from_pos] && keep[l + 1][e.to_pos]) {
        section.edges.push_back({e.from, e.to, remap[l][e.from_pos], remap[l + 1][e.to_pos], e.label});
      }
    }
    out.sections.push_back(std::move(section));
  }
  return out;
}

const char* kind_name(TrellisKind kind) {
  switch (kind) {
    case TrellisKind::Complete:
      return "complete";
    case TrellisKind::Expurgated:
      return "expurgated";
    case TrellisKind::Reduced:
      return "reduced";
  }
  return "?";
}

}  // namespace

Trellis::Trellis(TrellisKind kind, int tests, std::vector<std::vector<StateMask>> states,
                 std::vector<EdgeSection> sections, std::optional<StateMask> final_state,
                 std::optional<ReducedInfo> reduced)
    : kind_(kind),
      tests_(tests),
      states_(std::move(states)),
      sections_(std::move(sections)),
      final_state_(final_state),
      reduced_(std::move(reduced)) {
  if (states_.size() != sections_.size() + 1) {
    throw DimensionError("trellis needs one more state layer than sections");
  }
}

std::size_t Trellis::edge_count() const {
  std::size_t total = 0;
  for (const auto& section : sections_) total += section.edges.size();
  return total;
}

std::size_t Trellis::max_states() const {
  std::size_t widest = 0;
  for (const auto& layer : states_) widest = std::max(widest, layer.size());
  return widest;
}

Trellis build_complete(const TestMatrix& a, const TrellisLimits& limits) {
  const int m = static_cast<int>(a.rows());
  check_width(m, limits);
  std::vector<StateMask> columns(static_cast<std::size_t>(a.cols()));
  for (Index l = 0; l < a.cols(); ++l) columns[static_cast<std::size_t>(l)] = a.column_mask(l);
  Layers layers = grow(columns, m, limits);
  return Trellis(TrellisKind::Complete, m, std::move(layers.states), std::move(layers.sections));
}

Trellis expurgate(const Trellis& trellis, const TestVector& t) {
  if (trellis.kind() != TrellisKind::Complete) {
    throw DomainError("expurgation applies to a complete trellis");
  }
  if (t.size() != trellis.tests()) {
    throw DimensionError("test vector has length " + std::to_string(t.size()) + ", trellis has " +
                         std::to_string(trellis.tests()) + " tests");
  }
  const StateMask final_state = decimal_index(t);
  std::vector<std::vector<StateMask>> states;
  for (Index d = 0; d <= trellis.length(); ++d) states.push_back(trellis.states(d));
  Layers layers = prune(states, trellis.sections(), final_state);
  return Trellis(TrellisKind::Expurgated, trellis.tests(), std::move(layers.states),
                 std::move(layers.sections), final_state);
}

Trellis build_reduced(const TestMatrix& a, const TestVector& t, const TrellisLimits& limits) {
  if (t.size() != a.rows()) {
    throw DimensionError("test vector has length " + std::to_string(t.size()) + ", matrix has " +
                         std::to_string(a.rows()) + " tests");
  }
  ReducedInfo info;
  info.original_tests = a.rows();
  info.original_elements = a.cols();
  info.observed = t;
  for (Index i = 0; i < a.rows(); ++i) {
    if (t[i]) info.kept_tests.push_back(i);
  }
  info.m0 = static_cast<int>(info.kept_tests.size());
  check_width(info.m0, limits);

  std::vector<StateMask> columns;
  for (Index l = 0; l < a.cols(); ++l) {
    bool in_negative_test = false;
    for (Index i = 0; i < a.rows() && !in_negative_test; ++i) {
      in_negative_test = a(i, l) && !t[i];
    }
    if (in_negative_test) {
      info.zero_covered_elements.push_back(l);
      continue;
    }
    StateMask column = 0;
    for (std::size_t j = 0; j < info.kept_tests.size(); ++j) {
      if (a(info.kept_tests[j], l)) column |= StateMask{1} << j;
    }
    info.kept_elements.push_back(l);
    columns.push_back(column);
  }
  info.n0 = static_cast<Index>(info.kept_elements.size());

  const StateMask all_positive =
      info.m0 == kMaxMaskTests ? ~StateMask{0} : (StateMask{1} << info.m0) - 1;
  Layers grown = grow(columns, info.m0, limits);
  Layers layers = prune(grown.states, grown.sections, all_positive);
  return Trellis(TrellisKind::Reduced, info.m0, std::move(layers.states), std::move(layers.sections),
                 all_positive, std::move(info));
}

std::vector<DefectivityVector> enumerate_paths(const Trellis& trellis) {
  const Index n = trellis.length();
  const auto& zero_layer = trellis.states(0);
  if (zero_layer.empty()) return {};

  // Path counts, in floating point to survive large complete trellises.
  std::vector<double> count(zero_layer.size(), 0.0);
  count[0] = 1.0;
  for (Index l = 0; l < n; ++l) {
    std::vector<double> next(trellis.states(l + 1).size(), 0.0);
    for (const Edge& e : trellis.section(l).edges) next[e.to_pos] += count[e.from_pos];
    count = std::move(next);
  }
  double total = 0.0;
  for (double c : count) total += c;
  if (total > static_cast<double>(kMaxEnumeratedPaths)) {
    throw ResourceError("trellis has " + std::to_string(total) + " paths, enumeration limit is " +
                        std::to_string(kMaxEnumeratedPaths));
  }

  std::vector<std::vector<std::vector<std::size_t>>> outgoing(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    auto& out = outgoing[static_cast<std::size_t>(l)];
    out.resize(trellis.states(l).size());
    const auto& edges = trellis.section(l).edges;
    for (std::size_t k = 0; k < edges.size(); ++k) out[edges[k].from_pos].push_back(k);
    for (auto& list : out) {
      std::stable_sort(list.begin(), list.end(), [&](std::size_t u, std::size_t v) {
        return edges[u].label < edges[v].label;
      });
    }
  }

  std::vector<DefectivityVector> paths;
  paths.reserve(static_cast<std::size_t>(total));
  DefectivityVector current(n);
  auto walk = [&](auto&& self, Index depth, std::uint32_t pos) -> void {
    if (depth == n) {
      paths.push_back(current);
      return;
    }
    const auto& edges = trellis.section(depth).edges;
    for (std::size_t k : outgoing[static_cast<std::size_t>(depth)][pos]) {
      current.set(depth, edges[k].label != 0);
      self(self, depth + 1, edges[k].to_pos);
    }
  };
  walk(walk, 0, 0);
  return paths;
}

void write_trellis(std::ostream& out, const Trellis& trellis) {
  out << "# kind=" << kind_name(trellis.kind()) << " tests=" << trellis.tests()
      << " sections=" << trellis.length();
  if (trellis.final_state()) out << " final=" << *trellis.final_state();
  out << '\n';
  for (const auto& section : trellis.sections()) {
    for (const Edge& e : section.edges) {
      out << section.depth << ' ' << e.from << ' ' << e.to << ' ' << int(e.label) << '\n';
    }
  }
}

}  // namespace gtrellis

// Copyright 2026 The graphpir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpir/graph.hpp"

namespace gpir {

enum class Family { complete, star, bipartite, cycle, path, complete_multigraph };

inline Family parse_family(const std::string& name) {
  if (name == "complete") return Family::complete;
  if (name == "star") return Family::star;
  if (name == "bipartite") return Family::bipartite;
  if (name == "cycle") return Family::cycle;
  if (name == "path") return Family::path;
  if (name == "complete-multigraph") return Family::complete_multigraph;
  throw std::invalid_argument("unknown graph family '" + name + "'");
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::complete: return "complete";
    case Family::star: return "star";
    case Family::bipartite: return "bipartite";
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::complete_multigraph: return "complete-multigraph";
  }
  return "?";
}

/// `n` is the vertex count, except for bipartite where (n, n2) are the side
/// sizes. Stars put the hub at vertex n; bipartite side A is 1..n.
struct FamilySpec {
  Family family = Family::complete;
  std::uint32_t n = 0;
  std::uint32_t n2 = 0;
  std::uint32_t r = 1;
};

inline StorageGraph generate_family(const FamilySpec& spec) {
  const auto n = spec.n;
  std::vector<Edge> edges;
  auto add = [&](std::uint32_t a, std::uint32_t b) { edges.push_back({VertexId{a}, VertexId{b}, 1}); };
  std::uint32_t vertices = n;
  switch (spec.family) {
    case Family::complete:
    case Family::complete_multigraph:
      if (n < 2) throw std::invalid_argument("complete graph needs N >= 2");
      for (std::uint32_t a = 1; a <= n; ++a)
        for (std::uint32_t b = a + 1; b <= n; ++b) add(a, b);
      break;
    case Family::star:
      if (n < 2) throw std::invalid_argument("star needs N >= 2");
      for (std::uint32_t a = 1; a < n; ++a) add(a, n);
      break;
    case Family::bipartite:
      if (n < 1 || spec.n2 < 1) throw std::invalid_argument("bipartite graph needs both sides non-empty");
      vertices = n + spec.n2;
      for (std::uint32_t a = 1; a <= n; ++a)
        for (std::uint32_t b = n + 1; b <= vertices; ++b) add(a, b);
      break;
    case Family::cycle:
      if (n < 3) throw std::invalid_argument("cycle needs N >= 3");
      for (std::uint32_t a = 1; a < n; ++a) add(a, a + 1);
      add(1, n);
      break;
    case Family::path:
      if (n < 2) throw std::invalid_argument("path needs N >= 2");
      for (std::uint32_t a = 1; a < n; ++a) add(a, a + 1);
      break;
  }
  auto g = StorageGraph::build(vertices, std::move(edges));
  if (spec.r == 0) throw std::invalid_argument("r must be >= 1");
  if (spec.family == Family::complete_multigraph || spec.r > 1) return multigraph_extend(g, spec.r);
  return g;
}

}  // namespace gpir

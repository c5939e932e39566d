#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mml {

// Unordered vertex pair with 1-based endpoints, stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  auto operator<=>(const Edge&) const = default;
};

// Labeled undirected graph on vertices 1..d. Edges are kept sorted
// lexicographically; the position of an edge in that order (1-based) is its
// edge index, which fixes the coordinate of the sign vector driving it.
class Graph {
 public:
  Graph() = default;

  // Pairs are 1-based and may be given in either orientation.
  // Throws ValidationError on self-loops, out-of-range vertices, duplicates.
  static Graph make(int d, std::vector<std::pair<int, int>> pairs);

  int dim() const { return d_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  // 1-based index of edge {i, j}, or nullopt when absent.
  std::optional<std::size_t> edge_index(int i, int j) const;
  bool has_edge(int i, int j) const { return edge_index(i, j).has_value(); }

  bool operator==(const Graph&) const = default;

 private:
  int d_ = 0;
  std::vector<Edge> edges_;
  // Row-major d*d table of 1-based edge indices, 0 for non-edges.
  std::vector<std::size_t> index_;
};

enum class GraphKind { path, cycle, complete, star, empty };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

// Path 1-2-..-d, cycle (d >= 3), complete, star centered at vertex 1, or empty.
Graph standard_graph(GraphKind kind, int d);

// Parses the "kind:d" shorthand, e.g. "path:8".
Graph parse_graph_shorthand(std::string_view text);

inline constexpr std::size_t kDefaultGraphCap = 1'000'000;

// All labeled graphs on [d] with m edges, in lexicographic order of their
// sorted edge lists. Throws BudgetError when C(d(d-1)/2, m) exceeds cap.
std::vector<Graph> enumerate_graphs(int d, std::size_t m,
                                    std::size_t cap = kDefaultGraphCap);

}  // namespace mml

#include "mml/graph.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "mml/error.hpp"

namespace mml {

Graph Graph::make(int d, std::vector<std::pair<int, int>> pairs) {
  if (d < 1) throw ValidationError("graph dimension must be positive, got " + std::to_string(d));
  Graph g;
  g.d_ = d;
  g.edges_.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a < 1 || a > d || b < 1 || b > d)
      throw ValidationError("edge {" + std::to_string(a) + "," + std::to_string(b) +
                            "} has a vertex outside 1.." + std::to_string(d));
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    g.edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
  if (dup != g.edges_.end())
    throw ValidationError("duplicate edge {" + std::to_string(dup->i) + "," +
                          std::to_string(dup->j) + "}");

  const auto du = static_cast<std::size_t>(d);
  g.index_.assign(du * du, 0);
  for (std::size_t k = 0; k < g.edges_.size(); ++k) {
    const auto i = static_cast<std::size_t>(g.edges_[k].i - 1);
    const auto j = static_cast<std::size_t>(g.edges_[k].j - 1);
    g.index_[i * du + j] = k + 1;
    g.index_[j * du + i] = k + 1;
  }
  return g;
}

std::optional<std::size_t> Graph::edge_index(int i, int j) const {
  if (i < 1 || j < 1 || i > d_ || j > d_ || i == j) return std::nullopt;
  const auto du = static_cast<std::size_t>(d_);
  const std::size_t k = index_[static_cast<std::size_t>(i - 1) * du + static_cast<std::size_t>(j - 1)];
  if (k == 0) return std::nullopt;
  return k;
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "path") return GraphKind::path;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "complete") return GraphKind::complete;
  if (name == "star") return GraphKind::star;
  if (name == "empty") return GraphKind::empty;
  throw ValidationError("unknown graph kind '" + std::string(name) +
                        "' (expected path, cycle, complete, star, empty)");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::complete: return "complete";
    case GraphKind::star: return "star";
    case GraphKind::empty: return "empty";
  }
  return "unknown";
}

Graph standard_graph(GraphKind kind, int d) {
  if (d < 1) throw ValidationError("graph dimension must be positive, got " + std::to_string(d));
  std::vector<std::pair<int, int>> pairs;
  switch (kind) {
    case GraphKind::path:
      for (int v = 1; v < d; ++v) pairs.emplace_back(v, v + 1);
      break;
    case GraphKind::cycle:
      if (d < 3) throw ValidationError("cycle graph requires d >= 3, got " + std::to_string(d));
      for (int v = 1; v < d; ++v) pairs.emplace_back(v, v + 1);
      pairs.emplace_back(1, d);
      break;
    case GraphKind::complete:
      for (int a = 1; a <= d; ++a)
        for (int b = a + 1; b <= d; ++b) pairs.emplace_back(a, b);
      break;
    case GraphKind::star:
      for (int v = 2; v <= d; ++v) pairs.emplace_back(1, v);
      break;
    case GraphKind::empty:
      break;
  }
  return Graph::make(d, std::move(pairs));
}

Graph parse_graph_shorthand(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError("graph shorthand must look like kind:d, got '" + std::string(text) + "'");
  const auto kind = parse_graph_kind(text.substr(0, colon));
  const auto digits = text.substr(colon + 1);
  int d = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ec != std::errc{} || ptr != digits.data() + digits.size())
    throw ValidationError("graph shorthand has a malformed dimension: '" + std::string(text) + "'");
  return standard_graph(kind, d);
}

namespace {

// C(n, k), saturating at cap + 1.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1;
  for (std::size_t t = 1; t <= k; ++t) {
    acc = acc * static_cast<long double>(n - k + t) / static_cast<long double>(t);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(acc + 0.5L);
}

}  // namespace

std::vector<Graph> enumerate_graphs(int d, std::size_t m, std::size_t cap) {
  if (d < 1) throw ValidationError("graph dimension must be positive, got " + std::to_string(d));
  const auto du = static_cast<std::size_t>(d);
  const std::size_t slots = du * (du - 1) / 2;
  if (m > slots)
    throw ValidationError("m=" + std::to_string(m) + " exceeds d(d-1)/2=" + std::to_string(slots));
  const std::size_t total = binomial_capped(slots, m, cap);
  if (total > cap)
    throw BudgetError("enumerate_graphs(" + std::to_string(d) + ", " + std::to_string(m) +
                      ") exceeds the cap of " + std::to_string(cap) + " graphs");

  std::vector<std::pair<int, int>> all;
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) all.emplace_back(a, b);

  std::vector<Graph> out;
  out.reserve(total);
  std::vector<std::size_t> pick(m);
  for (std::size_t t = 0; t < m; ++t) pick[t] = t;
  while (true) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(m);
    for (auto p : pick) pairs.push_back(all[p]);
    out.push_back(Graph::make(d, std::move(pairs)));
    // next combination in lexicographic order
    std::size_t t = m;
    while (t > 0 && pick[t - 1] == slots - m + t - 1) --t;
    if (t == 0) break;
    ++pick[t - 1];
    for (std::size_t u = t; u < m; ++u) pick[u] = pick[u - 1] + 1;
  }
  return out;
}

}  // namespace mml

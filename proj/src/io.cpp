#include "mml/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mml/error.hpp"

namespace mml::io {

namespace {

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(where + ": missing field '" + name + "'");
  return *it;
}

template <class T>
T as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError("field '" + what + "' has the wrong type");
  }
}

Vector vector_from(const json& j, const std::string& what) {
  const auto v = as<std::vector<double>>(j, what);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix matrix_from(const json& j, const std::string& what) {
  const auto rows = as<std::vector<std::vector<double>>>(j, what);
  const auto r = static_cast<Eigen::Index>(rows.size());
  Matrix m(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != r)
      throw ValidationError("field '" + what + "' must be a square matrix");
    for (Eigen::Index k = 0; k < r; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return m;
}

json rows_of(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

json values_of(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j});
  return {{"d", g.dim()}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
  const int d = as<int>(field(j, "d", "graph"), "d");
  const auto& edges = field(j, "edges", "graph");
  if (!edges.is_array()) throw ValidationError("field 'edges' must be an array of pairs");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) throw ValidationError("field 'edges' must contain [i, j] pairs");
    pairs.emplace_back(as<int>(e[0], "edges"), as<int>(e[1], "edges"));
  }
  return Graph::make(d, std::move(pairs));
}

json to_json(const SignPacking& p) { return {{"m", p.m}, {"vectors", p.vectors}}; }

SignPacking packing_from_json(const json& j) {
  SignPacking p;
  p.m = as<int>(field(j, "m", "packing"), "m");
  p.vectors = as<std::vector<SignVector>>(field(j, "vectors", "packing"), "vectors");
  for (const auto& v : p.vectors) {
    if (v.size() != static_cast<std::size_t>(p.m))
      throw ValidationError("field 'vectors' has a vector of the wrong length");
    for (int s : v)
      if (s != 1 && s != -1) throw ValidationError("field 'vectors' must contain only +1/-1");
  }
  return p;
}

json to_json(const GaussianModel& m) {
  return {{"mean", values_of(m.mean())}, {"precision", rows_of(m.precision())}, {"graph", to_json(m.graph())}};
}

GaussianModel gaussian_from_json(const json& j) {
  return GaussianModel(graph_from_json(field(j, "graph", "model")),
                       vector_from(field(j, "mean", "model"), "mean"),
                       matrix_from(field(j, "precision", "model"), "precision"));
}

json to_json(const IsingModel& m) {
  return {{"h", values_of(m.field())}, {"W", rows_of(m.interactions())}, {"graph", to_json(m.graph())}};
}

IsingModel ising_from_json(const json& j) {
  return IsingModel(graph_from_json(field(j, "graph", "model")),
                    vector_from(field(j, "h", "model"), "h"), matrix_from(field(j, "W", "model"), "W"));
}

FamilyKind parse_family_kind(const std::string& name) {
  if (name == "gaussian") return FamilyKind::gaussian;
  if (name == "ising") return FamilyKind::ising;
  if (name == "product") return FamilyKind::product;
  throw ValidationError("unknown family kind '" + name + "' (expected gaussian, ising, product)");
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gaussian: return "gaussian";
    case FamilyKind::ising: return "ising";
    case FamilyKind::product: return "product";
  }
  return "unknown";
}

std::vector<GaussianModel> gaussian_members(const FamilySpec& spec, double delta) {
  std::vector<GaussianModel> out;
  for (const auto& s : spec.packing.vectors) out.push_back(precision_from_signs(spec.graph, s, delta));
  return out;
}

std::vector<IsingModel> ising_members(const FamilySpec& spec, double delta) {
  std::vector<IsingModel> out;
  for (const auto& s : spec.packing.vectors) {
    if (spec.kind == FamilyKind::product)
      out.push_back(fields_from_signs(spec.graph.dim(), s, delta));
    else
      out.push_back(interactions_from_signs(spec.graph, s, delta));
  }
  return out;
}

json family_to_json(const FamilySpec& spec) {
  json j{{"kind", to_string(spec.kind)},
         {"graph", to_json(spec.graph)},
         {"delta", spec.delta},
         {"packing", to_json(spec.packing)}};
  if (spec.n) j["n"] = *spec.n;
  if (spec.c2) j["c2"] = *spec.c2;
  json models = json::array();
  if (spec.kind == FamilyKind::gaussian) {
    for (const auto& m : gaussian_members(spec, spec.delta)) models.push_back(to_json(m));
  } else {
    for (const auto& m : ising_members(spec, spec.delta)) models.push_back(to_json(m));
  }
  j["models"] = std::move(models);
  return j;
}

FamilySpec family_spec_from_json(const json& j) {
  FamilySpec spec;
  spec.kind = parse_family_kind(as<std::string>(field(j, "kind", "family"), "kind"));
  spec.graph = graph_from_json(field(j, "graph", "family"));
  spec.delta = as<double>(field(j, "delta", "family"), "delta");
  spec.packing = packing_from_json(field(j, "packing", "family"));
  if (j.contains("n")) spec.n = as<std::size_t>(j["n"], "n");
  if (j.contains("c2")) spec.c2 = as<double>(j["c2"], "c2");
  const std::size_t expected =
      spec.kind == FamilyKind::product ? static_cast<std::size_t>(spec.graph.dim()) : spec.graph.edge_count();
  if (static_cast<std::size_t>(spec.packing.m) != expected)
    throw ValidationError("field 'packing' has m=" + std::to_string(spec.packing.m) + ", expected " +
                          std::to_string(expected));
  return spec;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string pmf_csv(std::span<const double> probabilities) {
  std::string out = "config_index,probability\n";
  for (std::size_t x = 0; x < probabilities.size(); ++x)
    out += std::to_string(x) + "," + format_double(probabilities[x]) + "\n";
  return out;
}

std::string samples_csv(const std::vector<std::vector<int>>& draws) {
  std::string out;
  for (const auto& row : draws) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string risk_records_csv(const RiskCurve& curve) {
  std::string out = "n,trial_index,true_label,chosen_label,tv_to_truth\n";
  for (const auto& r : curve.records)
    out += std::to_string(r.n) + "," + std::to_string(r.trial) + "," + std::to_string(r.truth) + "," +
           std::to_string(r.chosen) + "," + format_double(r.tv) + "\n";
  return out;
}

std::string plot_data_csv(const RiskCurve& curve) {
  std::string out = "n,mean_risk,stderr\n";
  for (const auto& p : curve.points)
    out += std::to_string(p.n) + "," + format_double(p.risk) + "," + format_double(p.se) + "\n";
  return out;
}

json to_json(const RiskCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points)
    points.push_back({{"n", p.n},
                      {"members", p.members},
                      {"delta", p.delta},
                      {"risk", p.risk},
                      {"stderr", p.se},
                      {"mean_over_members", p.mean_risk}});
  json fit = nullptr;
  if (curve.fit_valid)
    fit = {{"slope", curve.fit.slope}, {"intercept", curve.fit.intercept}, {"r_squared", curve.fit.r_squared}};
  return {{"points", points}, {"fit", fit}, {"records", curve.records.size()}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << contents;
}

}  // namespace mml::io

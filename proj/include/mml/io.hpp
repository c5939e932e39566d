#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mml/estimation.hpp"
#include "mml/gaussian.hpp"
#include "mml/graph.hpp"
#include "mml/ising.hpp"
#include "mml/packing.hpp"

namespace mml::io {

using json = nlohmann::json;

// {"d": int, "edges": [[i, j], ...]} with 1-based sorted pairs.
json to_json(const Graph& g);
// Throws ValidationError naming the offending field.
Graph graph_from_json(const json& j);

// {"m": int, "vectors": [[+-1, ...], ...]}
json to_json(const SignPacking& p);
SignPacking packing_from_json(const json& j);

// {"mean": [...], "precision": [[...]], "graph": {...}}
json to_json(const GaussianModel& m);
GaussianModel gaussian_from_json(const json& j);

// {"h": [...], "W": [[...]], "graph": {...}}
json to_json(const IsingModel& m);
IsingModel ising_from_json(const json& j);

enum class FamilyKind { gaussian, ising, product };
FamilyKind parse_family_kind(const std::string& name);
std::string to_string(FamilyKind kind);

// Everything needed to rebuild a hard family.
struct FamilySpec {
  FamilyKind kind = FamilyKind::ising;
  Graph graph;  // edgeless on d vertices for product families
  double delta = 0.0;
  SignPacking packing;
  std::optional<std::size_t> n;
  std::optional<double> c2;
};

json family_to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const json& j);

// Rebuilds the members of a family at the given delta from its packing.
std::vector<GaussianModel> gaussian_members(const FamilySpec& spec, double delta);
std::vector<IsingModel> ising_members(const FamilySpec& spec, double delta);

// "config_index,probability" rows.
std::string pmf_csv(std::span<const double> probabilities);
// One row of +-1 entries per draw.
std::string samples_csv(const std::vector<std::vector<int>>& draws);

std::string risk_records_csv(const RiskCurve& curve);
// "n,mean_risk,stderr" triples.
std::string plot_data_csv(const RiskCurve& curve);
json to_json(const RiskCurve& curve);

// Shortest round-trip representation of a double.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace mml::io

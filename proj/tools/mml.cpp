#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mml/bounds.hpp"
#include "mml/error.hpp"
#include "mml/estimation.hpp"
#include "mml/gaussian.hpp"
#include "mml/graph.hpp"
#include "mml/io.hpp"
#include "mml/ising.hpp"
#include "mml/kernels.hpp"
#include "mml/packing.hpp"
#include "mml/rng.hpp"
#include "mml/verify.hpp"

namespace {

using json = nlohmann::json;
using mml::io::format_double;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kInternal = 1, kInvalid = 2, kCheckFailed = 3 };

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
  std::string format;
  int jobs = 0;
};

// What a subcommand produced: the primary output in both encodings where
// available, and parameters derived while producing it.
struct Result {
  json primary;
  std::optional<std::string> csv;
  json derived = json::object();
  int exit_code = kOk;
};

bool wants_csv(const Common& c) {
  if (!c.format.empty()) return c.format == "csv";
  return std::filesystem::path(c.out).extension() == ".csv";
}

mml::Graph load_graph(const std::string& text) {
  if (!std::filesystem::exists(text) && text.find(':') != std::string::npos)
    return mml::parse_graph_shorthand(text);
  json j;
  try {
    j = json::parse(mml::io::read_file(text));
  } catch (const json::parse_error& e) {
    throw mml::ValidationError("graph file '" + text + "' is not valid JSON: " + e.what());
  }
  return mml::io::graph_from_json(j);
}

mml::io::FamilySpec load_family(const std::string& path) {
  json j;
  try {
    j = json::parse(mml::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw mml::ValidationError("family file '" + path + "' is not valid JSON: " + e.what());
  }
  return mml::io::family_spec_from_json(j);
}

std::string packing_csv(const mml::SignPacking& p) {
  std::string out;
  for (const auto& v : p.vectors) {
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    out += "\n";
  }
  return out;
}

// ---- pack -------------------------------------------------------------------

struct PackArgs {
  int m = 0;
  std::optional<std::size_t> target;
  std::string mode = "exhaustive";
};

Result run_pack(const PackArgs& a, const Common& c) {
  if (a.m < 1) throw mml::ValidationError("--m must be >= 1");
  mml::SignPacking p;
  if (a.mode == "random") {
    const std::size_t target = a.target.value_or(mml::guaranteed_packing_size(a.m));
    p = mml::randomized_packing(a.m, target, c.seed);
  } else {
    p = mml::build_packing(a.m, a.target);
  }
  Result r;
  r.primary = mml::io::to_json(p);
  r.csv = packing_csv(p);
  r.derived = {{"size", p.size()},
               {"required_hamming", mml::required_hamming(a.m)},
               {"guaranteed_size", mml::guaranteed_packing_size(a.m)}};
  return r;
}

// ---- family -----------------------------------------------------------------

struct FamilyArgs {
  std::string kind;
  std::string graph;
  std::optional<int> d;
  std::optional<std::size_t> n;
  std::optional<double> c2;
  std::optional<double> delta;
  std::optional<std::size_t> size;
  bool full = false;
  std::string mode = "exhaustive";
};

Result run_family(const FamilyArgs& a, const Common& c) {
  mml::io::FamilySpec spec;
  spec.kind = mml::io::parse_family_kind(a.kind);
  mml::FamilyOptions opts;
  opts.mode = a.mode == "random" ? mml::FamilyOptions::Mode::random : mml::FamilyOptions::Mode::exhaustive;
  opts.target = a.size;
  opts.full = a.full;
  opts.seed = c.seed;

  if (a.delta && (a.n || a.c2)) throw mml::ValidationError("give either --delta or --n with --c2");
  if (!a.delta && !(a.n && a.c2)) throw mml::ValidationError("--n and --c2 (or --delta) are required");
  if (a.n && *a.n == 0) throw mml::ValidationError("--n must be positive");

  if (spec.kind == mml::io::FamilyKind::product) {
    int d = 0;
    if (a.d)
      d = *a.d;
    else if (!a.graph.empty())
      d = load_graph(a.graph).dim();
    else
      throw mml::ValidationError("product family needs --d or --graph");
    const auto fam = a.delta ? mml::make_product_family(d, *a.delta, opts)
                             : mml::build_product_family(d, *a.n, *a.c2, opts);
    spec.graph = mml::standard_graph(mml::GraphKind::empty, d);
    spec.delta = fam.delta;
    spec.packing = fam.packing;
  } else {
    if (a.graph.empty()) throw mml::ValidationError("--graph is required");
    const mml::Graph g = load_graph(a.graph);
    if (spec.kind == mml::io::FamilyKind::gaussian) {
      const auto fam = a.delta ? mml::make_hard_gaussian_family(g, *a.delta, opts)
                               : mml::build_hard_gaussian_family(g, *a.n, *a.c2, opts);
      spec.graph = fam.graph;
      spec.delta = fam.delta;
      spec.packing = fam.packing;
    } else {
      const auto fam = a.delta ? mml::make_hard_ising_family(g, *a.delta, opts)
                               : mml::build_hard_ising_family(g, *a.n, *a.c2, opts);
      spec.graph = fam.graph;
      spec.delta = fam.delta;
      spec.packing = fam.packing;
    }
  }
  spec.n = a.n;
  spec.c2 = a.c2;

  Result r;
  r.primary = mml::io::family_to_json(spec);
  r.derived = {{"delta", spec.delta}, {"members", spec.packing.size()}, {"m", spec.packing.m}};
  return r;
}

// ---- risk -------------------------------------------------------------------

struct RiskArgs {
  std::string family;
  std::vector<std::size_t> n_grid;
  std::size_t trials = 0;
  std::optional<double> fixed_delta;
  bool coupled = false;
  std::string inject;
  std::string plot_data;
  std::size_t eval_count = 100'000;
};

double parse_injected_exponent(const std::string& text) {
  if (text.rfind("n^", 0) != 0) throw mml::ValidationError("--inject expects the form n^<exponent>");
  try {
    std::size_t used = 0;
    const double e = std::stod(text.substr(2), &used);
    if (used != text.size() - 2) throw std::invalid_argument("trailing");
    return e;
  } catch (const std::exception&) {
    throw mml::ValidationError("--inject exponent is not a number: '" + text + "'");
  }
}

Result run_risk(const RiskArgs& a, const Common& c) {
  if (a.n_grid.empty()) throw mml::ValidationError("--n-grid must be non-empty");
  for (std::size_t i = 0; i < a.n_grid.size(); ++i) {
    if (a.n_grid[i] == 0) throw mml::ValidationError("--n-grid entries must be positive");
    if (i && a.n_grid[i] <= a.n_grid[i - 1]) throw mml::ValidationError("--n-grid must be strictly increasing");
  }

  mml::RiskCurve curve;
  json config = {{"n_grid", a.n_grid}, {"seed", c.seed}};
  if (!a.inject.empty()) {
    const double exponent = parse_injected_exponent(a.inject);
    curve = mml::injected_risk_curve(a.n_grid, exponent);
    config["mode"] = "injected";
    config["exponent"] = exponent;
  } else {
    if (a.family.empty()) throw mml::ValidationError("--family is required");
    if (a.trials == 0) throw mml::ValidationError("--trials must be positive");
    if (a.coupled && a.fixed_delta) throw mml::ValidationError("--coupled and --fixed-delta are exclusive");
    const auto spec = load_family(a.family);
    if (a.coupled && !spec.c2) throw mml::ValidationError("--coupled needs a family file with field 'c2'");

    mml::DeltaOf delta_of;
    if (a.coupled) {
      const double c2 = *spec.c2;
      delta_of = [c2](std::size_t n) { return c2 / std::sqrt(static_cast<double>(n)); };
    } else {
      const double delta = a.fixed_delta.value_or(spec.delta);
      delta_of = [delta](std::size_t) { return delta; };
    }
    const std::uint64_t eval_seed = mml::derive_seed(c.seed, "gaussian-eval");
    const std::uint64_t tv_seed = mml::derive_seed(c.seed, "gaussian-tv");
    const std::size_t eval_count = a.eval_count;
    mml::ClassBuilder build = [&spec, delta_of, eval_seed, tv_seed,
                               eval_count](std::size_t n) -> std::unique_ptr<mml::FiniteClass> {
      const double delta = delta_of(n);
      if (spec.kind == mml::io::FamilyKind::gaussian)
        return std::make_unique<mml::GaussianClass>(
            mml::io::gaussian_members(spec, delta),
            mml::GaussianClass::Options{eval_count, eval_seed, eval_count, tv_seed});
      return std::make_unique<mml::IsingClass>(mml::io::ising_members(spec, delta));
    };
    curve = mml::risk_curve(build, a.n_grid, a.trials, c.seed, delta_of);
    config["mode"] = a.coupled ? "coupled" : "fixed-family";
    config["family"] = mml::io::to_string(spec.kind);
    config["trials"] = a.trials;
    config["members"] = spec.packing.size();
    if (spec.kind == mml::io::FamilyKind::gaussian) config["eval_count"] = eval_count;
  }

  if (!a.plot_data.empty()) mml::io::write_file(a.plot_data, mml::io::plot_data_csv(curve));

  Result r;
  r.primary = mml::io::to_json(curve);
  r.primary["config"] = config;
  r.primary["risk_definition"] = "max over the constructed family of the trial-mean TV to the truth";
  r.csv = mml::io::risk_records_csv(curve);
  r.derived = {{"config", config}, {"fit", r.primary["fit"]}};
  return r;
}

// ---- bound ------------------------------------------------------------------

struct BoundArgs {
  std::string type;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> size;
  std::optional<double> log2_size;
  std::vector<std::size_t> n;
  std::string family;
  int d = 0;
  std::size_t m = 0;
  double c = 1.0;
  std::vector<double> eps;
};

Result run_bound(const BoundArgs& a, const Common&) {
  json rows = json::array();
  std::string csv = "family,d,m,n,bound_type,value,constants\n";
  auto add = [&](const std::string& family, std::optional<int> d, std::optional<std::size_t> m, std::size_t n,
                 const std::string& type, double value, const json& constants) {
    json row{{"family", family}, {"n", n}, {"bound_type", type}, {"value", value}, {"constants", constants}};
    row["d"] = d ? json(*d) : json(nullptr);
    row["m"] = m ? json(*m) : json(nullptr);
    rows.push_back(row);
    std::string consts;
    for (auto it = constants.begin(); it != constants.end(); ++it) {
      if (!consts.empty()) consts += ";";
      consts += it.key() + "=" + (it->is_number_float() ? format_double(it->get<double>()) : it->dump());
    }
    csv += family + "," + (d ? std::to_string(*d) : "") + "," + (m ? std::to_string(*m) : "") + "," +
           std::to_string(n) + "," + type + "," + format_double(value) + "," + consts + "\n";
  };

  if (a.type == "fano") {
    if (a.n.empty()) throw mml::ValidationError("--n is required");
    if (a.size.has_value() == a.log2_size.has_value())
      throw mml::ValidationError("give exactly one of --size and --log2-size");
    const double size = a.size ? *a.size : std::exp2(*a.log2_size);
    for (std::size_t n : a.n) {
      const double v = mml::fano_lower_bound({a.alpha, a.beta, size, n});
      add("finite", std::nullopt, std::nullopt, n, "fano", v, {{"alpha", a.alpha}, {"beta", a.beta}, {"size", size}});
    }
  } else if (a.type == "vc") {
    if (a.n.empty()) throw mml::ValidationError("--n is required");
    const auto fam = mml::parse_class_family(a.family);
    const std::size_t vc = mml::yatracos_vc_dimension(fam, a.d, a.m);
    for (std::size_t n : a.n) {
      const double v = mml::vc_upper_bound({fam, a.d, a.m, n}, a.c);
      add(std::string(mml::to_string(fam)), a.d, a.m, n, "vc", v, {{"c", a.c}, {"vc_dimension", vc}});
    }
  } else {
    if (a.eps.empty()) throw mml::ValidationError("--eps is required");
    const auto fam = mml::parse_class_family(a.family);
    for (double eps : a.eps) {
      const std::size_t n = mml::sample_complexity(fam, a.d, a.m, eps, a.c);
      add(std::string(mml::to_string(fam)), a.d, a.m, n, "sample-complexity", static_cast<double>(n),
          {{"c", a.c}, {"eps", eps}});
    }
  }
  Result r;
  r.primary = rows;
  r.csv = csv;
  return r;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string check = "all";
  std::string report;
};

Result run_verify(const VerifyArgs& a, const Common& c) {
  std::vector<std::string> names;
  if (a.check == "all")
    names = mml::verify::check_names();
  else
    names.push_back(a.check);

  Result r;
  json reports = json::array();
  json summary = json::object();
  for (const auto& name : names) {
    const auto rep = mml::verify::run_check(name, c.seed);
    reports.push_back(mml::verify::to_json(rep));
    summary[name] = rep.passed ? "PASS" : "FAIL";
    if (!rep.passed) r.exit_code = kCheckFailed;
  }
  r.primary = a.check == "all" ? json{{"suite_seed", c.seed}, {"reports", reports}} : reports[0];
  if (!a.report.empty()) mml::io::write_file(a.report, r.primary.dump(2) + "\n");
  r.derived = {{"status", summary}};
  return r;
}

// ---- driver -----------------------------------------------------------------

json option_values(const CLI::App* sub) {
  json inputs = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h") continue;
    const auto& res = opt->results();
    const std::string key = opt->get_name();
    if (opt->count() == 0)
      inputs[key] = opt->get_default_str().empty() ? json(nullptr) : json(opt->get_default_str());
    else
      inputs[key] = res.size() == 1 ? json(res[0]) : json(res);
  }
  return inputs;
}

void emit(const Result& r, const Common& c, const std::string& command, const std::vector<std::string>& args,
          const CLI::App* sub) {
  const bool csv = wants_csv(c);
  if (csv && !r.csv) throw mml::ValidationError("command '" + command + "' has no CSV output");
  const std::string body = csv ? *r.csv : r.primary.dump(2) + "\n";
  if (c.out.empty())
    std::cout << body;
  else
    mml::io::write_file(c.out, body);

  json manifest = {{"tool", "mml"},
                   {"version", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"command", command},
                   {"argv", args},
                   {"seed", c.seed},
                   {"jobs", c.jobs},
                   {"exact_cutoff", mml::exact_cutoff()},
                   {"inputs", option_values(sub)},
                   {"derived", r.derived},
                   {"output", c.out.empty() ? json("stdout") : json(c.out)},
                   {"output_format", csv ? "csv" : "json"}};
  if (!c.manifest.empty())
    mml::io::write_file(c.manifest, manifest.dump(2) + "\n");
  else if (!c.out.empty())
    mml::io::write_file(c.out + ".manifest.json", manifest.dump(2) + "\n");
  else
    std::cerr << manifest.dump() << "\n";
}

int run(const std::vector<std::string>& args, int depth = 0);

int run_replay(const std::string& path, int depth) {
  if (depth > 0) throw mml::ValidationError("a replayed manifest cannot itself be a replay");
  json m;
  try {
    m = json::parse(mml::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw mml::ValidationError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array())
    throw mml::ValidationError("manifest field 'argv' is missing or not an array");
  return run(m["argv"].get<std::vector<std::string>>(), depth + 1);
}

int run(const std::vector<std::string>& args, int depth) {
  CLI::App app{"Minimax density estimation experiments on Gaussian and Ising graphical models", "mml"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--seed", c.seed, "Master seed")->default_val(0);
  app.add_option("--out", c.out, "Write the primary output here; .csv selects CSV");
  app.add_option("--manifest", c.manifest, "Manifest path (default <out>.manifest.json, or stderr)");
  app.add_option("--format", c.format, "Override the output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", c.jobs, "Worker threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);

  PackArgs pack;
  auto* pack_cmd = app.add_subcommand("pack", "Greedy sign-vector packing");
  pack_cmd->add_option("--m", pack.m, "Vector length")->required();
  pack_cmd->add_option("--target", pack.target, "Stop after this many vectors");
  pack_cmd->add_option("--mode", pack.mode, "exhaustive or random")
      ->check(CLI::IsMember({"exhaustive", "random"}))
      ->capture_default_str();

  FamilyArgs family;
  auto* family_cmd = app.add_subcommand("family", "Build a hard family");
  family_cmd->add_option("kind", family.kind, "gaussian, ising or product")
      ->required()
      ->check(CLI::IsMember({"gaussian", "ising", "product"}));
  family_cmd->add_option("--graph", family.graph, "Graph file or kind:d shorthand");
  family_cmd->add_option("--d", family.d, "Dimension for product families");
  family_cmd->add_option("--n", family.n, "Sample size; delta = c2 / sqrt(n)");
  family_cmd->add_option("--c2", family.c2, "Scale constant");
  family_cmd->add_option("--delta", family.delta, "Use this delta directly");
  family_cmd->add_option("--size", family.size, "Number of members (default ceil(2^(m/5)))");
  family_cmd->add_flag("--full", family.full, "Use the full exhaustive greedy packing");
  family_cmd->add_option("--mode", family.mode, "Packing mode")
      ->check(CLI::IsMember({"exhaustive", "random"}))
      ->capture_default_str();

  RiskArgs risk;
  auto* risk_cmd = app.add_subcommand("risk", "Empirical risk curve of the minimum-distance estimator");
  risk_cmd->add_option("--family", risk.family, "Family JSON file");
  risk_cmd->add_option("--n-grid", risk.n_grid, "Comma-separated sample sizes")->delimiter(',')->required();
  risk_cmd->add_option("--trials", risk.trials, "Trials per (member, n)")->capture_default_str();
  risk_cmd->add_option("--fixed-delta", risk.fixed_delta, "Keep the family at this delta for every n");
  risk_cmd->add_flag("--coupled", risk.coupled, "Rebuild the family with delta = c2 / sqrt(n) at each n");
  risk_cmd->add_option("--inject", risk.inject, "Synthetic curve, e.g. n^-0.5");
  risk_cmd->add_option("--plot-data", risk.plot_data, "Write n,mean_risk,stderr triples here");
  risk_cmd->add_option("--eval-count", risk.eval_count, "Monte Carlo points per Gaussian candidate")
      ->capture_default_str();

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Fano, VC and sample-complexity tables");
  bound_cmd->add_option("type", bound.type, "fano, vc or sample-complexity")
      ->required()
      ->check(CLI::IsMember({"fano", "vc", "sample-complexity"}));
  bound_cmd->add_option("--alpha", bound.alpha, "Pairwise L1 separation");
  bound_cmd->add_option("--beta", bound.beta, "Pairwise KL bound");
  bound_cmd->add_option("--size", bound.size, "Class size");
  bound_cmd->add_option("--log2-size", bound.log2_size, "log2 of the class size");
  bound_cmd->add_option("--n", bound.n, "Sample sizes")->delimiter(',');
  bound_cmd->add_option("--family", bound.family, "gaussian, ising, ising-no-field, *-unknown-graph");
  bound_cmd->add_option("--d", bound.d, "Dimension");
  bound_cmd->add_option("--m", bound.m, "Edge count");
  bound_cmd->add_option("--c", bound.c, "Universal constant")->capture_default_str();
  bound_cmd->add_option("--eps", bound.eps, "Target risks")->delimiter(',');

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Numerical checks of the divergence and partition bounds");
  verify_cmd->add_option("--check", verify.check, "Check name or all")->capture_default_str();
  verify_cmd->add_option("--report", verify.report, "Also write the JSON report here");

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", replay_path, "Manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  if (c.jobs > 0) mml::kernels::set_num_threads(c.jobs);
  if (*replay_cmd) return run_replay(replay_path, depth);

  Result r;
  CLI::App* sub = nullptr;
  std::string command;
  if (*pack_cmd) {
    r = run_pack(pack, c), sub = pack_cmd, command = "pack";
  } else if (*family_cmd) {
    r = run_family(family, c), sub = family_cmd, command = "family";
  } else if (*risk_cmd) {
    r = run_risk(risk, c), sub = risk_cmd, command = "risk";
  } else if (*bound_cmd) {
    r = run_bound(bound, c), sub = bound_cmd, command = "bound";
  } else {
    r = run_verify(verify, c), sub = verify_cmd, command = "verify";
  }
  emit(r, c, command, args, sub);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const mml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

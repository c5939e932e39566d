#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mml::verify {

using json = nlohmann::json;

// Outcome of one named check. A failure entry carries the seed and instance
// needed to reproduce it. Constants the bounds leave abstract are fitted over
// the sweep and reported, never compared against guessed values.
struct CheckReport {
  std::string check;
  bool passed = true;
  json fitted_constants = json::object();
  json failures = json::array();
  json details = json::object();

  void fail(json instance) {
    passed = false;
    failures.push_back(std::move(instance));
  }
};

json to_json(const CheckReport& report);

// Sweep over random graphs with zero-field hard-family interactions.
struct IsingSweep {
  std::size_t instances = 500;
  int d_min = 2;
  int d_max = 12;
  double max_frobenius = 0.25;  // upper end of the ||W||_F sweep
};

CheckReport verify_psd(std::size_t trials, int d_max, std::uint64_t seed);
CheckReport verify_frobenius_facts(std::size_t trials, std::uint64_t seed);
CheckReport verify_kl_bounds_gaussian(std::size_t pairs, std::uint64_t seed);
CheckReport verify_tv_lower_gaussian(std::size_t pairs, std::size_t count, std::uint64_t seed);
CheckReport verify_moment_identities(std::size_t trials, std::uint64_t seed);
CheckReport verify_exp_moment(const IsingSweep& sweep, std::uint64_t seed);
CheckReport verify_partition_bounds(const IsingSweep& sweep, std::uint64_t seed);
CheckReport verify_kl_bounds_ising(const IsingSweep& sweep, std::uint64_t seed);
CheckReport verify_l1_lower_ising(const IsingSweep& sweep, std::uint64_t seed);

// Check names accepted by run_check, in suite order.
const std::vector<std::string>& check_names();

// Runs a named check with defaults; its RNG is derived from (suite_seed, name).
// Throws ValidationError listing the valid names for an unknown name.
CheckReport run_check(std::string_view name, std::uint64_t suite_seed);

}  // namespace mml::verify

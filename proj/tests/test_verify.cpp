#include <doctest.h>

#include <string>

#include "mml/error.hpp"
#include "mml/verify.hpp"

TEST_CASE("psd check passes with seed 7") {
  const auto r = mml::verify::run_check("psd", 7);
  CHECK(r.passed);
  CHECK(r.failures.empty());
  CHECK(r.details["trials"] == 1000);
  // The out-of-hypothesis probe is reported but never asserted.
  CHECK(r.details.contains("out_of_hypothesis_probe"));
  const auto j = mml::verify::to_json(r);
  CHECK(j["status"] == "PASS");
  CHECK(j.contains("fitted_constants"));
}

TEST_CASE("checks are reproducible for a fixed suite seed") {
  const auto a = mml::verify::run_check("moments", 3);
  const auto b = mml::verify::run_check("moments", 3);
  CHECK(mml::verify::to_json(a) == mml::verify::to_json(b));
  CHECK(a.passed);
}

TEST_CASE("unknown check lists the valid names") {
  try {
    (void)mml::verify::run_check("bogus", 1);
    FAIL("expected error");
  } catch (const mml::ValidationError& e) {
    const std::string msg = e.what();
    for (const auto& n : mml::verify::check_names()) CHECK(msg.find(n) != std::string::npos);
  }
}

TEST_CASE("small sweeps of the ising checks pass") {
  mml::verify::IsingSweep sweep{60, 2, 8, 0.25};
  CHECK(mml::verify::verify_partition_bounds(sweep, 1).passed);
  CHECK(mml::verify::verify_kl_bounds_ising(sweep, 2).passed);
  CHECK(mml::verify::verify_frobenius_facts(200, 3).passed);
  CHECK(mml::verify::verify_kl_bounds_gaussian(100, 4).passed);
}

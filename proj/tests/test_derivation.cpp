#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsol/errors.hpp"
#include "dsol/flux_derivation.hpp"
#include "dsol/scenario.hpp"
#include "dsol/signaling.hpp"

#ifndef DSOL_SOURCE_DIR
#error "DSOL_SOURCE_DIR must point at the repository root"
#endif

namespace {

const std::string kSourceDir = DSOL_SOURCE_DIR;

dsol::derivation::ReferenceRanges load_committed_ranges() {
  return dsol::derivation::load_reference_ranges(
      kSourceDir + "/data/reference_ranges.txt");
}

double entry_flux(const std::vector<dsol::signaling::RegistryEntry>& entries,
                  int order, double slot_ns) {
  for (const auto& entry : entries) {
    if (entry.key.ppm_order == order && entry.key.slot_time_ns == slot_ns) {
      return entry.ns_min_db;
    }
  }
  FAIL("no entry for the requested operating point");
  return 0.0;
}

}  // namespace

TEST_CASE("reference range grids load with the expected shape") {
  const auto ranges = load_committed_ranges();
  CHECK(ranges.orders ==
        std::vector<int>{256, 128, 64, 32, 16, 8, 4});
  REQUIRE(ranges.outage_rows.size() == 7);
  REQUIRE(ranges.deterministic_rows.size() == 6);
  for (const auto& row : ranges.outage_rows) {
    CHECK(row.range_au.size() == ranges.orders.size());
  }
  for (const auto& row : ranges.deterministic_rows) {
    CHECK(row.range_au.size() == ranges.orders.size());
  }
  // Spot anchors, one per grid.
  CHECK(ranges.outage_rows.back().accuracy_urad == doctest::Approx(0.05));
  CHECK(ranges.outage_rows.back().range_au.front() ==
        doctest::Approx(45.350));
  CHECK(ranges.deterministic_rows[2].accuracy_urad == doctest::Approx(0.35));
  CHECK(ranges.deterministic_rows[2].range_au[2] == doctest::Approx(2.411));
}

TEST_CASE("derived registry reproduces the calibrated fluxes") {
  const auto ranges = load_committed_ranges();
  const auto entries = dsol::derivation::derive_registry(ranges);
  REQUIRE(entries.size() == 9);

  // Per-order requirements at the 256 ns reference slot.
  CHECK(std::abs(entry_flux(entries, 256, 256.0) - -40.9664) <= 2e-4);
  CHECK(std::abs(entry_flux(entries, 128, 256.0) - -38.3565) <= 2e-4);
  CHECK(entry_flux(entries, 64, 256.0) == -35.76);  // pinned anchor
  CHECK(std::abs(entry_flux(entries, 32, 256.0) - -33.1364) <= 2e-4);
  CHECK(std::abs(entry_flux(entries, 16, 256.0) - -30.5160) <= 2e-4);
  CHECK(std::abs(entry_flux(entries, 8, 256.0) - -27.9164) <= 2e-4);
  CHECK(std::abs(entry_flux(entries, 4, 256.0) - -25.3061) <= 2e-4);

  // Alternate slot times, both pinned to calibrated operating points.
  CHECK(std::abs(entry_flux(entries, 64, 64.0) - -32.0983) <= 2e-4);
  CHECK(std::abs(entry_flux(entries, 64, 16.0) - -28.2982) <= 2e-4);

  for (const auto& entry : entries) {
    CHECK(entry.key.code_rate == dsol::signaling::CodeRate{1, 3});
    CHECK(entry.key.n_b_phe_per_ns == doctest::Approx(1.21e-2));
  }
}

TEST_CASE("committed registry file matches a fresh derivation") {
  const auto ranges = load_committed_ranges();
  const auto entries = dsol::derivation::derive_registry(ranges);
  const std::string rendered = dsol::derivation::render_registry(entries);

  std::ifstream committed(kSourceDir + "/data/scppm_flux_requirements.txt");
  REQUIRE(committed.good());
  std::stringstream buffer;
  buffer << committed.rdbuf();
  CHECK(rendered == buffer.str());

  // The rendered registry parses back into the same table.
  const std::string temp_path = "test_derived_registry.txt";
  {
    std::ofstream out(temp_path);
    out << rendered;
  }
  const auto registry = dsol::signaling::RequiredFluxRegistry::load(temp_path);
  CHECK(registry.entries().size() == entries.size());
  for (const auto& entry : entries) {
    // The file format quantizes fluxes to 4 decimals.
    const double quantized = std::round(entry.ns_min_db * 1e4) / 1e4;
    CHECK(registry.required_flux_db(entry.key) ==
          doctest::Approx(quantized).epsilon(1e-12));
  }
  std::remove(temp_path.c_str());
}

TEST_CASE("reference range parser rejects malformed inputs") {
  const std::string path = "test_ranges_bad.txt";
  {
    std::ofstream out(path);
    out << "[outage]\n";  // no orders line first
    out << "1.00 0.1 0.1 0.1 0.1 0.1 0.1 0.1\n";
  }
  CHECK_THROWS_AS(dsol::derivation::load_reference_ranges(path),
                  dsol::ParseError);
  {
    std::ofstream out(path);
    out << "orders 256 128 64\n";
    out << "[outage]\n";
    out << "1.00 0.113 0.084\n";  // row arity mismatch
  }
  CHECK_THROWS_AS(dsol::derivation::load_reference_ranges(path),
                  dsol::ParseError);
  {
    std::ofstream out(path);
    out << "orders 256 128\n";
    out << "1.00 0.113 0.084\n";  // row outside any section
  }
  CHECK_THROWS_AS(dsol::derivation::load_reference_ranges(path),
                  dsol::ParseError);
  std::remove(path.c_str());

  CHECK_THROWS_AS(
      dsol::derivation::load_reference_ranges("no_such_ranges.txt"),
      dsol::ParseError);
}

TEST_CASE("scenario files load into consistent scenarios") {
  const auto mars =
      dsol::scenario::load_scenario(kSourceDir + "/scenarios/mars.scn");
  CHECK(mars.scenario.wavelength_m == doctest::Approx(1064e-9));
  CHECK(mars.scenario.range_m ==
        doctest::Approx(2.68 * 1.49597871e11));
  CHECK(mars.scenario.p_avg_w == doctest::Approx(5.0));
  CHECK(mars.scenario.tx.gain_db == doctest::Approx(129.0));
  CHECK(mars.scenario.tx.efficiency_db == doctest::Approx(-5.0));
  CHECK(mars.scenario.other_losses_db == doctest::Approx(-4.0));
  CHECK(mars.scenario.pointing.approach ==
        dsol::budget::PointingApproach::kDeterministic);
  CHECK(mars.scenario.pointing.tx_accuracy_rad == doctest::Approx(0.35e-6));
  CHECK(mars.scenario.scppm.ppm_order == 64);
  CHECK(mars.scenario.scppm.code_rate ==
        dsol::signaling::CodeRate{1, 3});
  CHECK(mars.scenario.scppm.slot_time_s == doctest::Approx(256e-9));
  CHECK(mars.scenario.n_b_phe_per_ns == doctest::Approx(1.21e-2));
  CHECK(mars.scenario.required_margin_db == doctest::Approx(3.0));
  REQUIRE(mars.scenario.fer_target.has_value());
  CHECK(*mars.scenario.fer_target == doctest::Approx(9.0e-5));
  CHECK(mars.registry_path.find("scppm_flux_requirements.txt") !=
        std::string::npos);

  const auto venus =
      dsol::scenario::load_scenario(kSourceDir + "/scenarios/venus.scn");
  CHECK(venus.scenario.range_m == doctest::Approx(1.74 * 1.49597871e11));
  CHECK(venus.scenario.scppm.slot_time_s == doctest::Approx(64e-9));
  CHECK(venus.scenario.required_margin_db == doctest::Approx(2.0));
  CHECK_FALSE(venus.scenario.fer_target.has_value());
}

TEST_CASE("scenario parser rejects unknown and missing keys") {
  const std::string path = "test_scenario_bad.scn";
  const std::string body =
      "[link]\n"
      "wavelength_nm = 1064\n"
      "range_au = 2.68\n"
      "average_power_w = 5\n"
      "tx_gain_db = 129\n"
      "tx_efficiency_db = -5\n"
      "rx_gain_db = 129\n"
      "rx_efficiency_db = -5\n"
      "other_losses_db = -4\n"
      "required_link_margin_db = 3\n"
      "[pointing]\n"
      "approach = deterministic\n"
      "loss_model = gaussian\n"
      "tx_theta_max_urad = 0.35\n"
      "rx_theta_max_urad = 0.35\n"
      "[signaling]\n"
      "ppm_order = 64\n"
      "code_rate = 1/3\n"
      "slot_time_ns = 256\n"
      "[channel]\n"
      "background_flux_phe_per_ns = 1.21e-2\n"
      "[registry]\n"
      "path = registry.txt\n";
  {
    std::ofstream out(path);
    out << body << "mystery_key = 1\n";
  }
  CHECK_THROWS_AS(dsol::scenario::load_scenario(path), dsol::ParseError);
  {
    std::ofstream out(path);
    out << body << "path = other.txt\n";  // duplicate key in [registry]
  }
  CHECK_THROWS_AS(dsol::scenario::load_scenario(path), dsol::ParseError);
  {
    // Drop the [channel] section entirely.
    const auto cut = body.find("[channel]");
    const auto resume = body.find("[registry]");
    std::ofstream out(path);
    out << body.substr(0, cut) << body.substr(resume);
  }
  CHECK_THROWS_AS(dsol::scenario::load_scenario(path), dsol::ParseError);
  {
    std::ofstream out(path);
    out << body;
  }
  CHECK_NOTHROW(dsol::scenario::load_scenario(path));
  std::remove(path.c_str());
}

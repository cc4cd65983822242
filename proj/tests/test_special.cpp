#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "dsol/special.hpp"
#include "dsol/units.hpp"
#include "oracles.hpp"

namespace {

// Near zeros a relative error on J1 itself is meaningless, so errors are
// measured against the larger of |J1(x)| and the oscillation envelope.
double j1_error_scale(double x, double reference) {
  const double ax = std::max(std::abs(x), 0.5);
  const double envelope = std::sqrt(2.0 / (dsol::kPi * ax));
  return std::max(std::abs(reference), envelope);
}

}  // namespace

TEST_CASE("bessel_j1 tracks the binary128 series oracle over the grid") {
  double worst = 0.0;
  for (double x = -20.0; x <= 20.0; x += 0.0137) {
    const double ref = oracle::bessel_j1(x);
    const double got = dsol::bessel_j1(x);
    const double err = std::abs(got - ref) / j1_error_scale(x, ref);
    worst = std::max(worst, err);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("bessel_j1 frozen values") {
  CHECK(dsol::bessel_j1(2.0) ==
        doctest::Approx(0.5767248077568734).epsilon(1e-13));
  CHECK(dsol::bessel_j1(5.0) ==
        doctest::Approx(-0.32757913759146522).epsilon(1e-12));
  CHECK(dsol::bessel_j1(12.0) ==
        doctest::Approx(-0.2234471044906276).epsilon(1e-12));
  CHECK(dsol::bessel_j1(17.5) ==
        doctest::Approx(-0.16341996942575491).epsilon(1e-11));
  CHECK(dsol::bessel_j1(20.0) ==
        doctest::Approx(0.0668331241758502).epsilon(1e-10));
}

TEST_CASE("bessel_j1 basic structure") {
  CHECK(dsol::bessel_j1(0.0) == 0.0);
  for (double x : {0.3, 1.7, 6.2, 13.9}) {
    CHECK(dsol::bessel_j1(-x) == -dsol::bessel_j1(x));
  }
  CHECK(std::abs(dsol::bessel_j1(dsol::kBesselJ1FirstZero)) < 1e-11);
  // The zero constant actually brackets a sign change.
  CHECK(dsol::bessel_j1(dsol::kBesselJ1FirstZero - 1e-6) > 0.0);
  CHECK(dsol::bessel_j1(dsol::kBesselJ1FirstZero + 1e-6) < 0.0);
}

TEST_CASE("bessel_i0 matches the oracle and frozen values") {
  CHECK(dsol::bessel_i0(0.0) == 1.0);
  CHECK(dsol::bessel_i0(1.0) ==
        doctest::Approx(1.2660658777520083).epsilon(1e-14));
  CHECK(dsol::bessel_i0(5.0) ==
        doctest::Approx(27.239871823604447).epsilon(1e-13));
  for (double x = 0.0; x < 29.9; x += 0.371) {
    CHECK(dsol::bessel_i0(x) ==
          doctest::Approx(oracle::bessel_i0(x)).epsilon(1e-12));
    CHECK(dsol::bessel_i0(-x) == dsol::bessel_i0(x));
  }
}

TEST_CASE("log_bessel_i0 agrees with log(I0) on both branches") {
  for (double x = 0.0; x <= 280.0; x += 1.73) {
    const double ref = std::log(oracle::bessel_i0(x));
    CHECK(dsol::log_bessel_i0(x) ==
          doctest::Approx(ref).epsilon(1e-11));
  }
  CHECK(dsol::log_bessel_i0(100.0) ==
        doctest::Approx(96.77973268994258).epsilon(1e-12));
  CHECK(dsol::log_bessel_i0(35.0) ==
        doctest::Approx(32.30701147548524).epsilon(1e-12));
  // No jump at the series/asymptotic switch.
  CHECK(dsol::log_bessel_i0(30.0 - 1e-9) ==
        doctest::Approx(dsol::log_bessel_i0(30.0 + 1e-9)).epsilon(1e-10));
}

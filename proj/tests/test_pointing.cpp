#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dsol/errors.hpp"
#include "dsol/pointing.hpp"
#include "dsol/quadrature.hpp"
#include "dsol/random.hpp"
#include "dsol/special.hpp"
#include "dsol/units.hpp"

using dsol::pointing::AngularErrorModel;
using dsol::pointing::PointingLossModel;

TEST_CASE("factories reject out-of-domain parameters") {
  CHECK_THROWS_AS(AngularErrorModel::rayleigh(0.0), dsol::DomainError);
  CHECK_THROWS_AS(AngularErrorModel::rayleigh(-1e-6), dsol::DomainError);
  CHECK_THROWS_AS(AngularErrorModel::rician(0.0, 1e-6), dsol::DomainError);
  CHECK_THROWS_AS(AngularErrorModel::rician(1e-6, -1e-6), dsol::DomainError);
  CHECK_THROWS_AS(AngularErrorModel::worst_case(-1e-6), dsol::DomainError);
  CHECK_NOTHROW(AngularErrorModel::worst_case(0.0));
  CHECK_THROWS_AS(PointingLossModel::exp_approx(0.0), dsol::DomainError);
  CHECK_THROWS_AS(PointingLossModel::exp_approx(-0.1), dsol::DomainError);
}

TEST_CASE("rayleigh density frozen value and negative-angle rejection") {
  const auto model = AngularErrorModel::rayleigh(1e-6);
  CHECK(dsol::pointing::error_pdf(model, 1e-6) ==
        doctest::Approx(606530.6597126335).epsilon(1e-12));
  CHECK_THROWS_AS(dsol::pointing::error_pdf(model, -1e-9), dsol::DomainError);
}

TEST_CASE("densities integrate to one") {
  const std::vector<AngularErrorModel> models = {
      AngularErrorModel::rayleigh(1.0),
      AngularErrorModel::rayleigh(0.25),
      AngularErrorModel::rician(1.0, 0.0),
      AngularErrorModel::rician(1.0, 2.0),
      AngularErrorModel::rician(0.5, 3.0),
      AngularErrorModel::rician(2.0, 0.7),
  };
  for (const auto& model : models) {
    const double upper = model.eta() + 12.0 * model.sigma();
    const double mass = dsol::integrate(
        [&](double t) { return dsol::pointing::error_pdf(model, t); }, 0.0,
        upper, 1e-11);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("rayleigh cdf closed form equals the integrated density") {
  const auto model = AngularErrorModel::rayleigh(0.8);
  for (double theta : {0.1, 0.35, 0.8, 1.7, 3.0}) {
    const double integrated = dsol::integrate(
        [&](double t) { return dsol::pointing::error_pdf(model, t); }, 0.0,
        theta, 1e-12);
    CHECK(dsol::pointing::error_cdf(model, theta) ==
          doctest::Approx(integrated).epsilon(1e-10));
  }
}

TEST_CASE("rician with zero bias degenerates to rayleigh") {
  const auto rayleigh = AngularErrorModel::rayleigh(0.6);
  const auto rician = AngularErrorModel::rician(0.6, 0.0);
  for (double theta : {0.01, 0.2, 0.6, 1.3, 2.9}) {
    CHECK(dsol::pointing::error_pdf(rician, theta) ==
          doctest::Approx(dsol::pointing::error_pdf(rayleigh, theta))
              .epsilon(1e-12));
    CHECK(dsol::pointing::error_cdf(rician, theta) ==
          doctest::Approx(dsol::pointing::error_cdf(rayleigh, theta))
              .epsilon(1e-9));
  }
}

TEST_CASE("rayleigh sampling is exactly the inverse-cdf transform") {
  const double sigma = 0.35e-6;
  const auto model = AngularErrorModel::rayleigh(sigma);
  dsol::RandomStream sampled(7);
  dsol::RandomStream reference(7);
  for (int i = 0; i < 100; ++i) {
    const double expected =
        dsol::rayleigh_from_uniform(sigma, reference.uniform_open01());
    CHECK(dsol::pointing::error_sample(model, sampled) == expected);
  }
}

TEST_CASE("rayleigh sample mean matches its analytic value") {
  const double sigma = 1.3;
  const auto model = AngularErrorModel::rayleigh(sigma);
  dsol::RandomStream stream(42);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += dsol::pointing::error_sample(model, stream);
  }
  const double mean = sum / n;
  const double expected = sigma * std::sqrt(dsol::kPi / 2.0);
  const double std_error =
      sigma * std::sqrt((2.0 - dsol::kPi / 2.0) / n);
  CHECK(std::abs(mean - expected) <= 3.0 * std_error);
}

TEST_CASE("rician samples follow the rician distribution") {
  const double sigma = 1.0;
  const double eta = 2.0;
  const auto model = AngularErrorModel::rician(sigma, eta);
  dsol::RandomStream stream(2024);
  const int n = 100000;
  const int bins = 24;
  const double upper = eta + 6.0 * sigma;
  std::vector<int> counts(bins + 1, 0);
  for (int i = 0; i < n; ++i) {
    const double theta = dsol::pointing::error_sample(model, stream);
    const int bin = theta >= upper
                        ? bins
                        : static_cast<int>(theta / upper * bins);
    ++counts[bin];
  }
  double chi2 = 0.0;
  double prev_cdf = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double edge = upper * (b + 1) / bins;
    const double cdf = dsol::pointing::error_cdf(model, edge);
    const double expect = n * (cdf - prev_cdf);
    prev_cdf = cdf;
    if (expect < 5.0) continue;  // sparse shoulder bins
    chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
  }
  // ~20 effective degrees of freedom; 60 sits far beyond the 0.999
  // critical value, and the seed is fixed anyway.
  CHECK(chi2 < 60.0);
}

TEST_CASE("worst-case model has samples but no distribution") {
  const auto model = AngularErrorModel::worst_case(0.35e-6);
  CHECK_THROWS_AS(dsol::pointing::error_pdf(model, 1e-7), dsol::DomainError);
  CHECK_THROWS_AS(dsol::pointing::error_cdf(model, 1e-7), dsol::DomainError);
  dsol::RandomStream stream(1);
  CHECK(dsol::pointing::error_sample(model, stream) == 0.35e-6);
}

TEST_CASE("all loss models are lossless on boresight") {
  const double gain = dsol::linear_from_db(129.0);
  for (const auto& model :
       {PointingLossModel::gaussian_beam(), PointingLossModel::exp_approx(),
        PointingLossModel::circular_aperture()}) {
    CHECK(dsol::pointing::loss_fraction(model, gain, 0.0) == 1.0);
    CHECK(dsol::pointing::attenuation_nats(model, gain, 0.0) == 0.0);
  }
}

TEST_CASE("gaussian-beam attenuation at the reference operating point") {
  const auto model = PointingLossModel::gaussian_beam();
  const double gain = dsol::linear_from_db(129.0);
  const double theta = 0.35e-6;
  const double per_side =
      dsol::db_from_nats(dsol::pointing::attenuation_nats(model, gain, theta));
  CHECK(2.0 * per_side ==
        doctest::Approx(8.451823044437313).epsilon(1e-12));
  CHECK(dsol::pointing::loss_fraction(model, gain, theta) ==
        doctest::Approx(std::exp(-gain * theta * theta)).epsilon(1e-15));
}

TEST_CASE("aperture pattern frozen value at sqrt(G)*theta = 2") {
  const auto model = PointingLossModel::circular_aperture();
  // sqrt(4e12) * 1e-6 = 2, where 2 J1(x)/x = J1(2).
  CHECK(dsol::pointing::loss_fraction(model, 4e12, 1e-6) ==
        doctest::Approx(0.33261150388220256).epsilon(1e-12));
}

TEST_CASE("exp-approx with alpha = 1 is the gaussian beam") {
  const auto exp1 = PointingLossModel::exp_approx(1.0);
  const auto gauss = PointingLossModel::gaussian_beam();
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(dsol::pointing::attenuation_nats(exp1, 1.0, x) ==
          dsol::pointing::attenuation_nats(gauss, 1.0, x));
  }
}

TEST_CASE("exp-approx tracks the aperture pattern in the low-loss region") {
  const auto aperture = PointingLossModel::circular_aperture();
  const auto approx = PointingLossModel::exp_approx();
  double worst_gap_db = 0.0;
  for (double x = 0.0; x <= 1.2; x += 0.004) {
    const double approx_db =
        dsol::db_from_nats(dsol::pointing::attenuation_nats(approx, 1.0, x));
    if (approx_db > 0.5) break;
    const double aperture_db =
        dsol::db_from_nats(dsol::pointing::attenuation_nats(aperture, 1.0, x));
    worst_gap_db = std::max(worst_gap_db, std::abs(aperture_db - approx_db));
  }
  CHECK(worst_gap_db <= 0.2);
}

TEST_CASE("aperture attenuation grows monotonically across the main lobe") {
  const auto model = PointingLossModel::circular_aperture();
  double prev = 0.0;
  for (double x = 0.02; x < dsol::kBesselJ1FirstZero; x += 0.02) {
    const double att = dsol::pointing::attenuation_nats(model, 1.0, x);
    CHECK(att > prev);
    prev = att;
  }
  // Effectively opaque at the null itself.
  CHECK(dsol::pointing::attenuation_nats(model, 1.0,
                                         dsol::kBesselJ1FirstZero) > 40.0);
}

TEST_CASE("first sidelobe attenuation matches the known pattern level") {
  const double db = dsol::db_from_nats(
      dsol::pointing::first_sidelobe_attenuation_nats());
  CHECK(db == doctest::Approx(17.570149934295287).epsilon(1e-9));
}

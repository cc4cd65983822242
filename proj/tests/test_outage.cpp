#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "dsol/errors.hpp"
#include "dsol/outage.hpp"
#include "dsol/pointing.hpp"
#include "dsol/random.hpp"
#include "dsol/units.hpp"

using dsol::outage::LinkEndPointing;
using dsol::pointing::AngularErrorModel;
using dsol::pointing::PointingLossModel;

namespace {

LinkEndPointing rayleigh_end(double gain_linear, double sigma,
                             PointingLossModel loss =
                                 PointingLossModel::gaussian_beam()) {
  return LinkEndPointing{gain_linear, loss,
                         AngularErrorModel::rayleigh(sigma)};
}

}  // namespace

TEST_CASE("closed form reproduces hand-computed exponential mixtures") {
  // Rate products a = 2, b = 1 at two nats of margin:
  // (2 e^{-1} - 1 e^{-2}) / (2 - 1).
  const auto tx = rayleigh_end(1.0, 1.0);
  const auto rx = rayleigh_end(0.5, 1.0);
  const double margin = dsol::db_from_nats(2.0);
  CHECK(dsol::outage::outage_closed_form(tx, rx, margin) ==
        doctest::Approx(0.600423599106272).epsilon(1e-13));

  // Equal products a = b = 1 at one nat: (1 + 1) e^{-1}.
  const auto side = rayleigh_end(0.5, 1.0);
  CHECK(dsol::outage::outage_closed_form(side, side, dsol::db_from_nats(1.0)) ==
        doctest::Approx(0.7357588823428847).epsilon(1e-13));

  // One end disabled: e^{-K/a}.
  const auto off = LinkEndPointing{0.0, PointingLossModel::gaussian_beam(),
                                   AngularErrorModel::rayleigh(1.0)};
  CHECK(dsol::outage::outage_closed_form(side, off, dsol::db_from_nats(1.0)) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-13));
}

TEST_CASE("zero margin is always an outage") {
  const auto end = rayleigh_end(1e12, 1e-6);
  CHECK(dsol::outage::outage_closed_form(end, end, 0.0) == 1.0);
  CHECK(dsol::outage::outage_numeric(end, end, 0.0) == 1.0);
}

TEST_CASE("closed form is continuous across the equal-products switch") {
  const double margin = dsol::db_from_nats(1.5);
  const auto base = rayleigh_end(0.5, 1.0);  // a = 1
  const auto just_inside = rayleigh_end(0.5 * (1.0 + 0.999e-6), 1.0);
  const auto just_outside = rayleigh_end(0.5 * (1.0 + 1.001e-6), 1.0);
  const double p_inside =
      dsol::outage::outage_closed_form(base, just_inside, margin);
  const double p_outside =
      dsol::outage::outage_closed_form(base, just_outside, margin);
  CHECK(std::abs(p_inside - p_outside) < 1e-8);
}

TEST_CASE("closed form is exactly symmetric in the two ends") {
  const auto tx = rayleigh_end(2.3e12, 0.7e-6);
  const auto rx = rayleigh_end(4.1e11, 1.9e-6, PointingLossModel::exp_approx());
  for (double margin : {0.5, 3.0, 8.685889638065035}) {
    CHECK(dsol::outage::outage_closed_form(tx, rx, margin) ==
          dsol::outage::outage_closed_form(rx, tx, margin));
  }
}

TEST_CASE("margin solve round-trips through the closed form") {
  const auto tx = rayleigh_end(1.2e12, 1e-6);
  const auto rx = rayleigh_end(0.8e12, 1.4e-6);
  for (double p : {0.3, 0.05, 0.01, 1e-4}) {
    const double margin = dsol::outage::solve_margin_db(tx, rx, p);
    CHECK(dsol::outage::outage_closed_form(tx, rx, margin) ==
          doctest::Approx(p).epsilon(1e-9));
  }
  CHECK(dsol::outage::solve_margin_db(tx, rx, 1.0) == 0.0);
}

TEST_CASE("numeric quadrature agrees with the exact closed form") {
  const auto tx = rayleigh_end(1.0, 1.0);
  const auto rx = rayleigh_end(0.5, 1.0);
  for (double k_nats : {0.2, 1.0, 2.0, 5.0}) {
    const double margin = dsol::db_from_nats(k_nats);
    CHECK(dsol::outage::outage_numeric(tx, rx, margin) ==
          doctest::Approx(dsol::outage::outage_closed_form(tx, rx, margin))
              .epsilon(1e-8));
  }
  // Physically scaled parameters and mixed loss models.
  const auto tx2 = rayleigh_end(2.0e12, 0.5e-6);
  const auto rx2 =
      rayleigh_end(7.9e12, 0.35e-6, PointingLossModel::exp_approx());
  for (double margin : {1.0, 4.0, 8.685889638065035}) {
    CHECK(dsol::outage::outage_numeric(tx2, rx2, margin) ==
          doctest::Approx(
              dsol::outage::outage_closed_form(tx2, rx2, margin))
              .epsilon(1e-8));
  }
  // Single active end.
  const auto off = LinkEndPointing{0.0, PointingLossModel::gaussian_beam(),
                                   AngularErrorModel::rayleigh(1.0)};
  const double margin = dsol::db_from_nats(1.0);
  CHECK(dsol::outage::outage_numeric(rayleigh_end(0.5, 1.0), off, margin) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-10));
}

TEST_CASE("monte carlo is deterministic per seed and tracks the closed form") {
  const auto tx = rayleigh_end(7.9e12, 0.35e-6);
  const auto rx = rayleigh_end(7.9e12, 0.5e-6);
  const double margin = 6.0;
  dsol::RandomStream s1(99);
  dsol::RandomStream s2(99);
  const auto mc1 = dsol::outage::outage_monte_carlo(tx, rx, margin, 200000, s1);
  const auto mc2 = dsol::outage::outage_monte_carlo(tx, rx, margin, 200000, s2);
  CHECK(mc1.exceed_count == mc2.exceed_count);
  CHECK(mc1.p_estimate == mc2.p_estimate);
  const double p_exact = dsol::outage::outage_closed_form(tx, rx, margin);
  CHECK(std::abs(mc1.p_estimate - p_exact) <= 4.0 * mc1.std_error);
  CHECK(mc1.trials == 200000);
  CHECK(mc1.std_error ==
        doctest::Approx(std::sqrt(mc1.p_estimate * (1.0 - mc1.p_estimate) /
                                  200000.0)));
}

TEST_CASE("rician errors fall back to quadrature and sampling") {
  const auto tx = LinkEndPointing{1e12, PointingLossModel::gaussian_beam(),
                                  AngularErrorModel::rician(1e-6, 0.5e-6)};
  const auto rx = rayleigh_end(1e12, 0.8e-6);
  const double margin = 6.0;
  CHECK_THROWS_AS(dsol::outage::outage_closed_form(tx, rx, margin),
                  dsol::DomainError);
  const double p_numeric = dsol::outage::outage_numeric(tx, rx, margin);
  dsol::RandomStream stream(512);
  const auto mc = dsol::outage::outage_monte_carlo(tx, rx, margin, 200000,
                                                   stream);
  CHECK(std::abs(p_numeric - mc.p_estimate) <= 4.0 * mc.std_error);
}

TEST_CASE("aperture-pattern outage: quadrature is exact, closed form close") {
  const auto loss = PointingLossModel::circular_aperture();
  const auto tx = rayleigh_end(1e12, 0.63e-6, loss);
  const auto rx = rayleigh_end(1e12, 0.63e-6, loss);
  const double margin = 3.0;
  const double p_numeric = dsol::outage::outage_numeric(tx, rx, margin);
  dsol::RandomStream stream(77);
  const auto mc =
      dsol::outage::outage_monte_carlo(tx, rx, margin, 200000, stream);
  CHECK(std::abs(p_numeric - mc.p_estimate) <= 4.0 * mc.std_error);
  // The alpha-routed closed form only approximates the true pattern. The
  // pattern attenuates faster than its quadratic-exponent fit everywhere
  // on the main lobe, so the closed form understates the outage.
  const double p_closed = dsol::outage::outage_closed_form(tx, rx, 0.4);
  const double p_numeric_small = dsol::outage::outage_numeric(tx, rx, 0.4);
  CHECK(p_numeric_small >= p_closed);
  CHECK(std::abs(p_closed - p_numeric_small) < 0.08);
}

TEST_CASE("aperture-pattern quadrature refuses sidelobe margins") {
  const auto loss = PointingLossModel::circular_aperture();
  const auto tx = rayleigh_end(1e12, 0.63e-6, loss);
  const auto rx = rayleigh_end(1e12, 0.63e-6, loss);
  CHECK_THROWS_AS(dsol::outage::outage_numeric(tx, rx, 18.0),
                  dsol::DomainError);
  CHECK_NOTHROW(dsol::outage::outage_numeric(tx, rx, 17.0));
}

TEST_CASE("deterministic margin requires a worst-case model on one end") {
  const auto gauss = PointingLossModel::gaussian_beam();
  const double gain = dsol::linear_from_db(129.0);
  const auto end = LinkEndPointing{gain, gauss,
                                   AngularErrorModel::worst_case(0.35e-6)};
  CHECK(dsol::outage::deterministic_margin_db(end) ==
        doctest::Approx(0.5 * 8.451823044437313).epsilon(1e-12));
  CHECK_THROWS_AS(
      dsol::outage::deterministic_margin_db(rayleigh_end(gain, 0.35e-6)),
      dsol::DomainError);
  // Worst-case offset beyond the aperture's main lobe is rejected.
  const auto aperture_end = LinkEndPointing{
      1e12, PointingLossModel::circular_aperture(),
      AngularErrorModel::worst_case(4.0e-6)};  // sqrt(G)*theta = 4 > 3.83
  CHECK_THROWS_AS(dsol::outage::deterministic_margin_db(aperture_end),
                  dsol::DomainError);
  const auto inside_end = LinkEndPointing{
      1e12, PointingLossModel::circular_aperture(),
      AngularErrorModel::worst_case(2.0e-6)};
  CHECK(dsol::outage::deterministic_margin_db(inside_end) ==
        doctest::Approx(-dsol::db_from_linear(0.33261150388220256))
            .epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  const auto off = LinkEndPointing{0.0, PointingLossModel::gaussian_beam(),
                                   AngularErrorModel::rayleigh(1.0)};
  CHECK_THROWS_AS(dsol::outage::outage_closed_form(off, off, 3.0),
                  dsol::DomainError);
  CHECK_THROWS_AS(dsol::outage::outage_numeric(off, off, 3.0),
                  dsol::DomainError);
  const auto end = rayleigh_end(1.0, 1.0);
  CHECK_THROWS_AS(dsol::outage::outage_closed_form(end, end, -1.0),
                  dsol::DomainError);
  dsol::RandomStream stream(1);
  CHECK_THROWS_AS(dsol::outage::outage_monte_carlo(end, end, 1.0, 0, stream),
                  dsol::DomainError);
  CHECK_THROWS_AS(dsol::outage::solve_margin_db(end, end, 0.0),
                  dsol::DomainError);
  CHECK_THROWS_AS(dsol::outage::solve_margin_db(end, end, 1.5),
                  dsol::DomainError);
}

TEST_CASE("outage spec cross-field validation") {
  const auto spec = dsol::outage::OutageSpec::from_margin_db(3.0, 0.05);
  CHECK(spec.k_nats == doctest::Approx(dsol::nats_from_db(3.0)));
  dsol::outage::OutageSpec bad = spec;
  bad.k_nats += 1e-6;
  CHECK_THROWS_AS(bad.validate(), dsol::DomainError);
  CHECK_THROWS_AS(dsol::outage::OutageSpec::from_margin_db(-1.0, 0.05),
                  dsol::DomainError);
  CHECK_THROWS_AS(dsol::outage::OutageSpec::from_margin_db(3.0, 0.0),
                  dsol::DomainError);
}

#include "dsol/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsol/errors.hpp"
#include "dsol/quadrature.hpp"
#include "dsol/special.hpp"
#include "dsol/units.hpp"

namespace dsol::outage {

namespace {

constexpr double kEqualProductsRelTol = 1e-6;

void check_end(const LinkEndPointing& end, const char* name) {
  if (!(end.gain_linear >= 0.0) || !std::isfinite(end.gain_linear)) {
    throw DomainError(std::string(name) +
                      " gain must be finite and non-negative");
  }
}

bool is_active(const LinkEndPointing& end) { return end.gain_linear > 0.0; }

// Rate product a = 2 sigma^2 c G for the exponential attenuation
// A = c G theta^2 with Rayleigh theta: then A ~ Exp(mean a).
double rate_product(const LinkEndPointing& end) {
  if (end.error.kind() != pointing::ErrorKind::kRayleigh) {
    throw DomainError(
        "closed-form outage requires Rayleigh pointing errors on every "
        "active end");
  }
  const double sigma = end.error.sigma();
  return 2.0 * sigma * sigma * end.loss.quadratic_coefficient() *
         end.gain_linear;
}

double closed_form_from_products(double a, double b, double k_nats) {
  if (k_nats <= 0.0) return 1.0;
  if (a < b) std::swap(a, b);
  if (a - b <= kEqualProductsRelTol * a) {
    const double mean = 0.5 * (a + b);
    const double x = k_nats / mean;
    return std::clamp((1.0 + x) * std::exp(-x), 0.0, 1.0);
  }
  const double p =
      (a * std::exp(-k_nats / a) - b * std::exp(-k_nats / b)) / (a - b);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

OutageSpec OutageSpec::from_margin_db(double margin_db, double p_out_target) {
  OutageSpec spec;
  spec.p_out_target = p_out_target;
  spec.margin_db = margin_db;
  spec.k_nats = nats_from_db(margin_db);
  spec.validate();
  return spec;
}

void OutageSpec::validate() const {
  if (!(p_out_target > 0.0) || !(p_out_target <= 1.0)) {
    throw DomainError("outage probability target must lie in (0, 1]");
  }
  if (!std::isfinite(margin_db) || margin_db < 0.0) {
    throw DomainError("pointing margin must be finite and non-negative");
  }
  const double expected = nats_from_db(margin_db);
  if (std::abs(k_nats - expected) > 1e-12 * std::max(1.0, expected)) {
    throw DomainError("margin fields disagree: k_nats is not margin_db in nats");
  }
}

double deterministic_margin_db(const LinkEndPointing& end) {
  check_end(end, "link end");
  if (end.error.kind() != pointing::ErrorKind::kWorstCase) {
    throw DomainError(
        "deterministic margin requires a worst-case error model; use the "
        "outage forms for stochastic errors");
  }
  if (!is_active(end)) return 0.0;
  const double nats = pointing::attenuation_nats(end.loss, end.gain_linear,
                                                 end.error.theta_max());
  if (!std::isfinite(nats)) {
    throw DomainError(
        "worst-case offset falls outside the aperture pattern's main lobe");
  }
  if (end.loss.kind() == pointing::LossKind::kCircularAperture) {
    const double x =
        std::sqrt(end.gain_linear) * end.error.theta_max();
    if (x >= kBesselJ1FirstZero) {
      throw DomainError(
          "worst-case offset falls outside the aperture pattern's main lobe");
    }
  }
  return db_from_nats(nats);
}

double outage_closed_form(const LinkEndPointing& tx, const LinkEndPointing& rx,
                          double margin_db) {
  check_end(tx, "transmit end");
  check_end(rx, "receive end");
  if (!std::isfinite(margin_db) || margin_db < 0.0) {
    throw DomainError("pointing margin must be finite and non-negative");
  }
  const bool tx_on = is_active(tx);
  const bool rx_on = is_active(rx);
  if (!tx_on && !rx_on) {
    throw DomainError("at least one link end must have positive gain");
  }
  const double k_nats = nats_from_db(margin_db);
  if (tx_on && rx_on) {
    return closed_form_from_products(rate_product(tx), rate_product(rx),
                                     k_nats);
  }
  const double a = rate_product(tx_on ? tx : rx);
  if (k_nats <= 0.0) return 1.0;
  return std::clamp(std::exp(-k_nats / a), 0.0, 1.0);
}

double solve_margin_db(const LinkEndPointing& tx, const LinkEndPointing& rx,
                       double p_out_target) {
  if (!(p_out_target > 0.0) || !(p_out_target <= 1.0)) {
    throw DomainError("outage probability target must lie in (0, 1]");
  }
  if (p_out_target == 1.0) return 0.0;

  const auto p_of_k = [&](double k_nats) {
    return outage_closed_form(tx, rx, db_from_nats(k_nats));
  };

  double k_lo = 0.0;
  double k_hi = 1.0;
  while (p_of_k(k_hi) > p_out_target) {
    k_lo = k_hi;
    k_hi *= 2.0;
    if (k_hi > 4000.0) {
      throw NumericError(
          "margin solve failed to bracket the outage target below 4000 nats");
    }
  }
  // p_of_k is continuous and strictly decreasing on [k_lo, k_hi].
  while (k_hi - k_lo > 1e-15 * std::max(k_hi, 1.0)) {
    const double mid = 0.5 * (k_lo + k_hi);
    const double p = p_of_k(mid);
    if (std::abs(p - p_out_target) <= 1e-13 * p_out_target) {
      return db_from_nats(mid);
    }
    if (p > p_out_target) {
      k_lo = mid;
    } else {
      k_hi = mid;
    }
  }
  return db_from_nats(0.5 * (k_lo + k_hi));
}

MonteCarloResult outage_monte_carlo(const LinkEndPointing& tx,
                                    const LinkEndPointing& rx,
                                    double margin_db, std::uint64_t trials,
                                    RandomStream& stream) {
  check_end(tx, "transmit end");
  check_end(rx, "receive end");
  if (trials == 0) throw DomainError("Monte Carlo needs at least one trial");
  if (!std::isfinite(margin_db) || margin_db < 0.0) {
    throw DomainError("pointing margin must be finite and non-negative");
  }
  const double k_nats = nats_from_db(margin_db);
  std::uint64_t exceed = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    double total = 0.0;
    if (is_active(tx)) {
      const double theta = pointing::error_sample(tx.error, stream);
      total += pointing::attenuation_nats(tx.loss, tx.gain_linear, theta);
    }
    if (is_active(rx)) {
      const double theta = pointing::error_sample(rx.error, stream);
      total += pointing::attenuation_nats(rx.loss, rx.gain_linear, theta);
    }
    if (total > k_nats) ++exceed;
  }
  MonteCarloResult result;
  result.exceed_count = exceed;
  result.trials = trials;
  result.p_estimate = static_cast<double>(exceed) / static_cast<double>(trials);
  result.std_error = std::sqrt(result.p_estimate * (1.0 - result.p_estimate) /
                               static_cast<double>(trials));
  return result;
}

namespace {

void check_stochastic(const LinkEndPointing& end) {
  const auto kind = end.error.kind();
  if (kind != pointing::ErrorKind::kRayleigh &&
      kind != pointing::ErrorKind::kRician) {
    throw DomainError(
        "numeric outage requires a stochastic (Rayleigh or Rician) error "
        "model on every active end");
  }
}

// Offset angle at which an end's attenuation reaches `nats`. Monotone
// increasing in nats over the valid region, with inv(0) = 0.
double inverse_attenuation(const LinkEndPointing& end, double nats) {
  if (nats <= 0.0) return 0.0;
  const auto kind = end.loss.kind();
  if (kind != pointing::LossKind::kCircularAperture) {
    const double c = end.loss.quadratic_coefficient();
    return std::sqrt(nats / (c * end.gain_linear));
  }
  if (nats >= pointing::first_sidelobe_attenuation_nats()) {
    throw DomainError(
        "numeric outage with the aperture pattern needs the margin below "
        "the first sidelobe's attenuation; use Monte Carlo instead");
  }
  // Invert on the main lobe: attenuation is continuous and increasing in
  // x = sqrt(G) theta from 0 at x=0 to +inf at the first pattern null.
  const double root_g = std::sqrt(end.gain_linear);
  double x_lo = 0.0;
  double x_hi = kBesselJ1FirstZero;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.5 * (x_lo + x_hi);
    const double a =
        pointing::attenuation_nats(end.loss, end.gain_linear, x / root_g);
    if (a < nats) {
      x_lo = x;
    } else {
      x_hi = x;
    }
    if (x_hi - x_lo <= 1e-15 * kBesselJ1FirstZero) break;
  }
  return 0.5 * (x_lo + x_hi) / root_g;
}

}  // namespace

double outage_numeric(const LinkEndPointing& tx, const LinkEndPointing& rx,
                      double margin_db, double abs_tol) {
  check_end(tx, "transmit end");
  check_end(rx, "receive end");
  if (!std::isfinite(margin_db) || margin_db < 0.0) {
    throw DomainError("pointing margin must be finite and non-negative");
  }
  const bool tx_on = is_active(tx);
  const bool rx_on = is_active(rx);
  if (!tx_on && !rx_on) {
    throw DomainError("at least one link end must have positive gain");
  }
  const double k_nats = nats_from_db(margin_db);
  if (k_nats <= 0.0) return 1.0;

  if (tx_on != rx_on) {
    const LinkEndPointing& end = tx_on ? tx : rx;
    check_stochastic(end);
    const double theta_k = inverse_attenuation(end, k_nats);
    return 1.0 - pointing::error_cdf(end.error, theta_k);
  }

  check_stochastic(tx);
  check_stochastic(rx);
  // P{A_t + A_r <= K} = integral over theta_t of f_t(theta) *
  // F_r(inv_r(K - A_t(theta))), taken up to inv_t(K) where A_t alone
  // exhausts the budget.
  const double theta_t_max = inverse_attenuation(tx, k_nats);
  const auto integrand = [&](double theta_t) {
    const double a_t =
        pointing::attenuation_nats(tx.loss, tx.gain_linear, theta_t);
    const double remaining = k_nats - a_t;
    if (remaining <= 0.0) return 0.0;
    const double theta_r = inverse_attenuation(rx, remaining);
    return pointing::error_pdf(tx.error, theta_t) *
           pointing::error_cdf(rx.error, theta_r);
  };
  const double p_ok = integrate(integrand, 0.0, theta_t_max, abs_tol);
  return std::clamp(1.0 - p_ok, 0.0, 1.0);
}

}  // namespace dsol::outage

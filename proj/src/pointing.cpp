#include "dsol/pointing.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dsol/errors.hpp"
#include "dsol/quadrature.hpp"
#include "dsol/special.hpp"
#include "dsol/units.hpp"

namespace dsol::pointing {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

bool is_finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

// 2 J1(x) / x, with the removable singularity at 0 filled by its series.
double pattern_amplitude(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
  }
  return 2.0 * bessel_j1(x) / x;
}

}  // namespace

AngularErrorModel AngularErrorModel::rayleigh(double sigma_rad) {
  require(std::isfinite(sigma_rad) && sigma_rad > 0.0,
          "rayleigh error model requires sigma > 0");
  return AngularErrorModel(ErrorKind::kRayleigh, sigma_rad, 0.0, 0.0);
}

AngularErrorModel AngularErrorModel::rician(double sigma_rad,
                                            double eta_rad) {
  require(std::isfinite(sigma_rad) && sigma_rad > 0.0,
          "rician error model requires sigma > 0");
  require(is_finite_nonneg(eta_rad), "rician error model requires eta >= 0");
  return AngularErrorModel(ErrorKind::kRician, sigma_rad, eta_rad, 0.0);
}

AngularErrorModel AngularErrorModel::worst_case(double theta_max_rad) {
  require(is_finite_nonneg(theta_max_rad),
          "worst-case error model requires theta_max >= 0");
  return AngularErrorModel(ErrorKind::kWorstCase, 0.0, 0.0, theta_max_rad);
}

PointingLossModel PointingLossModel::gaussian_beam() {
  return PointingLossModel(LossKind::kGaussianBeam, 1.0);
}

PointingLossModel PointingLossModel::circular_aperture() {
  return PointingLossModel(LossKind::kCircularAperture,
                           kDefaultExpApproxAlpha);
}

PointingLossModel PointingLossModel::exp_approx(double alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) {
    throw DomainError("exp-approx loss model requires alpha > 0");
  }
  return PointingLossModel(LossKind::kExpApprox, alpha);
}

double PointingLossModel::quadratic_coefficient() const {
  switch (kind_) {
    case LossKind::kGaussianBeam:
      return 1.0;
    case LossKind::kExpApprox:
    case LossKind::kCircularAperture:
      return alpha_;
  }
  return alpha_;
}

double error_pdf(const AngularErrorModel& model, double theta_rad) {
  require(std::isfinite(theta_rad) && theta_rad >= 0.0,
          "error_pdf requires theta >= 0");
  const double s2 = model.sigma() * model.sigma();
  switch (model.kind()) {
    case ErrorKind::kRayleigh:
      return theta_rad / s2 * std::exp(-theta_rad * theta_rad / (2.0 * s2));
    case ErrorKind::kRician: {
      if (theta_rad == 0.0) return 0.0;
      const double eta = model.eta();
      // Assembled in log space: I0 and the Gaussian factor individually
      // overflow/underflow long before their product does.
      const double log_pdf = std::log(theta_rad / s2) -
                             (theta_rad * theta_rad + eta * eta) / (2.0 * s2) +
                             log_bessel_i0(theta_rad * eta / s2);
      return std::exp(log_pdf);
    }
    case ErrorKind::kWorstCase:
      break;
  }
  throw DomainError("worst-case error model has no density");
}

double error_cdf(const AngularErrorModel& model, double theta_rad) {
  require(std::isfinite(theta_rad) && theta_rad >= 0.0,
          "error_cdf requires theta >= 0");
  switch (model.kind()) {
    case ErrorKind::kRayleigh: {
      const double s = model.sigma();
      return -std::expm1(-theta_rad * theta_rad / (2.0 * s * s));
    }
    case ErrorKind::kRician: {
      if (theta_rad == 0.0) return 0.0;
      const double upper = model.eta() + 12.0 * model.sigma();
      if (theta_rad >= upper) return 1.0;
      const double v = integrate(
          [&model](double t) { return error_pdf(model, t); }, 0.0, theta_rad,
          1e-13);
      return std::fmin(1.0, std::fmax(0.0, v));
    }
    case ErrorKind::kWorstCase:
      break;
  }
  throw DomainError("worst-case error model has no distribution");
}

double error_sample(const AngularErrorModel& model, RandomStream& stream) {
  switch (model.kind()) {
    case ErrorKind::kRayleigh:
      return rayleigh_from_uniform(model.sigma(), stream.uniform_open01());
    case ErrorKind::kRician: {
      const double a = model.eta() + model.sigma() * stream.gaussian();
      const double b = model.sigma() * stream.gaussian();
      return std::sqrt(a * a + b * b);
    }
    case ErrorKind::kWorstCase:
      return model.theta_max();
  }
  throw DomainError("unknown error model");
}

double loss_fraction(const PointingLossModel& model, double gain_linear,
                     double theta_rad) {
  require(std::isfinite(gain_linear) && gain_linear > 0.0,
          "loss_fraction requires gain > 0");
  require(std::isfinite(theta_rad) && theta_rad >= 0.0,
          "loss_fraction requires theta >= 0");
  switch (model.kind()) {
    case LossKind::kGaussianBeam:
      return std::exp(-gain_linear * theta_rad * theta_rad);
    case LossKind::kExpApprox:
      return std::exp(-model.alpha() * gain_linear * theta_rad * theta_rad);
    case LossKind::kCircularAperture: {
      const double x = std::sqrt(gain_linear) * theta_rad;
      const double amp = pattern_amplitude(x);
      return amp * amp;
    }
  }
  throw DomainError("unknown loss model");
}

double attenuation_nats(const PointingLossModel& model, double gain_linear,
                        double theta_rad) {
  // The exponential kinds get the exact exponent (no exp/log round trip and
  // no underflow at large offsets).
  const double g2 = gain_linear * theta_rad * theta_rad;
  switch (model.kind()) {
    case LossKind::kGaussianBeam:
      require(std::isfinite(gain_linear) && gain_linear > 0.0,
              "attenuation requires gain > 0");
      return g2;
    case LossKind::kExpApprox:
      require(std::isfinite(gain_linear) && gain_linear > 0.0,
              "attenuation requires gain > 0");
      return model.alpha() * g2;
    case LossKind::kCircularAperture: {
      const double lf = loss_fraction(model, gain_linear, theta_rad);
      if (lf <= 0.0) return std::numeric_limits<double>::infinity();
      return -std::log(lf);
    }
  }
  throw DomainError("unknown loss model");
}

double first_sidelobe_attenuation_nats() {
  // Golden-section minimum of the aperture attenuation on (first null,
  // second null); computed once from the same J1 the pattern uses.
  static const double value = [] {
    const auto att = [](double x) {
      const double a = pattern_amplitude(x);
      return -std::log(a * a);
    };
    double lo = kBesselJ1FirstZero + 1e-9;
    double hi = 7.0155866698156188;  // second zero of J1
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = att(x1);
    double f2 = att(x2);
    while (hi - lo > 1e-12) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = att(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = att(x2);
      }
    }
    return att(0.5 * (lo + hi));
  }();
  return value;
}

}  // namespace dsol::pointing

#pragma once

#include "dsol/random.hpp"

namespace dsol::pointing {

// Radial pointing-error statistics. Rayleigh models two independent
// zero-mean Gaussian axis errors of common deviation sigma; Rician adds a
// fixed bias of magnitude eta; WorstCase is the deterministic bound used by
// the worst-offset design method (no distribution attached).
enum class ErrorKind { kRayleigh, kRician, kWorstCase };

class AngularErrorModel {
 public:
  static AngularErrorModel rayleigh(double sigma_rad);
  static AngularErrorModel rician(double sigma_rad, double eta_rad);
  static AngularErrorModel worst_case(double theta_max_rad);

  ErrorKind kind() const { return kind_; }
  double sigma() const { return sigma_; }          // rad, stochastic kinds
  double eta() const { return eta_; }              // rad, Rician bias
  double theta_max() const { return theta_max_; }  // rad, WorstCase bound

 private:
  AngularErrorModel(ErrorKind k, double s, double e, double t)
      : kind_(k), sigma_(s), eta_(e), theta_max_(t) {}
  ErrorKind kind_;
  double sigma_;
  double eta_;
  double theta_max_;
};

// Off-boresight gain-reduction models. GaussianBeam is exp(-G theta^2);
// CircularAperture is the diffraction pattern (2 J1(sqrt(G) theta) /
// (sqrt(G) theta))^2; ExpApprox is the single-exponential stand-in
// exp(-alpha G theta^2) for the aperture pattern.
enum class LossKind { kGaussianBeam, kCircularAperture, kExpApprox };

inline constexpr double kDefaultExpApproxAlpha = 0.188;

class PointingLossModel {
 public:
  static PointingLossModel gaussian_beam();
  static PointingLossModel circular_aperture();
  static PointingLossModel exp_approx(double alpha = kDefaultExpApproxAlpha);

  LossKind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  // Coefficient c such that the loss is exp(-c G theta^2), for the two
  // exactly-exponential kinds; the aperture pattern routes through the
  // default alpha wherever a closed form needs a quadratic exponent.
  double quadratic_coefficient() const;

 private:
  PointingLossModel(LossKind k, double a) : kind_(k), alpha_(a) {}
  LossKind kind_;
  double alpha_;
};

// Density and distribution of the radial error angle. Defined for the
// stochastic kinds only; WorstCase has no density and is rejected.
double error_pdf(const AngularErrorModel& model, double theta_rad);
double error_cdf(const AngularErrorModel& model, double theta_rad);

// One draw of the error angle. Rayleigh uses the exact inverse CDF
// (rayleigh_from_uniform); Rician is the magnitude of a bias-shifted
// two-axis Gaussian; WorstCase returns theta_max deterministically.
double error_sample(const AngularErrorModel& model, RandomStream& stream);

// Fraction of on-axis gain retained at offset theta, in (0, 1] for the
// exponential kinds and [0, 1] for the aperture pattern (exact zeros at the
// pattern nulls; past the first null the literal oscillating value is
// returned).
double loss_fraction(const PointingLossModel& model, double gain_linear,
                     double theta_rad);

// -ln(loss_fraction), the attenuation in nats; +infinity at pattern nulls.
double attenuation_nats(const PointingLossModel& model, double gain_linear,
                        double theta_rad);

// Minimum attenuation (nats) anywhere past the aperture pattern's first
// null, i.e. at the first sidelobe peak (about 17.57 dB). Totals below this
// make main-lobe-only analysis exact.
double first_sidelobe_attenuation_nats();

}  // namespace dsol::pointing

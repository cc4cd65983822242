#pragma once

#include <cstdint>

#include "dsol/pointing.hpp"
#include "dsol/random.hpp"

namespace dsol::outage {

// One link end's contribution to pointing loss: its antenna gain, the
// pattern model, and the error statistics. gain_linear = 0 disables the
// end (no attenuation contribution), which is how the single-sided forms
// are expressed.
struct LinkEndPointing {
  double gain_linear;
  pointing::PointingLossModel loss;
  pointing::AngularErrorModel error;
};

// A pointing budget allocation: the dB margin reserved in the link budget,
// its nat equivalent, and the outage probability it is meant to achieve.
struct OutageSpec {
  double p_out_target;
  double margin_db;
  double k_nats;

  static OutageSpec from_margin_db(double margin_db, double p_out_target);
  void validate() const;  // enforces k = margin * ln(10)/10 to 1e-12
};

// Fixed attenuation of a worst-case-offset end, in dB (>= 0). Requires a
// WorstCase error model; stochastic models must go through the outage path.
// For the aperture pattern the offset must stay on the main lobe.
double deterministic_margin_db(const LinkEndPointing& end);

// P{A_t + A_r > margin} for Rayleigh errors and exponential-family loss
// models (the aperture pattern routes through its exp-approx coefficient).
// Evaluates the two-exponential closed form, its equal-products limit when
// the two rate products agree within 1e-6 relative, and the single
// exponential when one end is disabled.
double outage_closed_form(const LinkEndPointing& tx, const LinkEndPointing& rx,
                          double margin_db);

// Smallest margin (dB) whose closed-form outage equals p_out_target, to
// 1e-10 absolute in probability. Bisection with geometric bracket growth.
double solve_margin_db(const LinkEndPointing& tx, const LinkEndPointing& rx,
                       double p_out_target);

struct MonteCarloResult {
  double p_estimate;
  double std_error;  // sqrt(p(1-p)/n)
  std::uint64_t exceed_count;
  std::uint64_t trials;
};

// Empirical exceedance estimate: draws both error angles, accumulates the
// two attenuations in nats, counts strict exceedance of the margin. Any
// error-model kinds and any loss models (pattern nulls contribute infinite
// attenuation, hence always count).
MonteCarloResult outage_monte_carlo(const LinkEndPointing& tx,
                                    const LinkEndPointing& rx,
                                    double margin_db, std::uint64_t trials,
                                    RandomStream& stream);

// Deterministic quadrature of the exceedance probability for stochastic
// error models (Rayleigh or Rician) with monotone loss (exponential kinds
// anywhere; the aperture pattern on its main lobe, which is exact while the
// margin stays below the first sidelobe's attenuation).
double outage_numeric(const LinkEndPointing& tx, const LinkEndPointing& rx,
                      double margin_db, double abs_tol = 1e-10);

}  // namespace dsol::outage

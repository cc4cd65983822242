#include "dsol/gain_opt.hpp"

#include <cmath>
#include <utility>

#include "dsol/errors.hpp"
#include "dsol/outage.hpp"
#include "dsol/special.hpp"
#include "dsol/units.hpp"

namespace dsol::gainopt {

namespace {

constexpr double kGoldenRatioConjugate = 0.6180339887498949;
constexpr double kSearchTolDb = 1e-6;
constexpr double kEdgeGuardDb = 0.05;

outage::LinkEndPointing symmetric_end(const GainOptProblem& problem,
                                      double gain_linear) {
  return outage::LinkEndPointing{gain_linear, problem.loss, problem.accuracy};
}

// Ratio K/a at which the symmetric two-sided outage hits its target, i.e.
// the root of (1 + x) exp(-x) = p. Recovered from the margin solver at a
// gain chosen to make the rate product close to one, which keeps the solve
// well conditioned no matter how small sigma is.
double symmetric_outage_ratio(const GainOptProblem& problem) {
  const double sigma = problem.accuracy.sigma();
  const double c = problem.loss.quadratic_coefficient();
  const double gain_linear = 1.0 / (2.0 * sigma * sigma * c);
  const auto end = symmetric_end(problem, gain_linear);
  const double k_nats =
      nats_from_db(outage::solve_margin_db(end, end, problem.p_out_target));
  const double a = 2.0 * sigma * sigma * c * gain_linear;
  return k_nats / a;
}

}  // namespace

void GainOptProblem::validate() const {
  if (approach == Approach::kDeterministic) {
    if (accuracy.kind() != pointing::ErrorKind::kWorstCase) {
      throw DomainError(
          "deterministic gain optimization needs a worst-case accuracy");
    }
    if (!(accuracy.theta_max() > 0.0)) {
      throw DomainError(
          "gain optimization needs a positive worst-case offset");
    }
  } else {
    if (accuracy.kind() != pointing::ErrorKind::kRayleigh) {
      throw DomainError(
          "outage gain optimization supports Rayleigh accuracy only");
    }
    if (!(p_out_target > 0.0) || !(p_out_target < 1.0)) {
      throw DomainError(
          "outage probability target must lie in (0, 1) for gain "
          "optimization");
    }
  }
  if (!std::isfinite(bracket_lo_db) || !std::isfinite(bracket_hi_db) ||
      !(bracket_lo_db < bracket_hi_db)) {
    throw DomainError("gain search bracket must be a finite ordered range");
  }
}

double pointing_attenuation_db(const GainOptProblem& problem, double gain_db) {
  problem.validate();
  const double gain_linear = linear_from_db(gain_db);
  if (problem.approach == Approach::kDeterministic) {
    const double nats = pointing::attenuation_nats(
        problem.loss, gain_linear, problem.accuracy.theta_max());
    return 2.0 * db_from_nats(nats);
  }
  const auto end = symmetric_end(problem, gain_linear);
  return outage::solve_margin_db(end, end, problem.p_out_target);
}

double effective_gain_db(const GainOptProblem& problem, double gain_db) {
  return 2.0 * gain_db - pointing_attenuation_db(problem, gain_db);
}

GainOptResult optimal_gain_numeric(const GainOptProblem& problem) {
  problem.validate();
  double lo = problem.bracket_lo_db;
  double hi = problem.bracket_hi_db;
  if (problem.approach == Approach::kDeterministic &&
      problem.loss.kind() == pointing::LossKind::kCircularAperture) {
    // Past the first pattern null the objective is no longer unimodal;
    // keep the search on the main lobe.
    const double x_null =
        kBesselJ1FirstZero / problem.accuracy.theta_max();
    const double null_db = db_from_linear(x_null * x_null) - 1e-6;
    if (null_db <= lo) {
      throw DomainError(
          "gain bracket lies entirely beyond the aperture pattern's main "
          "lobe");
    }
    hi = std::min(hi, null_db);
  }

  const auto objective = [&](double g_db) {
    return effective_gain_db(problem, g_db);
  };
  double a = lo;
  double b = hi;
  double x1 = b - kGoldenRatioConjugate * (b - a);
  double x2 = a + kGoldenRatioConjugate * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > kSearchTolDb) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatioConjugate * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatioConjugate * (b - a);
      f1 = objective(x1);
    }
  }
  const double gain_db = 0.5 * (a + b);
  if (gain_db - problem.bracket_lo_db < kEdgeGuardDb ||
      problem.bracket_hi_db - gain_db < kEdgeGuardDb) {
    throw NumericError(
        "gain optimum sits at a bracket edge; widen the search bracket");
  }
  const double att_db = pointing_attenuation_db(problem, gain_db);
  return GainOptResult{gain_db, att_db, 2.0 * gain_db - att_db};
}

GainOptResult optimal_gain(const GainOptProblem& problem) {
  problem.validate();
  double gain_linear = 0.0;
  if (problem.approach == Approach::kDeterministic) {
    const double theta = problem.accuracy.theta_max();
    switch (problem.loss.kind()) {
      case pointing::LossKind::kGaussianBeam:
        gain_linear = 1.0 / (theta * theta);
        break;
      case pointing::LossKind::kExpApprox:
        gain_linear = 1.0 / (problem.loss.alpha() * theta * theta);
        break;
      case pointing::LossKind::kCircularAperture:
        return optimal_gain_numeric(problem);
    }
  } else {
    const double sigma = problem.accuracy.sigma();
    const double x_star = symmetric_outage_ratio(problem);
    gain_linear = 1.0 / (sigma * sigma *
                         problem.loss.quadratic_coefficient() * x_star);
  }
  const double gain_db = db_from_linear(gain_linear);
  const double att_db = pointing_attenuation_db(problem, gain_db);
  return GainOptResult{gain_db, att_db, 2.0 * gain_db - att_db};
}

std::vector<SweepRow> sweep_effective_gain(const GainOptProblem& problem,
                                           double lo_db, double hi_db,
                                           double step_db) {
  problem.validate();
  if (!std::isfinite(lo_db) || !std::isfinite(hi_db) || lo_db > hi_db) {
    throw DomainError("sweep range must be a finite ordered range");
  }
  if (!(step_db > 0.0)) {
    throw DomainError("sweep step must be positive");
  }
  if ((hi_db - lo_db) / step_db > 1e6) {
    throw DomainError("sweep would produce more than a million rows");
  }
  std::vector<SweepRow> rows;
  const double end = hi_db + 1e-9 * step_db;
  for (double g = lo_db; g <= end; g += step_db) {
    const double att = pointing_attenuation_db(problem, g);
    rows.push_back(SweepRow{g, att, 2.0 * g - att});
  }
  return rows;
}

}  // namespace dsol::gainopt

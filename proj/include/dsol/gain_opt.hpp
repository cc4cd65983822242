#pragma once

#include <vector>

#include "dsol/pointing.hpp"

namespace dsol::gainopt {

// How the pointing penalty charged against a candidate gain is computed:
// a fixed worst-case offset at each end, or the margin that keeps the
// two-sided outage probability at its target.
enum class Approach { kDeterministic, kOutage };

// Symmetric-link gain optimization: both ends share the same gain, loss
// model, and pointing accuracy. The objective is the effective gain
//   G_eff[dB] = 2 G[dB] - A_p,tot[dB],
// the two-ended antenna gain net of the pointing penalty it induces.
struct GainOptProblem {
  Approach approach = Approach::kDeterministic;
  pointing::PointingLossModel loss = pointing::PointingLossModel::gaussian_beam();
  pointing::AngularErrorModel accuracy = pointing::AngularErrorModel::worst_case(0.0);
  double p_out_target = 0.05;  // used only by the outage approach
  double bracket_lo_db = 60.0;
  double bracket_hi_db = 160.0;

  void validate() const;
};

// Total two-sided pointing attenuation (dB) charged at gain_db per end.
double pointing_attenuation_db(const GainOptProblem& problem, double gain_db);

// Objective 2*gain_db - pointing_attenuation_db(problem, gain_db).
double effective_gain_db(const GainOptProblem& problem, double gain_db);

struct GainOptResult {
  double gain_db;
  double attenuation_db;     // total two-sided pointing penalty at optimum
  double effective_gain_db;  // 2*gain_db - attenuation_db
};

// Numeric maximization of the effective gain by golden-section search over
// [bracket_lo_db, bracket_hi_db]; errors out if the optimum sits at an edge.
GainOptResult optimal_gain_numeric(const GainOptProblem& problem);

// Closed form where one exists (worst-case offset with the Gaussian-beam or
// exponential-approximation pattern; outage with exponential-family loss),
// numeric search otherwise.
GainOptResult optimal_gain(const GainOptProblem& problem);

struct SweepRow {
  double gain_db;
  double attenuation_db;
  double effective_gain_db;
};

// Tabulates the objective over [lo_db, hi_db] in step_db increments
// (endpoint included when it lands on the grid).
std::vector<SweepRow> sweep_effective_gain(const GainOptProblem& problem,
                                           double lo_db, double hi_db,
                                           double step_db);

}  // namespace dsol::gainopt

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsol/pointing.hpp"
#include "dsol/signaling.hpp"

namespace dsol::budget {

struct AntennaSpec {
  double gain_db;
  double efficiency_db;  // <= 0
};

// How the pointing line of the budget is charged: the fixed loss at a
// worst-case offset, or the margin that bounds outage probability for
// stochastic errors.
enum class PointingApproach { kDeterministic, kOutage };

struct PointingSpec {
  PointingApproach approach = PointingApproach::kDeterministic;
  pointing::PointingLossModel loss = pointing::PointingLossModel::gaussian_beam();
  // Worst-case offset (deterministic) or Rayleigh sigma (outage), radians.
  // Zero turns that end's pointing loss off.
  double tx_accuracy_rad = 0.0;
  double rx_accuracy_rad = 0.0;
  double p_out_target = 0.05;  // outage approach only

  void validate() const;
};

struct LinkScenario {
  double wavelength_m;
  double range_m;
  double p_avg_w;
  AntennaSpec tx;
  AntennaSpec rx;
  double other_losses_db;  // signed contribution, <= 0
  PointingSpec pointing;
  signaling::ScppmConfig scppm;
  double n_b_phe_per_ns;
  double required_margin_db = 0.0;  // margin demanded when solving range
  std::optional<double> fer_target;

  void validate() const;
};

// Free-space spreading term 20 log10(lambda / (4 pi r)), in dB (negative).
double space_loss_db(double wavelength_m, double range_m);

// Total pointing attenuation charged against the link, in dB (>= 0).
double pointing_attenuation_db(const LinkScenario& scenario);

// Signal power at the detector, dBW: transmit power plus every gain and
// loss term of the link equation.
double received_power_dbw(const LinkScenario& scenario);

// Received signal flux. The dB form (dB photoelectrons per ns) accumulates
// the budget additively; the linear form multiplies the same factors
// directly in linear space. The two must agree to rounding error.
double received_flux_db(const LinkScenario& scenario);
double received_flux_phe_per_ns(const LinkScenario& scenario);

// Registry coordinates of the scenario's signaling operating point.
signaling::RegistryKey registry_key(const LinkScenario& scenario);

// Received flux minus the registry's required flux, dB.
double link_margin_db(const LinkScenario& scenario,
                      const signaling::RequiredFluxRegistry& registry);

// Largest range (AU) at which the link still holds required_margin_db of
// margin over the registry requirement.
double max_range_au(const LinkScenario& scenario,
                    const signaling::RequiredFluxRegistry& registry);

struct BudgetLine {
  std::string section;
  std::string key;    // stable machine-readable name
  std::string label;  // human-readable name
  std::optional<double> value_db;
  std::optional<double> value_linear;
  std::string unit;  // unit of the linear value
  std::string text;  // non-numeric value, e.g. a code rate
};

struct BudgetSummary {
  double data_rate_bps;
  double peak_power_w;
  double noise_per_slot;
  double space_loss_db;
  double pointing_db;  // signed contribution, <= 0
  double received_power_dbw;
  double received_flux_db;
  double received_flux_phe_per_ns;
  double required_flux_db;
  double required_flux_phe_per_ns;
  double min_power_dbw;
  double link_margin_db;
  double max_range_au;
};

struct BudgetReport {
  std::vector<BudgetLine> lines;
  BudgetSummary summary;
};

BudgetReport budget_report(const LinkScenario& scenario,
                           const signaling::RequiredFluxRegistry& registry);

// Renderers are byte-deterministic. Display precision shows dB values at
// two decimals and linear values at four significant digits; full
// precision emits shortest-round-trip doubles everywhere.
std::string render_text(const BudgetReport& report,
                        bool full_precision = false);
std::string render_records(const BudgetReport& report);
std::string render_csv(const BudgetReport& report);

struct RangeTableRow {
  double accuracy_urad;
  std::vector<double> range_au;  // one per PPM order
};

struct RangeTable {
  PointingApproach approach;
  std::vector<int> orders;
  std::vector<double> data_rates_bps;  // one per PPM order
  std::vector<RangeTableRow> rows;
};

// Maximum communication range per (pointing accuracy, PPM order) cell,
// with both antenna gains re-optimized for each accuracy. The base
// scenario supplies powers, efficiencies, losses, signaling timing, and
// the background flux; its range and gains are ignored.
RangeTable range_table(const LinkScenario& base, PointingApproach approach,
                       const std::vector<double>& accuracies_urad,
                       const std::vector<int>& orders,
                       const signaling::RequiredFluxRegistry& registry);

std::string render_range_table(const RangeTable& table,
                               bool full_precision = false);

}  // namespace dsol::budget

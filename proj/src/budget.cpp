#include "dsol/budget.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dsol/errors.hpp"
#include "dsol/gain_opt.hpp"
#include "dsol/outage.hpp"
#include "dsol/units.hpp"

namespace dsol::budget {

namespace {

void check_signed_loss(double value_db, const char* name) {
  if (!std::isfinite(value_db) || value_db > 0.0) {
    throw DomainError(std::string(name) +
                      " must be a non-positive dB contribution");
  }
}

outage::LinkEndPointing outage_end(const AntennaSpec& antenna,
                                   const pointing::PointingLossModel& loss,
                                   double sigma_rad) {
  if (sigma_rad == 0.0) {
    // Disabled end: zero gain removes it from the outage forms; the error
    // model is a placeholder that is never evaluated.
    return outage::LinkEndPointing{
        0.0, loss, pointing::AngularErrorModel::rayleigh(1.0)};
  }
  return outage::LinkEndPointing{linear_from_db(antenna.gain_db), loss,
                                 pointing::AngularErrorModel::rayleigh(sigma_rad)};
}

std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string format_sig(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

}  // namespace

void PointingSpec::validate() const {
  if (!(tx_accuracy_rad >= 0.0) || !std::isfinite(tx_accuracy_rad) ||
      !(rx_accuracy_rad >= 0.0) || !std::isfinite(rx_accuracy_rad)) {
    throw DomainError("pointing accuracies must be finite and non-negative");
  }
  if (approach == PointingApproach::kOutage) {
    if (!(p_out_target > 0.0) || !(p_out_target <= 1.0)) {
      throw DomainError("outage probability target must lie in (0, 1]");
    }
  }
}

void LinkScenario::validate() const {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw DomainError("wavelength must be positive");
  }
  if (!(range_m > 0.0) || !std::isfinite(range_m)) {
    throw DomainError("range must be positive");
  }
  if (!(p_avg_w > 0.0) || !std::isfinite(p_avg_w)) {
    throw DomainError("average power must be positive");
  }
  if (!std::isfinite(tx.gain_db) || !std::isfinite(rx.gain_db)) {
    throw DomainError("antenna gains must be finite");
  }
  check_signed_loss(tx.efficiency_db, "transmit efficiency");
  check_signed_loss(rx.efficiency_db, "receive efficiency");
  check_signed_loss(other_losses_db, "other losses");
  if (!(n_b_phe_per_ns >= 0.0) || !std::isfinite(n_b_phe_per_ns)) {
    throw DomainError("background flux must be non-negative");
  }
  if (!(required_margin_db >= 0.0) || !std::isfinite(required_margin_db)) {
    throw DomainError("required link margin must be non-negative");
  }
  if (fer_target && (!(*fer_target > 0.0) || !(*fer_target < 1.0))) {
    throw DomainError("frame error rate target must lie in (0, 1)");
  }
  pointing.validate();
  scppm.validate();
}

double space_loss_db(double wavelength_m, double range_m) {
  if (!(wavelength_m > 0.0) || !(range_m > 0.0)) {
    throw DomainError("space loss needs positive wavelength and range");
  }
  const double ratio = wavelength_m / (4.0 * kPi * range_m);
  return 20.0 * std::log10(ratio);
}

double pointing_attenuation_db(const LinkScenario& scenario) {
  scenario.validate();
  const PointingSpec& p = scenario.pointing;
  if (p.approach == PointingApproach::kDeterministic) {
    double total = 0.0;
    if (p.tx_accuracy_rad > 0.0) {
      total += outage::deterministic_margin_db(outage::LinkEndPointing{
          linear_from_db(scenario.tx.gain_db), p.loss,
          pointing::AngularErrorModel::worst_case(p.tx_accuracy_rad)});
    }
    if (p.rx_accuracy_rad > 0.0) {
      total += outage::deterministic_margin_db(outage::LinkEndPointing{
          linear_from_db(scenario.rx.gain_db), p.loss,
          pointing::AngularErrorModel::worst_case(p.rx_accuracy_rad)});
    }
    return total;
  }
  if (p.tx_accuracy_rad == 0.0 && p.rx_accuracy_rad == 0.0) return 0.0;
  const auto tx_end = outage_end(scenario.tx, p.loss, p.tx_accuracy_rad);
  const auto rx_end = outage_end(scenario.rx, p.loss, p.rx_accuracy_rad);
  return outage::solve_margin_db(tx_end, rx_end, p.p_out_target);
}

double received_power_dbw(const LinkScenario& scenario) {
  scenario.validate();
  return db_from_linear(scenario.p_avg_w) + scenario.tx.gain_db +
         scenario.tx.efficiency_db +
         space_loss_db(scenario.wavelength_m, scenario.range_m) +
         scenario.rx.gain_db + scenario.rx.efficiency_db +
         scenario.other_losses_db - pointing_attenuation_db(scenario);
}

double received_flux_db(const LinkScenario& scenario) {
  const double photon_db =
      db_from_linear(scenario.wavelength_m / (kPlanck * kSpeedOfLight));
  return received_power_dbw(scenario) + photon_db +
         db_from_linear(kNanosecond);
}

double received_flux_phe_per_ns(const LinkScenario& scenario) {
  scenario.validate();
  const double spread =
      scenario.wavelength_m / (4.0 * kPi * scenario.range_m);
  double pointing_fraction = 1.0;
  const PointingSpec& p = scenario.pointing;
  if (p.approach == PointingApproach::kDeterministic) {
    if (p.tx_accuracy_rad > 0.0) {
      pointing_fraction *= pointing::loss_fraction(
          p.loss, linear_from_db(scenario.tx.gain_db), p.tx_accuracy_rad);
    }
    if (p.rx_accuracy_rad > 0.0) {
      pointing_fraction *= pointing::loss_fraction(
          p.loss, linear_from_db(scenario.rx.gain_db), p.rx_accuracy_rad);
    }
  } else {
    pointing_fraction = linear_from_db(-pointing_attenuation_db(scenario));
  }
  const double received_w =
      scenario.p_avg_w * linear_from_db(scenario.tx.gain_db) *
      linear_from_db(scenario.tx.efficiency_db) * spread * spread *
      linear_from_db(scenario.rx.gain_db) *
      linear_from_db(scenario.rx.efficiency_db) *
      linear_from_db(scenario.other_losses_db) * pointing_fraction;
  const double photons_per_s =
      received_w * scenario.wavelength_m / (kPlanck * kSpeedOfLight);
  return photons_per_s * kNanosecond;
}

signaling::RegistryKey registry_key(const LinkScenario& scenario) {
  signaling::RegistryKey key;
  key.ppm_order = scenario.scppm.ppm_order;
  key.code_rate = scenario.scppm.code_rate;
  key.slot_time_ns = scenario.scppm.slot_time_s / kNanosecond;
  key.n_b_phe_per_ns = scenario.n_b_phe_per_ns;
  return key;
}

double link_margin_db(const LinkScenario& scenario,
                      const signaling::RequiredFluxRegistry& registry) {
  return received_flux_db(scenario) -
         registry.required_flux_db(registry_key(scenario));
}

double max_range_au(const LinkScenario& scenario,
                    const signaling::RequiredFluxRegistry& registry) {
  // Only the spreading term depends on range, so the margin surplus at the
  // scenario's own range converts directly: each doubling of range costs
  // 20 log10(2) dB.
  const double surplus =
      link_margin_db(scenario, registry) - scenario.required_margin_db;
  const double range_m = scenario.range_m * std::pow(10.0, surplus / 20.0);
  return range_m / kAstronomicalUnit;
}

BudgetReport budget_report(const LinkScenario& scenario,
                           const signaling::RequiredFluxRegistry& registry) {
  scenario.validate();
  BudgetReport report;
  BudgetSummary& sum = report.summary;

  const double slot_ns = scenario.scppm.slot_time_s / kNanosecond;
  sum.data_rate_bps = signaling::data_rate_bps(scenario.scppm);
  sum.peak_power_w = signaling::peak_power_w(scenario.scppm, scenario.p_avg_w);
  sum.noise_per_slot = signaling::noise_photons_per_slot(
      scenario.n_b_phe_per_ns, scenario.scppm.slot_time_s);
  sum.space_loss_db = space_loss_db(scenario.wavelength_m, scenario.range_m);
  sum.pointing_db = -pointing_attenuation_db(scenario);
  sum.received_power_dbw = received_power_dbw(scenario);
  sum.received_flux_db = received_flux_db(scenario);
  sum.received_flux_phe_per_ns = received_flux_phe_per_ns(scenario);
  sum.required_flux_db = registry.required_flux_db(registry_key(scenario));
  sum.required_flux_phe_per_ns = linear_from_db(sum.required_flux_db);
  const double photon_db =
      db_from_linear(scenario.wavelength_m / (kPlanck * kSpeedOfLight));
  sum.min_power_dbw =
      sum.required_flux_db - photon_db - db_from_linear(kNanosecond);
  sum.link_margin_db = sum.received_flux_db - sum.required_flux_db;
  sum.max_range_au = max_range_au(scenario, registry);

  auto add = [&](const std::string& section, const std::string& key,
                 const std::string& label, std::optional<double> db,
                 std::optional<double> linear, const std::string& unit,
                 const std::string& text = "") {
    report.lines.push_back(BudgetLine{section, key, label, db, linear, unit,
                                      text});
  };

  std::ostringstream rate_text;
  rate_text << scenario.scppm.code_rate.num << '/'
            << scenario.scppm.code_rate.den;
  add("signaling", "ppm_order", "PPM order", {}, {}, "",
      std::to_string(scenario.scppm.ppm_order));
  add("signaling", "code_rate", "code rate", {}, {}, "", rate_text.str());
  add("signaling", "slot_time", "slot time", {}, slot_ns, "ns");
  add("signaling", "guard_fraction", "guard fraction", {},
      scenario.scppm.guard_fraction, "");
  add("signaling", "noise_flux", "background flux",
      db_from_linear(scenario.n_b_phe_per_ns), scenario.n_b_phe_per_ns,
      "phe/ns");
  add("signaling", "noise_per_slot", "background per slot", {},
      sum.noise_per_slot, "phe/slot");

  add("transmitter", "average_power", "average power",
      db_from_linear(scenario.p_avg_w), scenario.p_avg_w, "W");
  add("transmitter", "peak_power", "peak power",
      db_from_linear(sum.peak_power_w), sum.peak_power_w, "W");
  add("transmitter", "tx_gain", "antenna gain", scenario.tx.gain_db, {}, "");
  add("transmitter", "tx_efficiency", "efficiency", scenario.tx.efficiency_db,
      {}, "");
  add("transmitter", "tx_accuracy", "pointing accuracy", {},
      scenario.pointing.tx_accuracy_rad / kMicroradian, "urad");

  add("channel", "range", "range", {},
      scenario.range_m / kAstronomicalUnit, "AU");
  add("channel", "space_loss", "space loss", sum.space_loss_db, {}, "");
  add("channel", "pointing", "pointing loss", sum.pointing_db, {}, "");
  add("channel", "other_losses", "other losses", scenario.other_losses_db, {},
      "");

  add("receiver", "rx_gain", "antenna gain", scenario.rx.gain_db, {}, "");
  add("receiver", "rx_efficiency", "efficiency", scenario.rx.efficiency_db,
      {}, "");
  add("receiver", "rx_accuracy", "pointing accuracy", {},
      scenario.pointing.rx_accuracy_rad / kMicroradian, "urad");

  add("performance", "received_power", "received power",
      sum.received_power_dbw, linear_from_db(sum.received_power_dbw), "W");
  add("performance", "received_flux", "received flux", sum.received_flux_db,
      sum.received_flux_phe_per_ns, "phe/ns");
  add("performance", "required_flux", "required flux", sum.required_flux_db,
      sum.required_flux_phe_per_ns, "phe/ns");
  add("performance", "min_power", "required power", sum.min_power_dbw,
      linear_from_db(sum.min_power_dbw), "W");
  add("performance", "link_margin", "link margin", sum.link_margin_db, {},
      "");
  if (scenario.fer_target) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", *scenario.fer_target);
    add("performance", "fer_target", "frame error rate target", {},
        *scenario.fer_target, "", buf);
  }
  add("performance", "data_rate", "data rate", {}, sum.data_rate_bps,
      "bit/s");
  add("performance", "max_range", "max range at required margin", {},
      sum.max_range_au, "AU");
  return report;
}

std::string render_text(const BudgetReport& report, bool full_precision) {
  std::ostringstream out;
  std::string section;
  for (const auto& line : report.lines) {
    if (line.section != section) {
      if (!section.empty()) out << '\n';
      section = line.section;
      out << "== " << section << " ==\n";
    }
    std::string value;
    if (line.value_db) {
      value += full_precision ? format_full(*line.value_db)
                              : format_fixed(*line.value_db, 2);
      value += " dB";
    }
    if (line.value_linear) {
      if (!value.empty()) value += "  ";
      value += full_precision ? format_full(*line.value_linear)
                              : format_sig(*line.value_linear);
      if (!line.unit.empty()) value += " " + line.unit;
    }
    if (!line.text.empty() && !line.value_db && !line.value_linear) {
      value = line.text;
    }
    out << "  " << line.label;
    const std::size_t pad =
        line.label.size() < 26 ? 26 - line.label.size() : 1;
    out << std::string(pad, ' ') << value << '\n';
  }
  return out.str();
}

std::string render_records(const BudgetReport& report) {
  std::ostringstream out;
  for (const auto& line : report.lines) {
    const std::string base = line.section + "." + line.key;
    if (line.value_db) out << base << ".db=" << format_full(*line.value_db) << '\n';
    if (line.value_linear) {
      out << base << ".linear=" << format_full(*line.value_linear) << '\n';
    }
    if (!line.text.empty()) out << base << ".text=" << line.text << '\n';
  }
  const BudgetSummary& s = report.summary;
  out << "summary.data_rate_bps=" << format_full(s.data_rate_bps) << '\n';
  out << "summary.peak_power_w=" << format_full(s.peak_power_w) << '\n';
  out << "summary.noise_per_slot=" << format_full(s.noise_per_slot) << '\n';
  out << "summary.space_loss_db=" << format_full(s.space_loss_db) << '\n';
  out << "summary.pointing_db=" << format_full(s.pointing_db) << '\n';
  out << "summary.received_power_dbw=" << format_full(s.received_power_dbw)
      << '\n';
  out << "summary.received_flux_db=" << format_full(s.received_flux_db)
      << '\n';
  out << "summary.received_flux_phe_per_ns="
      << format_full(s.received_flux_phe_per_ns) << '\n';
  out << "summary.required_flux_db=" << format_full(s.required_flux_db)
      << '\n';
  out << "summary.required_flux_phe_per_ns="
      << format_full(s.required_flux_phe_per_ns) << '\n';
  out << "summary.min_power_dbw=" << format_full(s.min_power_dbw) << '\n';
  out << "summary.link_margin_db=" << format_full(s.link_margin_db) << '\n';
  out << "summary.max_range_au=" << format_full(s.max_range_au) << '\n';
  return out.str();
}

std::string render_csv(const BudgetReport& report) {
  std::ostringstream out;
  out << "section,key,label,db,linear,unit,text\n";
  for (const auto& line : report.lines) {
    out << line.section << ',' << line.key << ',' << line.label << ',';
    if (line.value_db) out << format_full(*line.value_db);
    out << ',';
    if (line.value_linear) out << format_full(*line.value_linear);
    out << ',' << line.unit << ',' << line.text << '\n';
  }
  return out.str();
}

RangeTable range_table(const LinkScenario& base, PointingApproach approach,
                       const std::vector<double>& accuracies_urad,
                       const std::vector<int>& orders,
                       const signaling::RequiredFluxRegistry& registry) {
  base.validate();
  if (accuracies_urad.empty() || orders.empty()) {
    throw DomainError("range table needs at least one accuracy and one order");
  }
  RangeTable table;
  table.approach = approach;
  table.orders = orders;
  for (int order : orders) {
    signaling::ScppmConfig config = base.scppm;
    config.ppm_order = order;
    table.data_rates_bps.push_back(signaling::data_rate_bps(config));
  }
  for (double acc_urad : accuracies_urad) {
    if (!(acc_urad > 0.0)) {
      throw DomainError("range table accuracies must be positive");
    }
    const double acc_rad = acc_urad * kMicroradian;
    gainopt::GainOptProblem problem;
    problem.approach = approach == PointingApproach::kDeterministic
                           ? gainopt::Approach::kDeterministic
                           : gainopt::Approach::kOutage;
    problem.loss = base.pointing.loss;
    problem.accuracy =
        approach == PointingApproach::kDeterministic
            ? pointing::AngularErrorModel::worst_case(acc_rad)
            : pointing::AngularErrorModel::rayleigh(acc_rad);
    problem.p_out_target = base.pointing.p_out_target;
    const auto opt = gainopt::optimal_gain(problem);

    RangeTableRow row;
    row.accuracy_urad = acc_urad;
    for (int order : orders) {
      LinkScenario cell = base;
      cell.tx.gain_db = opt.gain_db;
      cell.rx.gain_db = opt.gain_db;
      cell.pointing.approach = approach;
      cell.pointing.tx_accuracy_rad = acc_rad;
      cell.pointing.rx_accuracy_rad = acc_rad;
      cell.scppm.ppm_order = order;
      row.range_au.push_back(max_range_au(cell, registry));
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string render_range_table(const RangeTable& table, bool full_precision) {
  std::ostringstream out;
  out << "accuracy_urad";
  for (int order : table.orders) out << ",M=" << order;
  out << '\n';
  out << "rate_kbps";
  for (double rate : table.data_rates_bps) {
    out << ',';
    out << (full_precision ? format_full(rate / 1e3)
                           : format_fixed(rate / 1e3, 2));
  }
  out << '\n';
  for (const auto& row : table.rows) {
    out << (full_precision ? format_full(row.accuracy_urad)
                           : format_fixed(row.accuracy_urad, 2));
    for (double range : row.range_au) {
      out << ',';
      out << (full_precision ? format_full(range) : format_fixed(range, 3));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dsol::budget

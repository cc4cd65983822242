#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsol/budget.hpp"
#include "dsol/errors.hpp"
#include "dsol/gain_opt.hpp"
#include "dsol/outage.hpp"
#include "dsol/pointing.hpp"
#include "dsol/random.hpp"
#include "dsol/scenario.hpp"
#include "dsol/units.hpp"

namespace {

void print_value(const std::string& name, double value,
                 const std::string& format, bool full) {
  if (format == "records") {
    std::printf("%s=%.17g\n", name.c_str(), value);
  } else if (full) {
    std::printf("%s = %.17g\n", name.c_str(), value);
  } else {
    std::printf("%s = %.6f\n", name.c_str(), value);
  }
}

dsol::pointing::PointingLossModel make_loss(const std::string& name,
                                            double alpha) {
  if (name == "gaussian") {
    return dsol::pointing::PointingLossModel::gaussian_beam();
  }
  if (name == "circular") {
    return dsol::pointing::PointingLossModel::circular_aperture();
  }
  return dsol::pointing::PointingLossModel::exp_approx(alpha);
}

// A zero sigma disables the end (zero gain removes its contribution).
dsol::outage::LinkEndPointing make_end(
    double gain_db, double sigma_urad, double eta_urad,
    const dsol::pointing::PointingLossModel& loss) {
  if (sigma_urad <= 0.0) {
    return dsol::outage::LinkEndPointing{
        0.0, loss, dsol::pointing::AngularErrorModel::rayleigh(1.0)};
  }
  const double sigma = sigma_urad * dsol::kMicroradian;
  auto error =
      eta_urad > 0.0
          ? dsol::pointing::AngularErrorModel::rician(
                sigma, eta_urad * dsol::kMicroradian)
          : dsol::pointing::AngularErrorModel::rayleigh(sigma);
  return dsol::outage::LinkEndPointing{dsol::linear_from_db(gain_db), loss,
                                       error};
}

std::string resolve_registry(const std::string& flag_value,
                             const std::string& scenario_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("DSOL_REGISTRY")) {
    if (*env != '\0') return env;
  }
  return scenario_value;
}

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

SweepRange parse_sweep(const std::string& text) {
  SweepRange range;
  char extra = '\0';
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &range.lo, &range.hi,
                  &range.step, &extra) != 3) {
    throw dsol::ParseError("--sweep expects LO:HI:STEP, got '" + text + "'");
  }
  return range;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep-space optical link analysis"};
  app.require_subcommand(1);

  const auto format_check = CLI::IsMember({"text", "records", "csv"});
  const auto scalar_format_check = CLI::IsMember({"text", "records"});
  const auto precision_check = CLI::IsMember({"display", "full"});
  const auto loss_check = CLI::IsMember({"gaussian", "circular", "exp_approx"});
  const auto approach_check = CLI::IsMember({"deterministic", "outage"});

  // pointing: attenuation of one end at a fixed offset.
  std::string p_loss = "gaussian";
  double p_alpha = dsol::pointing::kDefaultExpApproxAlpha;
  double p_gain_db = 0.0;
  double p_theta_urad = 0.0;
  std::string p_format = "text";
  std::string p_precision = "display";
  auto* pointing_cmd =
      app.add_subcommand("pointing", "Pointing loss at a fixed offset angle");
  pointing_cmd->add_option("--loss", p_loss, "Loss model")->check(loss_check);
  pointing_cmd->add_option("--alpha", p_alpha,
                           "Exponential approximation coefficient");
  pointing_cmd->add_option("--gain-db", p_gain_db, "Antenna gain, dB")
      ->required();
  pointing_cmd
      ->add_option("--theta-urad", p_theta_urad, "Offset angle, microradians")
      ->required();
  pointing_cmd->add_option("--format", p_format)->check(scalar_format_check);
  pointing_cmd->add_option("--precision", p_precision)->check(precision_check);

  // outage: exceedance probability of a pointing margin.
  std::string o_loss = "gaussian";
  double o_alpha = dsol::pointing::kDefaultExpApproxAlpha;
  double o_tx_gain_db = 0.0, o_rx_gain_db = 0.0;
  double o_tx_sigma_urad = 0.0, o_rx_sigma_urad = 0.0;
  double o_tx_eta_urad = 0.0, o_rx_eta_urad = 0.0;
  double o_margin_db = 0.0;
  bool o_numeric = false;
  std::uint64_t o_trials = 0;
  std::uint64_t o_seed = 12345;
  std::string o_format = "text";
  std::string o_precision = "display";
  auto* outage_cmd = app.add_subcommand(
      "outage", "Probability that pointing loss exceeds a margin");
  outage_cmd->add_option("--loss", o_loss)->check(loss_check);
  outage_cmd->add_option("--alpha", o_alpha);
  outage_cmd->add_option("--tx-gain-db", o_tx_gain_db)->required();
  outage_cmd->add_option("--rx-gain-db", o_rx_gain_db)->required();
  outage_cmd
      ->add_option("--tx-sigma-urad", o_tx_sigma_urad,
                   "Rayleigh sigma, microradians (0 disables the end)")
      ->required();
  outage_cmd
      ->add_option("--rx-sigma-urad", o_rx_sigma_urad,
                   "Rayleigh sigma, microradians (0 disables the end)")
      ->required();
  outage_cmd->add_option("--tx-eta-urad", o_tx_eta_urad,
                         "Rician bias angle, microradians");
  outage_cmd->add_option("--rx-eta-urad", o_rx_eta_urad,
                         "Rician bias angle, microradians");
  outage_cmd->add_option("--margin-db", o_margin_db)->required();
  outage_cmd->add_flag("--numeric", o_numeric,
                       "Also integrate the probability numerically");
  outage_cmd->add_option("--monte-carlo", o_trials,
                         "Also estimate with this many trials");
  outage_cmd->add_option("--seed", o_seed, "Monte Carlo seed");
  outage_cmd->add_option("--format", o_format)->check(scalar_format_check);
  outage_cmd->add_option("--precision", o_precision)->check(precision_check);

  // margin: smallest margin meeting an outage target.
  std::string m_loss = "gaussian";
  double m_alpha = dsol::pointing::kDefaultExpApproxAlpha;
  double m_tx_gain_db = 0.0, m_rx_gain_db = 0.0;
  double m_tx_sigma_urad = 0.0, m_rx_sigma_urad = 0.0;
  double m_pout = 0.05;
  std::string m_format = "text";
  std::string m_precision = "display";
  auto* margin_cmd = app.add_subcommand(
      "margin", "Pointing margin that meets an outage probability target");
  margin_cmd->add_option("--loss", m_loss)->check(loss_check);
  margin_cmd->add_option("--alpha", m_alpha);
  margin_cmd->add_option("--tx-gain-db", m_tx_gain_db)->required();
  margin_cmd->add_option("--rx-gain-db", m_rx_gain_db)->required();
  margin_cmd->add_option("--tx-sigma-urad", m_tx_sigma_urad)->required();
  margin_cmd->add_option("--rx-sigma-urad", m_rx_sigma_urad)->required();
  margin_cmd->add_option("--pout", m_pout, "Outage probability target");
  margin_cmd->add_option("--format", m_format)->check(scalar_format_check);
  margin_cmd->add_option("--precision", m_precision)->check(precision_check);

  // optimize: antenna gain maximizing effective gain.
  std::string g_approach;
  std::string g_loss = "gaussian";
  double g_alpha = dsol::pointing::kDefaultExpApproxAlpha;
  double g_accuracy_urad = 0.0;
  double g_pout = 0.05;
  bool g_numeric = false;
  double g_lo_db = 60.0, g_hi_db = 160.0;
  std::string g_sweep;
  std::string g_format = "text";
  std::string g_precision = "display";
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "Antenna gain that maximizes gain net of pointing loss");
  optimize_cmd->add_option("--approach", g_approach)
      ->required()
      ->check(approach_check);
  optimize_cmd->add_option("--loss", g_loss)->check(loss_check);
  optimize_cmd->add_option("--alpha", g_alpha);
  optimize_cmd
      ->add_option("--accuracy-urad", g_accuracy_urad,
                   "Worst-case offset or Rayleigh sigma, microradians")
      ->required();
  optimize_cmd->add_option("--pout", g_pout);
  optimize_cmd->add_flag("--numeric", g_numeric, "Force the numeric search");
  optimize_cmd->add_option("--bracket-lo-db", g_lo_db);
  optimize_cmd->add_option("--bracket-hi-db", g_hi_db);
  optimize_cmd->add_option(
      "--sweep", g_sweep, "Emit a LO:HI:STEP sweep of the objective as CSV");
  optimize_cmd->add_option("--format", g_format)->check(scalar_format_check);
  optimize_cmd->add_option("--precision", g_precision)->check(precision_check);

  // budget: full link budget from a scenario file.
  std::string b_scenario, b_registry, b_format, b_precision;
  auto* budget_cmd =
      app.add_subcommand("budget", "Link budget from a scenario file");
  budget_cmd->add_option("--scenario", b_scenario)->required();
  budget_cmd->add_option("--registry", b_registry,
                         "Registry path override (also: DSOL_REGISTRY)");
  budget_cmd->add_option("--format", b_format)->check(format_check);
  budget_cmd->add_option("--precision", b_precision)->check(precision_check);

  // range: link margin and maximum range from a scenario file.
  std::string r_scenario, r_registry;
  std::string r_format = "text";
  std::string r_precision = "display";
  auto* range_cmd = app.add_subcommand(
      "range", "Link margin and maximum range from a scenario file");
  range_cmd->add_option("--scenario", r_scenario)->required();
  range_cmd->add_option("--registry", r_registry);
  range_cmd->add_option("--format", r_format)->check(scalar_format_check);
  range_cmd->add_option("--precision", r_precision)->check(precision_check);

  // table: maximum range per (accuracy, PPM order) with re-optimized gains.
  std::string t_scenario, t_registry, t_approach;
  std::vector<double> t_accuracies;
  std::vector<int> t_orders;
  std::string t_precision = "display";
  auto* table_cmd = app.add_subcommand(
      "table", "Maximum-range table over accuracies and PPM orders");
  table_cmd->add_option("--scenario", t_scenario)->required();
  table_cmd->add_option("--registry", t_registry);
  table_cmd->add_option("--approach", t_approach)
      ->required()
      ->check(approach_check);
  table_cmd->add_option("--accuracies", t_accuracies, "Microradians")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--orders", t_orders, "PPM orders")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--precision", t_precision)->check(precision_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(pointing_cmd)) {
      const auto loss = make_loss(p_loss, p_alpha);
      const double gain = dsol::linear_from_db(p_gain_db);
      const double theta = p_theta_urad * dsol::kMicroradian;
      const double nats = dsol::pointing::attenuation_nats(loss, gain, theta);
      const bool full = p_precision == "full";
      print_value("attenuation_db", dsol::db_from_nats(nats), p_format, full);
      print_value("loss_fraction",
                  dsol::pointing::loss_fraction(loss, gain, theta), p_format,
                  full);
    } else if (app.got_subcommand(outage_cmd)) {
      const auto loss = make_loss(o_loss, o_alpha);
      const auto tx =
          make_end(o_tx_gain_db, o_tx_sigma_urad, o_tx_eta_urad, loss);
      const auto rx =
          make_end(o_rx_gain_db, o_rx_sigma_urad, o_rx_eta_urad, loss);
      const bool full = o_precision == "full";
      const bool closed_form_applies =
          (tx.gain_linear == 0.0 ||
           tx.error.kind() == dsol::pointing::ErrorKind::kRayleigh) &&
          (rx.gain_linear == 0.0 ||
           rx.error.kind() == dsol::pointing::ErrorKind::kRayleigh);
      if (closed_form_applies || (!o_numeric && o_trials == 0)) {
        print_value("p_closed_form",
                    dsol::outage::outage_closed_form(tx, rx, o_margin_db),
                    o_format, full);
      }
      if (o_numeric) {
        print_value("p_numeric",
                    dsol::outage::outage_numeric(tx, rx, o_margin_db),
                    o_format, full);
      }
      if (o_trials > 0) {
        dsol::RandomStream stream(o_seed);
        const auto mc = dsol::outage::outage_monte_carlo(tx, rx, o_margin_db,
                                                         o_trials, stream);
        print_value("p_monte_carlo", mc.p_estimate, o_format, full);
        print_value("std_error", mc.std_error, o_format, full);
        if (o_format == "records") {
          std::printf("exceed_count=%llu\ntrials=%llu\n",
                      static_cast<unsigned long long>(mc.exceed_count),
                      static_cast<unsigned long long>(mc.trials));
        } else {
          std::printf("exceed_count = %llu\ntrials = %llu\n",
                      static_cast<unsigned long long>(mc.exceed_count),
                      static_cast<unsigned long long>(mc.trials));
        }
      }
    } else if (app.got_subcommand(margin_cmd)) {
      const auto loss = make_loss(m_loss, m_alpha);
      const auto tx = make_end(m_tx_gain_db, m_tx_sigma_urad, 0.0, loss);
      const auto rx = make_end(m_rx_gain_db, m_rx_sigma_urad, 0.0, loss);
      print_value("margin_db", dsol::outage::solve_margin_db(tx, rx, m_pout),
                  m_format, m_precision == "full");
    } else if (app.got_subcommand(optimize_cmd)) {
      dsol::gainopt::GainOptProblem problem;
      problem.approach = g_approach == "deterministic"
                             ? dsol::gainopt::Approach::kDeterministic
                             : dsol::gainopt::Approach::kOutage;
      problem.loss = make_loss(g_loss, g_alpha);
      const double acc_rad = g_accuracy_urad * dsol::kMicroradian;
      problem.accuracy =
          problem.approach == dsol::gainopt::Approach::kDeterministic
              ? dsol::pointing::AngularErrorModel::worst_case(acc_rad)
              : dsol::pointing::AngularErrorModel::rayleigh(acc_rad);
      problem.p_out_target = g_pout;
      problem.bracket_lo_db = g_lo_db;
      problem.bracket_hi_db = g_hi_db;
      const bool full = g_precision == "full";
      if (!g_sweep.empty()) {
        const auto range = parse_sweep(g_sweep);
        const auto rows = dsol::gainopt::sweep_effective_gain(
            problem, range.lo, range.hi, range.step);
        std::printf("gain_db,attenuation_db,effective_gain_db\n");
        for (const auto& row : rows) {
          if (full) {
            std::printf("%.17g,%.17g,%.17g\n", row.gain_db,
                        row.attenuation_db, row.effective_gain_db);
          } else {
            std::printf("%.6f,%.6f,%.6f\n", row.gain_db, row.attenuation_db,
                        row.effective_gain_db);
          }
        }
      } else {
        const auto result = g_numeric ? dsol::gainopt::optimal_gain_numeric(problem)
                                      : dsol::gainopt::optimal_gain(problem);
        print_value("gain_db", result.gain_db, g_format, full);
        print_value("attenuation_db", result.attenuation_db, g_format, full);
        print_value("effective_gain_db", result.effective_gain_db, g_format,
                    full);
      }
    } else if (app.got_subcommand(budget_cmd)) {
      const auto file = dsol::scenario::load_scenario(b_scenario);
      const auto registry = dsol::signaling::RequiredFluxRegistry::load(
          resolve_registry(b_registry, file.registry_path));
      const auto report = dsol::budget::budget_report(file.scenario, registry);
      const std::string format =
          b_format.empty() ? file.output_format : b_format;
      const std::string precision =
          b_precision.empty() ? file.output_precision : b_precision;
      if (format == "records") {
        std::fputs(dsol::budget::render_records(report).c_str(), stdout);
      } else if (format == "csv") {
        std::fputs(dsol::budget::render_csv(report).c_str(), stdout);
      } else {
        std::fputs(
            dsol::budget::render_text(report, precision == "full").c_str(),
            stdout);
      }
    } else if (app.got_subcommand(range_cmd)) {
      const auto file = dsol::scenario::load_scenario(r_scenario);
      const auto registry = dsol::signaling::RequiredFluxRegistry::load(
          resolve_registry(r_registry, file.registry_path));
      const bool full = r_precision == "full";
      print_value("received_flux_db",
                  dsol::budget::received_flux_db(file.scenario), r_format,
                  full);
      print_value("required_flux_db",
                  registry.required_flux_db(
                      dsol::budget::registry_key(file.scenario)),
                  r_format, full);
      print_value("link_margin_db",
                  dsol::budget::link_margin_db(file.scenario, registry),
                  r_format, full);
      print_value("max_range_au",
                  dsol::budget::max_range_au(file.scenario, registry),
                  r_format, full);
    } else if (app.got_subcommand(table_cmd)) {
      const auto file = dsol::scenario::load_scenario(t_scenario);
      const auto registry = dsol::signaling::RequiredFluxRegistry::load(
          resolve_registry(t_registry, file.registry_path));
      const auto approach =
          t_approach == "deterministic"
              ? dsol::budget::PointingApproach::kDeterministic
              : dsol::budget::PointingApproach::kOutage;
      const auto table = dsol::budget::range_table(
          file.scenario, approach, t_accuracies, t_orders, registry);
      std::fputs(dsol::budget::render_range_table(table, t_precision == "full")
                     .c_str(),
                 stdout);
    }
  } catch (const dsol::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const dsol::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const dsol::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}

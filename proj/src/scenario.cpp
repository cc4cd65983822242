#include "dsol/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "dsol/errors.hpp"
#include "dsol/units.hpp"

namespace dsol::scenario {

namespace {

struct RawValue {
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawFile {
  std::string path;
  std::map<std::string, std::map<std::string, RawValue>> sections;

  std::string at(int line) const {
    return path + ":" + std::to_string(line);
  }
};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

RawFile parse_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open scenario file: " + path);
  }
  RawFile raw;
  raw.path = path;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(raw.at(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ParseError(raw.at(line_no) + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(raw.at(line_no) + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ParseError(raw.at(line_no) + ": key appears before any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError(raw.at(line_no) + ": expected 'key = value'");
    }
    auto [it, inserted] =
        raw.sections[section].emplace(key, RawValue{value, line_no, false});
    if (!inserted) {
      throw ParseError(raw.at(line_no) + ": duplicate key '" + key +
                       "' in [" + section + "]");
    }
  }
  return raw;
}

class Fields {
 public:
  explicit Fields(RawFile raw) : raw_(std::move(raw)) {}

  bool has_section(const std::string& section) const {
    return raw_.sections.count(section) != 0;
  }

  void require_section(const std::string& section) {
    if (!has_section(section)) {
      throw ParseError(raw_.path + ": missing section [" + section + "]");
    }
  }

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) {
    auto sec = raw_.sections.find(section);
    if (sec == raw_.sections.end()) return std::nullopt;
    auto it = sec->second.find(key);
    if (it == sec->second.end()) return std::nullopt;
    it->second.used = true;
    last_line_ = it->second.line;
    return it->second.value;
  }

  std::string require(const std::string& section, const std::string& key) {
    auto value = get(section, key);
    if (!value) {
      throw ParseError(raw_.path + ": missing key '" + key + "' in [" +
                       section + "]");
    }
    return *value;
  }

  double require_double(const std::string& section, const std::string& key) {
    return to_double(require(section, key));
  }

  std::optional<double> get_double(const std::string& section,
                                   const std::string& key) {
    auto value = get(section, key);
    if (!value) return std::nullopt;
    return to_double(*value);
  }

  int require_int(const std::string& section, const std::string& key) {
    const std::string text = require(section, key);
    try {
      std::size_t used = 0;
      const int value = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return value;
    } catch (const std::exception&) {
      throw ParseError(where() + ": expected an integer, got '" + text + "'");
    }
  }

  // Call after consuming everything the format defines.
  void reject_unused() const {
    for (const auto& [section, keys] : raw_.sections) {
      for (const auto& [key, value] : keys) {
        if (!value.used) {
          throw ParseError(raw_.at(value.line) + ": unexpected key '" + key +
                           "' in [" + section + "]");
        }
      }
    }
  }

  std::string where() const { return raw_.at(last_line_); }
  const std::string& path() const { return raw_.path; }

 private:
  double to_double(const std::string& text) {
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return value;
    } catch (const std::exception&) {
      throw ParseError(where() + ": expected a number, got '" + text + "'");
    }
  }

  RawFile raw_;
  int last_line_ = 0;
};

pointing::PointingLossModel parse_loss_model(Fields& fields) {
  const std::string name = fields.require("pointing", "loss_model");
  if (name == "gaussian") {
    return pointing::PointingLossModel::gaussian_beam();
  }
  if (name == "circular") {
    return pointing::PointingLossModel::circular_aperture();
  }
  if (name == "exp_approx") {
    const auto alpha = fields.get_double("pointing", "alpha");
    return alpha ? pointing::PointingLossModel::exp_approx(*alpha)
                 : pointing::PointingLossModel::exp_approx();
  }
  throw ParseError(fields.where() +
                   ": loss_model must be gaussian, circular, or exp_approx");
}

}  // namespace

ScenarioFile load_scenario(const std::string& path) {
  Fields fields(parse_raw(path));
  for (const char* section :
       {"link", "pointing", "signaling", "channel", "registry"}) {
    fields.require_section(section);
  }

  ScenarioFile result;
  budget::LinkScenario& s = result.scenario;

  s.wavelength_m = fields.require_double("link", "wavelength_nm") * kNanometer;
  s.range_m = fields.require_double("link", "range_au") * kAstronomicalUnit;
  s.p_avg_w = fields.require_double("link", "average_power_w");
  s.tx.gain_db = fields.require_double("link", "tx_gain_db");
  s.tx.efficiency_db = fields.require_double("link", "tx_efficiency_db");
  s.rx.gain_db = fields.require_double("link", "rx_gain_db");
  s.rx.efficiency_db = fields.require_double("link", "rx_efficiency_db");
  s.other_losses_db = fields.require_double("link", "other_losses_db");
  s.required_margin_db =
      fields.require_double("link", "required_link_margin_db");

  const std::string approach = fields.require("pointing", "approach");
  s.pointing.loss = parse_loss_model(fields);
  if (approach == "deterministic") {
    s.pointing.approach = budget::PointingApproach::kDeterministic;
    s.pointing.tx_accuracy_rad =
        fields.require_double("pointing", "tx_theta_max_urad") * kMicroradian;
    s.pointing.rx_accuracy_rad =
        fields.require_double("pointing", "rx_theta_max_urad") * kMicroradian;
  } else if (approach == "outage") {
    s.pointing.approach = budget::PointingApproach::kOutage;
    s.pointing.tx_accuracy_rad =
        fields.require_double("pointing", "tx_sigma_urad") * kMicroradian;
    s.pointing.rx_accuracy_rad =
        fields.require_double("pointing", "rx_sigma_urad") * kMicroradian;
    if (auto pout = fields.get_double("pointing", "pout_target")) {
      s.pointing.p_out_target = *pout;
    }
  } else {
    throw ParseError(fields.where() +
                     ": approach must be deterministic or outage");
  }

  s.scppm.ppm_order = fields.require_int("signaling", "ppm_order");
  s.scppm.code_rate =
      signaling::parse_code_rate(fields.require("signaling", "code_rate"));
  s.scppm.slot_time_s =
      fields.require_double("signaling", "slot_time_ns") * kNanosecond;
  if (auto guard = fields.get_double("signaling", "guard_fraction")) {
    s.scppm.guard_fraction = *guard;
  }
  if (auto fer = fields.get_double("signaling", "fer_target")) {
    s.fer_target = *fer;
  }

  s.n_b_phe_per_ns =
      fields.require_double("channel", "background_flux_phe_per_ns");

  const std::string registry_path = fields.require("registry", "path");
  std::filesystem::path resolved(registry_path);
  if (resolved.is_relative()) {
    resolved = std::filesystem::path(fields.path()).parent_path() / resolved;
  }
  result.registry_path = resolved.string();

  if (fields.has_section("output")) {
    if (auto format = fields.get("output", "format")) {
      if (*format != "text" && *format != "records" && *format != "csv") {
        throw ParseError(fields.where() +
                         ": format must be text, records, or csv");
      }
      result.output_format = *format;
    }
    if (auto precision = fields.get("output", "precision")) {
      if (*precision != "display" && *precision != "full") {
        throw ParseError(fields.where() +
                         ": precision must be display or full");
      }
      result.output_precision = *precision;
    }
  }

  fields.reject_unused();
  s.validate();
  return result;
}

}  // namespace dsol::scenario

#include "dsol/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "dsol/errors.hpp"

namespace dsol::signaling {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
}

void check_code_rate(const CodeRate& rate) {
  if (rate.num <= 0 || rate.den <= 0 || rate.num > rate.den) {
    throw DomainError("code rate must be a fraction in (0, 1]");
  }
  if ((static_cast<long long>(ScppmConfig::kCodewordBits) * rate.num) %
          rate.den !=
      0) {
    throw DomainError(
        "code rate must divide the codeword into a whole number of "
        "information bits");
  }
}

std::string format_double(double value) {
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

}  // namespace

CodeRate parse_code_rate(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) {
    throw ParseError("code rate must look like 1/3, got '" + text + "'");
  }
  CodeRate rate;
  try {
    std::size_t used = 0;
    rate.num = std::stoi(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("");
    const std::string den_text = text.substr(slash + 1);
    rate.den = std::stoi(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ParseError("code rate must look like 1/3, got '" + text + "'");
  }
  return rate;
}

void ScppmConfig::validate() const {
  if (!is_power_of_two(ppm_order) || ppm_order < 4 || ppm_order > 256) {
    throw DomainError("PPM order must be a power of two between 4 and 256");
  }
  check_code_rate(code_rate);
  if (kCodewordBits % bits_per_symbol() != 0) {
    throw DomainError("codeword does not split into whole PPM symbols");
  }
  if (!(slot_time_s > 0.0) || !std::isfinite(slot_time_s)) {
    throw DomainError("slot time must be positive");
  }
  if (!(guard_fraction >= 0.0) || !std::isfinite(guard_fraction)) {
    throw DomainError("guard fraction must be non-negative");
  }
}

int ScppmConfig::bits_per_symbol() const {
  int bits = 0;
  for (int m = ppm_order; m > 1; m >>= 1) ++bits;
  return bits;
}

double data_rate_bps(const ScppmConfig& config) {
  config.validate();
  const double info_bits =
      ScppmConfig::kCodewordBits * config.code_rate.value() -
      ScppmConfig::kOverheadBits;
  const double symbols =
      static_cast<double>(ScppmConfig::kCodewordBits) /
      config.bits_per_symbol();
  const double duration = symbols * config.ppm_order * config.slot_time_s *
                          (1.0 + config.guard_fraction);
  return info_bits / duration;
}

double peak_power_w(double p_avg_w, int ppm_order, double guard_fraction) {
  if (!(p_avg_w >= 0.0) || !std::isfinite(p_avg_w)) {
    throw DomainError("average power must be non-negative");
  }
  if (ppm_order < 1) {
    throw DomainError("PPM order must be at least 1");
  }
  if (!(guard_fraction >= 0.0) || !std::isfinite(guard_fraction)) {
    throw DomainError("guard fraction must be non-negative");
  }
  return p_avg_w * ppm_order * (1.0 + guard_fraction);
}

double peak_power_w(const ScppmConfig& config, double p_avg_w) {
  config.validate();
  return peak_power_w(p_avg_w, config.ppm_order, config.guard_fraction);
}

double noise_photons_per_slot(double n_b_phe_per_ns, double slot_time_s) {
  if (!(n_b_phe_per_ns >= 0.0) || !std::isfinite(n_b_phe_per_ns)) {
    throw DomainError("background flux must be non-negative");
  }
  if (!(slot_time_s > 0.0) || !std::isfinite(slot_time_s)) {
    throw DomainError("slot time must be positive");
  }
  return n_b_phe_per_ns * slot_time_s * 1e9;
}

double slot_pmf(int k, double n_s_per_slot, double n_b_per_slot, bool pulsed) {
  if (k < 0) throw DomainError("photoelectron count must be non-negative");
  if (!(n_s_per_slot >= 0.0) || !(n_b_per_slot >= 0.0)) {
    throw DomainError("slot means must be non-negative");
  }
  const double mean = n_b_per_slot + (pulsed ? n_s_per_slot : 0.0);
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

std::string RegistryKey::to_string() const {
  std::ostringstream out;
  out << "ppm_order=" << ppm_order << " code_rate=" << code_rate.num << '/'
      << code_rate.den << " slot_time_ns=" << format_double(slot_time_ns)
      << " n_b_phe_per_ns=" << format_double(n_b_phe_per_ns);
  return out.str();
}

RequiredFluxRegistry RequiredFluxRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open registry file: " + path);
  }
  std::vector<RegistryEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int order = 0;
    std::string rate_text;
    double slot_ns = 0.0;
    double n_b = 0.0;
    double flux_db = 0.0;
    if (!(fields >> order)) continue;  // blank or comment-only line
    if (!(fields >> rate_text >> slot_ns >> n_b >> flux_db)) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'order rate slot_ns n_b flux_db'");
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": unexpected trailing field '" + extra + "'");
    }
    RegistryEntry entry;
    entry.key.ppm_order = order;
    entry.key.code_rate = parse_code_rate(rate_text);
    entry.key.slot_time_ns = slot_ns;
    entry.key.n_b_phe_per_ns = n_b;
    entry.ns_min_db = flux_db;
    entries.push_back(entry);
  }
  try {
    return from_entries(std::move(entries));
  } catch (const DomainError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

RequiredFluxRegistry RequiredFluxRegistry::from_entries(
    std::vector<RegistryEntry> entries) {
  for (const auto& entry : entries) {
    if (!is_power_of_two(entry.key.ppm_order) || entry.key.ppm_order < 2) {
      throw DomainError("registry entry has invalid PPM order: " +
                        entry.key.to_string());
    }
    check_code_rate(entry.key.code_rate);
    if (!(entry.key.slot_time_ns > 0.0) ||
        !(entry.key.n_b_phe_per_ns >= 0.0) ||
        !std::isfinite(entry.ns_min_db)) {
      throw DomainError("registry entry has invalid fields: " +
                        entry.key.to_string());
    }
  }
  // Group rows sharing everything but the PPM order and require the
  // required flux to fall strictly as the order grows.
  using GroupKey = std::tuple<int, int, double, double>;
  std::map<GroupKey, std::vector<const RegistryEntry*>> groups;
  for (const auto& entry : entries) {
    groups[GroupKey{entry.key.code_rate.num, entry.key.code_rate.den,
                    entry.key.slot_time_ns, entry.key.n_b_phe_per_ns}]
        .push_back(&entry);
  }
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const RegistryEntry* a, const RegistryEntry* b) {
                return a->key.ppm_order < b->key.ppm_order;
              });
    for (std::size_t i = 0; i + 1 < group.size(); ++i) {
      if (group[i]->key.ppm_order == group[i + 1]->key.ppm_order) {
        throw DomainError("registry has duplicate entry: " +
                          group[i]->key.to_string());
      }
      if (group[i]->ns_min_db <= group[i + 1]->ns_min_db) {
        throw DomainError(
            "registry violates monotonicity (higher PPM order must need "
            "less flux): " +
            group[i + 1]->key.to_string());
      }
    }
  }
  RequiredFluxRegistry registry;
  registry.entries_ = std::move(entries);
  return registry;
}

double RequiredFluxRegistry::required_flux_db(const RegistryKey& key) const {
  for (const auto& entry : entries_) {
    if (entry.key.ppm_order == key.ppm_order &&
        entry.key.code_rate == key.code_rate &&
        nearly_equal(entry.key.slot_time_ns, key.slot_time_ns) &&
        nearly_equal(entry.key.n_b_phe_per_ns, key.n_b_phe_per_ns)) {
      return entry.ns_min_db;
    }
  }
  throw RegistryKeyError("no registry entry for " + key.to_string());
}

bool RequiredFluxRegistry::contains(const RegistryKey& key) const {
  for (const auto& entry : entries_) {
    if (entry.key.ppm_order == key.ppm_order &&
        entry.key.code_rate == key.code_rate &&
        nearly_equal(entry.key.slot_time_ns, key.slot_time_ns) &&
        nearly_equal(entry.key.n_b_phe_per_ns, key.n_b_phe_per_ns)) {
      return true;
    }
  }
  return false;
}

}  // namespace dsol::signaling

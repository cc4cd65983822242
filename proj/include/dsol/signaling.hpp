#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsol::signaling {

// Rational channel code rate, e.g. {1, 3} for rate 1/3.
struct CodeRate {
  int num;
  int den;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const CodeRate& other) const {
    return num == other.num && den == other.den;
  }
};

// Parses "num/den", e.g. "1/3"; throws ParseError on anything else.
CodeRate parse_code_rate(const std::string& text);

// Serially concatenated PPM signaling configuration. The codeword is
// 15120 bits with 34 of them spent on termination and CRC overhead; a
// guard interval of guard_fraction * (PPM frame length) separates frames.
struct ScppmConfig {
  static constexpr int kCodewordBits = 15120;
  static constexpr int kOverheadBits = 34;

  int ppm_order;
  CodeRate code_rate;
  double slot_time_s;
  double guard_fraction = 0.25;

  void validate() const;
  int bits_per_symbol() const;  // log2(ppm_order)
};

// Information rate in bit/s: information bits per codeword divided by the
// codeword's on-air duration including guard time.
double data_rate_bps(const ScppmConfig& config);

// Laser peak power required to deliver p_avg_w on average when all energy
// is concentrated in one slot out of ppm_order, with the guard interval
// stretching each frame.
double peak_power_w(double p_avg_w, int ppm_order, double guard_fraction);
double peak_power_w(const ScppmConfig& config, double p_avg_w);

// Converts a background flux in photoelectrons per nanosecond into the
// mean photoelectron count per slot.
double noise_photons_per_slot(double n_b_phe_per_ns, double slot_time_s);

// Poisson photoelectron-count pmf for one slot: mean is signal-plus-noise
// in the pulsed slot, noise alone otherwise.
double slot_pmf(int k, double n_s_per_slot, double n_b_per_slot, bool pulsed);

// Identifies one operating point of the decoder performance registry.
struct RegistryKey {
  int ppm_order;
  CodeRate code_rate;
  double slot_time_ns;
  double n_b_phe_per_ns;

  std::string to_string() const;
};

struct RegistryEntry {
  RegistryKey key;
  double ns_min_db;  // required signal flux, dB photoelectrons per ns
};

// Required-flux lookup table keyed by (PPM order, code rate, slot time,
// background flux). Values are the minimum received signal flux at which
// the decoder meets its frame-error-rate target.
class RequiredFluxRegistry {
 public:
  static RequiredFluxRegistry load(const std::string& path);
  static RequiredFluxRegistry from_entries(std::vector<RegistryEntry> entries);

  // Required flux in dB phe/ns; throws RegistryKeyError naming the full
  // key when no entry matches.
  double required_flux_db(const RegistryKey& key) const;
  bool contains(const RegistryKey& key) const;

  const std::vector<RegistryEntry>& entries() const { return entries_; }

 private:
  std::vector<RegistryEntry> entries_;
};

}  // namespace dsol::signaling

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dsol {

// Deterministic random stream for the Monte Carlo paths. All variate
// transforms are explicit (not delegated to std:: distributions, whose
// algorithms are implementation-defined) so that a fixed seed yields the
// same sequence on every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1]; never returns 0, so log(u) is always finite.
  double uniform_open01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached, consuming two uniforms per two normals.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
    const double phi =
        2.0 * 3.14159265358979323846264338327950288 * uniform_open01();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Inverse-CDF transform of a uniform draw to a Rayleigh variate. Kept as a
// free function so tests can verify the sampler matches it bit for bit.
inline double rayleigh_from_uniform(double sigma, double u) {
  return sigma * std::sqrt(-2.0 * std::log(u));
}

}  // namespace dsol

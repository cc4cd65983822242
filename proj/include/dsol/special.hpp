#pragma once

namespace dsol {

// Bessel function of the first kind, order one. Power series for |x| <= 12,
// Hankel (modulus/phase) asymptotic expansion beyond. Absolute error stays
// below ~1e-11 of the oscillation envelope sqrt(2/(pi*x)) over |x| <= 40,
// which keeps the relative error under 1e-10 away from the zeros.
double bessel_j1(double x);

// Modified Bessel function of the first kind, order zero, and its natural
// log. The log form is what the Rician density needs: I0 grows like e^x and
// would overflow long before the density's Gaussian factor pulls it back.
double bessel_i0(double x);
double log_bessel_i0(double x);

// First positive zero of J1 (and of the aperture pattern 2*J1(x)/x).
inline constexpr double kBesselJ1FirstZero = 3.8317059702075125;

}  // namespace dsol

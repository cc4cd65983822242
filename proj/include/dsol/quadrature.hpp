#pragma once

#include <functional>

namespace dsol {

// Adaptive Simpson integration of f over [a, b]. Subintervals are split
// until the local Richardson error estimate |S2 - S1|/15 meets its share of
// abs_tol; the returned value includes the standard S2 + (S2 - S1)/15
// correction. Throws NumericError when the recursion depth limit is reached
// before the estimate converges (the message carries the achieved error).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 48);

}  // namespace dsol

#include "dsol/quadrature.hpp"

#include <cmath>
#include <string>

#include "dsol/errors.hpp"

namespace dsol {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f;
  double worst_unconverged = 0.0;  // largest local estimate left at depth cap
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double err = (left + right - whole) / 15.0;
  if (std::fabs(err) <= tol || (b - a) < 1e-300) {
    return left + right + err;
  }
  if (depth <= 0) {
    st.worst_unconverged = std::fmax(st.worst_unconverged, std::fabs(err));
    return left + right + err;
  }
  return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  SimpsonState st{&f, 0.0};
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v =
      simpson_step(st, a, b, fa, fm, fb, whole, abs_tol, max_depth);
  if (st.worst_unconverged > abs_tol) {
    throw NumericError("quadrature did not converge: requested abs tol " +
                       std::to_string(abs_tol) + ", achieved about " +
                       std::to_string(st.worst_unconverged));
  }
  return v;
}

}  // namespace dsol

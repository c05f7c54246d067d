#pragma once

#include <functional>

namespace anovakit {

// Adaptive Gauss-Kronrod (G7,K15) integration with an absolute tolerance.
// Panels are split worst-error-first; ConvergenceError is raised (with the
// achieved error estimate) if the panel budget runs out. Node values are
// always taken strictly inside the interval, so integrable endpoint
// singularities (density poles at 0 for df < 2) are handled.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Integral over [a, +inf), mapped onto (0,1] via x = a + (1-t)/t.
double integrate_upper(const std::function<double(double)>& f, double a,
                       double abs_tol = 1e-12);

// Integral over (-inf, b], mapped onto (0,1] via x = b - (1-t)/t.
double integrate_lower(const std::function<double(double)>& f, double b,
                       double abs_tol = 1e-12);

} // namespace anovakit

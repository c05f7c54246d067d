#include "anovakit/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "anovakit/errors.hpp"

namespace anovakit {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK dqk15).
// kNodes holds the positive abscissae in decreasing order plus the centre;
// the Gauss nodes are the odd-indexed entries and the centre.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightsKronrod[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWeightsGauss[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

bool operator<(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);

    double result_kronrod = kWeightsKronrod[7] * fc;
    double result_gauss = kWeightsGauss[3] * fc;
    double result_abs = kWeightsKronrod[7] * std::fabs(fc);
    double values[7][2];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        values[j][0] = f1;
        values[j][1] = f2;
        result_kronrod += kWeightsKronrod[j] * (f1 + f2);
        result_abs += kWeightsKronrod[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1) result_gauss += kWeightsGauss[j / 2] * (f1 + f2);
    }

    // QUADPACK error heuristic: scale |K15-G7| by the deviation integral.
    const double mean = 0.5 * result_kronrod;
    double result_asc = kWeightsKronrod[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        result_asc +=
            kWeightsKronrod[j] * (std::fabs(values[j][0] - mean) + std::fabs(values[j][1] - mean));

    const double value = result_kronrod * half;
    result_abs *= std::fabs(half);
    result_asc *= std::fabs(half);
    double err = std::fabs((result_kronrod - result_gauss) * half);
    if (result_asc != 0.0 && err != 0.0)
        err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double underflow = std::numeric_limits<double>::min();
    if (result_abs > underflow / (50.0 * eps)) err = std::max(err, 50.0 * eps * result_abs);
    return Panel{a, b, value, err};
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw DomainError("integrate: interval endpoints out of order");
    }
    constexpr int kMaxPanels = 20000;
    std::priority_queue<Panel> panels;
    Panel first = evaluate_panel(f, a, b);
    double total_value = first.value;
    double active_error = first.error;
    double frozen_error = 0.0; // panels too narrow to split any further
    panels.push(first);
    int count = 1;
    while (active_error + frozen_error > abs_tol && count < kMaxPanels && !panels.empty()) {
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            frozen_error += worst.error;
            active_error -= worst.error;
            continue;
        }
        const Panel left = evaluate_panel(f, worst.a, mid);
        const Panel right = evaluate_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        active_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
    }
    const double total_error = active_error + frozen_error;
    if (total_error > abs_tol) {
        std::ostringstream os;
        os << "quadrature stalled on [" << a << ", " << b << "]: error estimate " << total_error
           << " > tolerance " << abs_tol << " after " << count << " panels";
        throw ConvergenceError(os.str());
    }
    return total_value;
}

// The half-line is split at S: the head [a, S] is integrated in x directly
// (if the integrand has a pole at a = 0, doubles are dense there), and the
// tail [S, inf) is mapped onto (0, 1] via x = S/t, which puts x = inf at
// t = 0 where doubles are dense again. A single rational map cannot resolve
// both a pole at the finite end and a heavy power-law tail, because doubles
// adjacent to 1 are ~2^-52 apart.
double integrate_upper(const std::function<double(double)>& f, double a, double abs_tol) {
    const double split = std::max(a + 1.0, 1.0);
    const double head = integrate(f, a, split, 0.5 * abs_tol);
    const auto g = [&f, split](double t) {
        const double x = split / t;
        // t can underflow until x overflows; that single point carries no mass.
        if (!std::isfinite(x)) return 0.0;
        return f(x) * split / (t * t);
    };
    return head + integrate(g, 0.0, 1.0, 0.5 * abs_tol);
}

double integrate_lower(const std::function<double(double)>& f, double b, double abs_tol) {
    const double split = std::min(b - 1.0, -1.0);
    const double head = integrate(f, split, b, 0.5 * abs_tol);
    const auto g = [&f, split](double t) {
        const double x = split / t;
        if (!std::isfinite(x)) return 0.0;
        return f(x) * (-split) / (t * t);
    };
    return head + integrate(g, 0.0, 1.0, 0.5 * abs_tol);
}

} // namespace anovakit

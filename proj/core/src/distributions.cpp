#include "anovakit/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "anovakit/errors.hpp"

namespace anovakit {

namespace {

constexpr double kTiny = 1e-300;      // Lentz underflow guard
constexpr double kEps = 1e-15;        // relative stop for series / fractions
constexpr int kMaxIter = 200000;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Lower regularized incomplete gamma P(a,x) by power series; use for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceError("incomplete gamma series stalled at a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
}

// Upper regularized incomplete gamma Q(a,x) by continued fraction with
// modified Lentz; use for x >= a+1.
// https://en.wikipedia.org/wiki/Incomplete_gamma_function#Evaluation_formulae
double gamma_q_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceError("incomplete gamma fraction stalled at a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

// Continued fraction for the regularized incomplete beta (modified Lentz,
// even/odd coefficients). https://dlmf.nist.gov/8.17#E22
double beta_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("incomplete beta fraction stalled at a=" + std::to_string(a) +
                           ", b=" + std::to_string(b) + ", x=" + std::to_string(x));
}

// Regularized incomplete beta I_x(a,b). The caller supplies both x and
// 1-x so tail reductions can pass the complement without cancellation.
double beta_i(double a, double b, double x, double cx) {
    if (x <= 0.0) return 0.0;
    if (cx <= 0.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log(cx) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, cx) / b;
}

void require_positive_df(double df, const char* who) {
    if (!(df > 0.0) || std::isinf(df))
        throw DomainError(std::string(who) + ": degrees of freedom must be positive and finite");
}

double chi2_upper(double k, double x) {
    return gamma_q(0.5 * k, 0.5 * x);
}

// P(F >= x) = I_{d2/(d2+d1 x)}(d2/2, d1/2)
double f_upper(double d1, double d2, double x) {
    if (std::isinf(x)) return 0.0;
    const double w = d2 / (d2 + d1 * x);
    const double cw = d1 * x / (d2 + d1 * x);
    return beta_i(0.5 * d2, 0.5 * d1, w, cw);
}

// P(T >= x); for x >= 0 this is I_{v/(v+x^2)}(v/2, 1/2) / 2.
double t_upper(double v, double x) {
    if (std::isinf(x)) return x > 0.0 ? 0.0 : 1.0;
    const double w = v / (v + x * x);
    const double cw = x * x / (v + x * x);
    const double half_tail = 0.5 * beta_i(0.5 * v, 0.5, w, cw);
    return x >= 0.0 ? half_tail : 1.0 - half_tail;
}

void require_real(double x, const char* who) {
    if (std::isnan(x)) throw DomainError(std::string(who) + ": argument is NaN");
}

// Bisection-safeguarded Newton on f(x) = upper_tail(x) - alpha over a
// bracket with tail(lo) >= alpha >= tail(hi). Stops when the bracket is
// narrower than 1e-12 (relative) or the residual is at rounding level.
template <typename Tail, typename Deriv>
double solve_upper_quantile(const Tail& tail, const Deriv& density, double lo, double hi,
                            double alpha) {
    double x = 0.5 * (lo + hi);
    double f = 0.0;
    for (int it = 0; it < 200; ++it) {
        f = tail(x) - alpha;
        if (f >= 0.0)
            lo = x;
        else
            hi = x;
        if (std::fabs(f) <= 1e-13) break;
        if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(x))) break;
        double deriv = 0.0;
        try {
            deriv = -density(x); // d/dx upper_tail = -pdf
        } catch (const Error&) {
            deriv = 0.0;
        }
        double next = (deriv != 0.0 && std::isfinite(deriv)) ? x - f / deriv
                                                             : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    const double residual = tail(x) - alpha;
    if (std::fabs(residual) > 1e-10) {
        std::ostringstream os;
        os << "quantile solve failed: alpha=" << alpha << ", bracket=[" << lo << ", " << hi
           << "], tails=[" << tail(lo) << ", " << tail(hi) << "], residual=" << residual;
        throw ConvergenceError(os.str());
    }
    return x;
}

template <typename Tail>
std::pair<double, double> bracket_from_zero(const Tail& tail, double alpha) {
    // Support bounded below at 0: tail(0) = 1 > alpha, expand right.
    double lo = 0.0;
    double hi = 1.0;
    while (tail(hi) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw ConvergenceError("quantile bracket ran away: alpha=" + std::to_string(alpha));
    }
    return {lo, hi};
}

template <typename Tail>
std::pair<double, double> bracket_real_line(const Tail& tail, double alpha) {
    double lo = -1.0;
    double hi = 1.0;
    while (tail(hi) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw ConvergenceError("quantile bracket ran away: alpha=" + std::to_string(alpha));
    }
    while (tail(lo) < alpha) {
        hi = lo;
        lo *= 2.0;
        if (lo < -1e300)
            throw ConvergenceError("quantile bracket ran away: alpha=" + std::to_string(alpha));
    }
    return {lo, hi};
}

} // namespace

ChiSquared::ChiSquared(double df) : df_(df) { require_positive_df(df, "ChiSquared"); }

FDist::FDist(double d1, double d2) : d1_(d1), d2_(d2) {
    require_positive_df(d1, "FDist d1");
    require_positive_df(d2, "FDist d2");
}

StudentT::StudentT(double df) : df_(df) { require_positive_df(df, "StudentT"); }

double chi2_pdf(const ChiSquared& dist, double x) {
    require_real(x, "chi2_pdf");
    const double k = dist.df();
    if (x < 0.0) throw DomainError("chi2_pdf: x < 0 is outside the support");
    if (std::isinf(x)) return 0.0;
    if (x == 0.0) {
        if (k < 2.0) throw PoleError("chi2_pdf: density pole at x=0 for df < 2");
        return k == 2.0 ? 0.5 : 0.0;
    }
    return std::exp((0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * std::numbers::ln2 -
                    std::lgamma(0.5 * k));
}

double f_pdf(const FDist& dist, double t) {
    require_real(t, "f_pdf");
    const double d1 = dist.d1();
    const double d2 = dist.d2();
    if (t < 0.0) throw DomainError("f_pdf: t < 0 is outside the support");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) {
        if (d1 < 2.0) throw PoleError("f_pdf: density pole at t=0 for d1 < 2");
        return d1 == 2.0 ? 1.0 : 0.0;
    }
    const double log_pdf = 0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(t) -
                           0.5 * (d1 + d2) * std::log1p(d1 * t / d2) -
                           log_beta(0.5 * d1, 0.5 * d2);
    return std::exp(log_pdf);
}

double t_pdf(const StudentT& dist, double x) {
    require_real(x, "t_pdf");
    const double v = dist.df();
    if (std::isinf(x)) return 0.0;
    const double log_pdf = std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v) -
                           0.5 * std::log(v * std::numbers::pi) -
                           0.5 * (v + 1.0) * std::log1p(x * x / v);
    return std::exp(log_pdf);
}

double pdf(const DistributionModel& dist, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ChiSquared>)
                return chi2_pdf(d, x);
            else if constexpr (std::is_same_v<T, FDist>)
                return f_pdf(d, x);
            else
                return t_pdf(d, x);
        },
        dist);
}

double upper_tail(const DistributionModel& dist, double x) {
    require_real(x, "upper_tail");
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ChiSquared>) {
                if (x < 0.0) throw DomainError("upper_tail: x < 0 is outside the chi^2 support");
                return chi2_upper(d.df(), x);
            } else if constexpr (std::is_same_v<T, FDist>) {
                if (x < 0.0) throw DomainError("upper_tail: x < 0 is outside the F support");
                return f_upper(d.d1(), d.d2(), x);
            } else {
                return t_upper(d.df(), x);
            }
        },
        dist);
}

AlphaPoint alpha_point(const DistributionModel& dist, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha_point: alpha must lie in (0,1)");
    const auto tail = [&dist](double x) { return upper_tail(dist, x); };
    const auto density = [&dist](double x) { return pdf(dist, x); };
    const bool real_line = std::holds_alternative<StudentT>(dist);
    const auto [lo, hi] =
        real_line ? bracket_real_line(tail, alpha) : bracket_from_zero(tail, alpha);
    const double value = solve_upper_quantile(tail, density, lo, hi, alpha);
    return AlphaPoint{value, alpha, dist};
}

double support_lower(const DistributionModel& dist) {
    return std::holds_alternative<StudentT>(dist) ? -std::numeric_limits<double>::infinity()
                                                  : 0.0;
}

} // namespace anovakit

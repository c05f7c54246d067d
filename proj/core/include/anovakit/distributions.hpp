#pragma once

#include <utility>
#include <variant>

namespace anovakit {

// Parameter holders for the three sampling laws used by the tests. The
// constructors validate degrees of freedom, so a constructed object is
// always usable.

class ChiSquared {
public:
    explicit ChiSquared(double df);
    double df() const { return df_; }

private:
    double df_;
};

class FDist {
public:
    FDist(double d1, double d2);
    double d1() const { return d1_; }
    double d2() const { return d2_; }

private:
    double d1_;
    double d2_;
};

class StudentT {
public:
    explicit StudentT(double df);
    double df() const { return df_; }

private:
    double df_;
};

using DistributionModel = std::variant<ChiSquared, FDist, StudentT>;

// Upper-tail quantile together with the inputs that produced it:
// upper_tail(dist, value) == alpha to within the solver tolerance (1e-10).
struct AlphaPoint {
    double value;
    double alpha;
    DistributionModel dist;
};

// Densities. x outside the support raises DomainError; x == 0 with df < 2
// (chi^2 and F) raises PoleError rather than returning an infinity.
double chi2_pdf(const ChiSquared& dist, double x);
double f_pdf(const FDist& dist, double t);
double t_pdf(const StudentT& dist, double x);
double pdf(const DistributionModel& dist, double x);

// P(X >= x). Monotone nonincreasing in x; exact 1 at the lower support
// endpoint and 0 at +infinity.
double upper_tail(const DistributionModel& dist, double x);

// Solves upper_tail(dist, x) == alpha for alpha in (0,1) by bracketing plus
// bisection-safeguarded Newton. Raises ConvergenceError (with the bracket in
// the message) if the residual tolerance cannot be met.
AlphaPoint alpha_point(const DistributionModel& dist, double alpha);

// Lower endpoint of the support: 0 for chi^2 and F, -infinity for t.
double support_lower(const DistributionModel& dist);

} // namespace anovakit

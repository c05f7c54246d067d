#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "anovakit/dataset.hpp"
#include "anovakit/test_kind.hpp"

namespace anovakit {

// Sample moments that every test consumes. residual_ss is always the
// within-group (within-cell for two-way) sum of squares, the quantity the
// scale of every semi-distance is measured against.
struct SummaryStats {
    double grand_mean = 0.0;
    double residual_ss = 0.0;
    std::vector<double> group_means; // per group / per cell, layout order
    std::vector<double> row_means;   // two-way only: factor-A marginals
    std::vector<double> col_means;   // two-way only: factor-B marginals
};

SummaryStats summarize(const Dataset& x);

// Length of the estimator/parameter vector for a test on a layout:
// 1, a, a, b, or a*b.
int estimator_dimension(TestKind test, const Layout& layout);

// The contrast estimate the test is built on:
//   MeanEqualsMu0     -> { mean }
//   OneWayEqualMeans  -> group mean - grand mean, per group
//   TwoWayMainA/B     -> marginal mean - grand mean, per level
//   TwoWayInteraction -> cell mean - row mean - column mean + grand mean,
//                        cells in (i,j) row-major order
std::vector<double> estimator_apply(const Dataset& x, TestKind test);

// Weighted parameter-space norm: plain |.| for the single-sample test,
// sqrt(sum n_i d_i^2) for one-way, and sqrt(b n sum d_i^2) /
// sqrt(a n sum d_j^2) / sqrt(n sum d_ij^2) for the two-way tests.
double theta_norm(TestKind test, const Layout& layout, const std::vector<double>& diff);

// Data-scaled semi-distance ||theta1 - theta2|| / sqrt(residual_ss(x)).
// Raises DegenerateDataError when the residual sum of squares is zero.
double semi_distance(TestKind test, const Dataset& x, const std::vector<double>& theta1,
                     const std::vector<double>& theta2);

// Smallest semi-distance threshold whose exceedance probability under the
// null is exactly alpha. value is on the distance (not squared) scale.
struct EtaThreshold {
    double value;
    double alpha;
};

EtaThreshold eta_threshold(TestKind test, const Layout& layout, double alpha);

// Rejection region in data space: membership compares the test's F
// statistic against the stored alpha-point. mu0 applies only to the
// single-sample test; all other nulls are the all-zero contrast.
class RejectionRegion {
public:
    RejectionRegion(TestKind test, Layout layout, double alpha, std::optional<double> mu0);

    bool contains(const Dataset& x) const;

    TestKind kind() const { return kind_; }
    const Layout& layout() const { return layout_; }
    double alpha() const { return alpha_; }
    std::optional<double> mu0() const { return mu0_; }
    double threshold() const { return threshold_; } // F alpha-point
    std::pair<int, int> df() const { return df_; }

private:
    TestKind kind_;
    Layout layout_;
    double alpha_;
    std::optional<double> mu0_;
    double threshold_;
    std::pair<int, int> df_;
};

RejectionRegion rejection_region(TestKind test, const Layout& layout, double alpha,
                                 std::optional<double> mu0 = std::nullopt);

// Two-sided interval for the single-sample mean; mu0 is rejected at level
// alpha exactly when it falls outside [lower, upper].
struct ConfidenceInterval {
    double lower;
    double upper;
    double level; // 1 - alpha
};

ConfidenceInterval confidence_interval(const Dataset& x, double alpha);

} // namespace anovakit

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anovakit/dataset.hpp"
#include "anovakit/measurement.hpp"
#include "anovakit/test_kind.hpp"

namespace anovakit {

// A fully specified test: what to test, on which design, at which level.
// mu0 is required for MeanEqualsMu0 and must be absent otherwise.
struct TestSpec {
    TestKind kind;
    Layout layout;
    double alpha = 0.05;
    std::optional<double> mu0;
};

struct FStatistic {
    double value;
    std::pair<int, int> df;
};

// Degrees of freedom of the test statistic on a layout, without data.
std::pair<int, int> statistic_df(TestKind kind, const Layout& layout);

// Mean-square ratio for the test on this dataset. For MeanEqualsMu0 the
// statistic is computed about 0; run_test centres the data at mu0 first and
// uses this exact value. Raises DegenerateDataError when the residual sum
// of squares vanishes.
FStatistic f_statistic(TestKind kind, const Dataset& x);

struct SsRow {
    std::string source;
    int df;
    double ss;
};

struct TestReport {
    double statistic = 0.0;
    std::pair<int, int> df{0, 0};
    double alpha_point = 0.0;
    bool reject = false;
    double eta = 0.0;
    double p_value = 0.0;
    std::vector<SsRow> ss_table;
    std::optional<ConfidenceInterval> ci; // MeanEqualsMu0 only
};

TestReport run_test(const TestSpec& spec, const Dataset& x);

// Distribution function of the scale observable: the probability that the
// sample standard deviation sqrt(SS/n) of n iid N(mu, sigma^2) draws is at
// most eta. Equals the chi^2_{n-1} mass below n*eta^2/sigma^2.
double sigma_bar_cdf(int n, double sigma, double eta);

} // namespace anovakit

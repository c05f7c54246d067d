#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "anovakit/anova.hpp"
#include "anovakit/dataset.hpp"
#include "anovakit/distributions.hpp"

namespace anovakit {

// A Monte-Carlo experiment: draw `replicates` datasets from the Gaussian
// state on `layout`, compute the `statistic` test's F value for each, and
// compare the sample against the claimed null law. The state must satisfy
// the null hypothesis of `statistic` (all-equal means, zero main effect,
// additive cell means, or mean zero for the single-sample test); otherwise
// HypothesisError is raised rather than silently simulating.
//
// Replication is chunked with a fixed chunk size; chunk c uses the
// substream stream_seed(seed, c), and chunks are merged in index order, so
// a plan gives byte-identical results regardless of thread count.
struct SimPlan {
    State state;
    Layout layout;
    TestKind statistic;
    std::int64_t replicates;
    std::uint64_t seed;
    double alpha = 0.05; // where the empirical tail is read off
};

struct SimResult {
    double empirical_tail;  // fraction of statistics >= the F alpha-point
    double ks_distance;     // KS distance to the exact F law
    double alpha_point;     // the threshold used for empirical_tail
    std::pair<int, int> df; // target law F(d1, d2)
    std::int64_t replicates;
};

SimResult simulate_statistic(const SimPlan& plan);

// As simulate_statistic, but also hands the sorted statistic sample to the
// caller (used by tests that compare two simulated samples directly).
SimResult simulate_statistic(const SimPlan& plan, std::vector<double>* sorted_statistics);

// Simulates the per-sample mean and standard deviation of n iid
// N(mu, sigma^2) draws and checks their claimed laws: the mean against
// N(mu, sigma^2/n) and n*sd^2/sigma^2 against chi^2_{n-1} (absent when
// n = 1). Also reports the sample correlation between the two observables,
// which should vanish.
struct ImageCheckResult {
    double ks_mean_law;
    std::optional<double> ks_scaled_ss_law;
    double mean_of_means;
    std::optional<double> corr_mean_ss;
    std::int64_t replicates;
};

ImageCheckResult mean_image_check(int n, double mu, double sigma, std::uint64_t seed,
                                  std::int64_t replicates = 100000);

// Upper-tail mass of a law by adaptive quadrature of its density. This is
// an independent route from upper_tail (incomplete beta/gamma) and exists
// to cross-check it.
double quadrature_tail(const DistributionModel& law, double x);

// Kolmogorov-Smirnov distance of a sample against an exact CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

} // namespace anovakit

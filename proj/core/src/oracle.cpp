#include "anovakit/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "anovakit/errors.hpp"
#include "anovakit/quadrature.hpp"
#include "anovakit/rng.hpp"

namespace anovakit {

namespace {

constexpr std::int64_t kChunk = 8192; // replicates per substream, fixed for determinism

void check_state_matches(const SimPlan& plan) {
    const Layout& layout = plan.layout;
    const std::vector<double>& means = plan.state.means();
    if (static_cast<int>(means.size()) != layout.group_count())
        throw LayoutError("simulation state has " + std::to_string(means.size()) +
                          " means, layout expects " + std::to_string(layout.group_count()));
    if (plan.replicates < 1) throw DomainError("simulation needs at least one replicate");
    if (!(plan.alpha > 0.0 && plan.alpha < 1.0))
        throw DomainError("simulation alpha must lie in (0,1)");
}

// The simulated sample is only claimed to follow the F law when the state
// satisfies the null of the chosen test; refuse to run otherwise.
void check_null_hypothesis(const SimPlan& plan) {
    const std::vector<double>& means = plan.state.means();
    double scale = 1.0;
    for (double m : means) scale = std::max(scale, std::fabs(m));
    const double tol = 1e-9 * scale;

    const auto fail = [&](const std::string& what) {
        throw HypothesisError("state does not satisfy the null of '" +
                              test_kind_name(plan.statistic) + "': " + what);
    };

    switch (plan.statistic) {
    case TestKind::MeanEqualsMu0:
        // f_statistic is defined about 0, so the null state is mean zero.
        if (std::fabs(means.front()) > tol) fail("mean must be 0");
        break;
    case TestKind::OneWayEqualMeans:
        for (double m : means)
            if (std::fabs(m - means.front()) > tol) fail("group means must be equal");
        break;
    case TestKind::TwoWayMainA:
    case TestKind::TwoWayMainB:
    case TestKind::TwoWayInteraction: {
        const int a = plan.layout.factor_a();
        const int b = plan.layout.factor_b();
        std::vector<double> row(static_cast<std::size_t>(a), 0.0);
        std::vector<double> col(static_cast<std::size_t>(b), 0.0);
        double grand = 0.0;
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                const double m = means[static_cast<std::size_t>(i * b + j)];
                row[static_cast<std::size_t>(i)] += m / b;
                col[static_cast<std::size_t>(j)] += m / a;
                grand += m / (a * b);
            }
        if (plan.statistic == TestKind::TwoWayMainA) {
            for (double r : row)
                if (std::fabs(r - grand) > tol) fail("factor-A marginal means must be equal");
        } else if (plan.statistic == TestKind::TwoWayMainB) {
            for (double c : col)
                if (std::fabs(c - grand) > tol) fail("factor-B marginal means must be equal");
        } else {
            for (int i = 0; i < a; ++i)
                for (int j = 0; j < b; ++j) {
                    const double interaction = means[static_cast<std::size_t>(i * b + j)] -
                                               row[static_cast<std::size_t>(i)] -
                                               col[static_cast<std::size_t>(j)] + grand;
                    if (std::fabs(interaction) > tol) fail("cell means must be additive");
                }
        }
        break;
    }
    }
}

// Runs fn(chunk_index) for every chunk on a small worker pool. Results must
// be written to disjoint, preallocated slots so the execution order cannot
// matter.
void for_each_chunk(std::int64_t chunk_count, const std::function<void(std::int64_t)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::int64_t>(chunk_count, static_cast<std::int64_t>(hw)));
    if (workers <= 1) {
        for (std::int64_t c = 0; c < chunk_count; ++c) fn(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t c = next.fetch_add(1);
                if (c >= chunk_count || failed.load()) return;
                try {
                    fn(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> simulate_statistics(const SimPlan& plan) {
    const Layout& layout = plan.layout;
    const std::vector<double>& means = plan.state.means();
    const double sigma = plan.state.sigma();
    const std::int64_t reps = plan.replicates;
    const std::int64_t chunks = (reps + kChunk - 1) / kChunk;

    std::vector<double> stats(static_cast<std::size_t>(reps));
    for_each_chunk(chunks, [&](std::int64_t c) {
        GaussianSampler gauss(stream_seed(plan.seed, static_cast<std::uint64_t>(c)));
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(reps, begin + kChunk);
        std::vector<double> values(static_cast<std::size_t>(layout.total()));
        for (std::int64_t r = begin; r < end; ++r) {
            std::size_t pos = 0;
            for (int g = 0; g < layout.group_count(); ++g)
                for (int k = 0; k < layout.group_size(g); ++k)
                    values[pos++] = means[static_cast<std::size_t>(g)] + sigma * gauss.next();
            stats[static_cast<std::size_t>(r)] =
                f_statistic(plan.statistic, Dataset(layout, values)).value;
        }
    });
    return stats;
}

} // namespace

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        d = std::max(d, std::max(F - static_cast<double>(i) / n,
                                 (static_cast<double>(i) + 1.0) / n - F));
    }
    return d;
}

SimResult simulate_statistic(const SimPlan& plan) { return simulate_statistic(plan, nullptr); }

SimResult simulate_statistic(const SimPlan& plan, std::vector<double>* sorted_statistics) {
    check_state_matches(plan);
    check_null_hypothesis(plan);

    const auto df = statistic_df(plan.statistic, plan.layout);
    const FDist law(df.first, df.second);
    const double threshold = alpha_point(law, plan.alpha).value;

    std::vector<double> stats = simulate_statistics(plan);

    std::int64_t above = 0;
    for (double s : stats)
        if (s >= threshold) ++above;

    const double ks =
        ks_distance(stats, [&law](double x) { return 1.0 - upper_tail(DistributionModel(law), x); });

    if (sorted_statistics) {
        std::sort(stats.begin(), stats.end());
        *sorted_statistics = std::move(stats);
    }
    return SimResult{static_cast<double>(above) / static_cast<double>(plan.replicates), ks,
                     threshold, df, plan.replicates};
}

ImageCheckResult mean_image_check(int n, double mu, double sigma, std::uint64_t seed,
                                  std::int64_t replicates) {
    if (n < 1) throw DomainError("mean_image_check: n must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DomainError("mean_image_check: sigma must be positive and finite");
    if (!std::isfinite(mu)) throw DomainError("mean_image_check: mu must be finite");
    if (replicates < 1) throw DomainError("mean_image_check: need at least one replicate");

    const std::int64_t chunks = (replicates + kChunk - 1) / kChunk;
    std::vector<double> sample_means(static_cast<std::size_t>(replicates));
    std::vector<double> sample_ss(static_cast<std::size_t>(replicates));
    for_each_chunk(chunks, [&](std::int64_t c) {
        GaussianSampler gauss(stream_seed(seed, static_cast<std::uint64_t>(c)));
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(replicates, begin + kChunk);
        std::vector<double> values(static_cast<std::size_t>(n));
        for (std::int64_t r = begin; r < end; ++r) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                values[static_cast<std::size_t>(k)] = mu + sigma * gauss.next();
                sum += values[static_cast<std::size_t>(k)];
            }
            const double mean = sum / n;
            double ss = 0.0;
            for (int k = 0; k < n; ++k) {
                const double d = values[static_cast<std::size_t>(k)] - mean;
                ss += d * d;
            }
            sample_means[static_cast<std::size_t>(r)] = mean;
            sample_ss[static_cast<std::size_t>(r)] = ss;
        }
    });

    ImageCheckResult result;
    result.replicates = replicates;

    // Mean observable: N(mu, sigma^2/n).
    const double scale = sigma / std::sqrt(static_cast<double>(n));
    result.ks_mean_law = ks_distance(sample_means, [mu, scale](double x) {
        return 0.5 * std::erfc(-(x - mu) / (scale * std::sqrt(2.0)));
    });

    double mean_sum = 0.0;
    for (double m : sample_means) mean_sum += m;
    result.mean_of_means = mean_sum / static_cast<double>(replicates);

    if (n >= 2) {
        // Scale observable: n * sigma_bar^2 / sigma^2 = SS / sigma^2 ~ chi^2_{n-1}.
        const ChiSquared chi(n - 1);
        std::vector<double> scaled(sample_ss);
        for (double& v : scaled) v /= sigma * sigma;
        result.ks_scaled_ss_law = ks_distance(scaled, [&chi](double x) {
            return 1.0 - upper_tail(DistributionModel(chi), x);
        });

        // Independence of the two observables: Pearson correlation of the
        // per-replicate mean and sigma_bar^2 = SS/n.
        double ss_sum = 0.0;
        for (double v : sample_ss) ss_sum += v;
        const double ss_mean = ss_sum / static_cast<double>(replicates);
        double cov = 0.0, var_m = 0.0, var_s = 0.0;
        for (std::size_t i = 0; i < sample_means.size(); ++i) {
            const double dm = sample_means[i] - result.mean_of_means;
            const double ds = sample_ss[i] - ss_mean;
            cov += dm * ds;
            var_m += dm * dm;
            var_s += ds * ds;
        }
        result.corr_mean_ss = cov / std::sqrt(var_m * var_s);
    }
    return result;
}

double quadrature_tail(const DistributionModel& law, double x) {
    if (std::isnan(x)) throw DomainError("quadrature_tail: x is NaN");
    const double lower = support_lower(law);
    if (x < lower) throw DomainError("quadrature_tail: x is outside the support");
    if (std::isinf(x)) return x > 0.0 ? 0.0 : 1.0;
    return integrate_upper([&law](double t) { return pdf(law, t); }, x, 1e-12);
}

} // namespace anovakit

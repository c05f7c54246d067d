#include "anovakit/anova.hpp"

#include <cmath>
#include <string>

#include "anovakit/distributions.hpp"
#include "anovakit/errors.hpp"

namespace anovakit {

namespace {

void check_pair(TestKind kind, const Layout& layout) {
    const LayoutKind want = kind == TestKind::MeanEqualsMu0  ? LayoutKind::Single
                            : kind == TestKind::OneWayEqualMeans ? LayoutKind::OneWay
                                                                 : LayoutKind::TwoWay;
    if (layout.kind() != want)
        throw LayoutError("test '" + test_kind_name(kind) + "' does not match the data layout");
}

double require_positive_ss(double ss) {
    if (ss <= 0.0)
        throw DegenerateDataError(
            "residual sum of squares is zero; the F statistic is undefined");
    return ss;
}

// Effect sum of squares: the squared weighted contrast norm of the
// estimator, which is also the numerator SS of the classical tables.
double effect_ss(TestKind kind, const Dataset& x, const SummaryStats& stats) {
    const Layout& layout = x.layout();
    double ss = 0.0;
    switch (kind) {
    case TestKind::MeanEqualsMu0:
        return layout.total() * stats.grand_mean * stats.grand_mean;
    case TestKind::OneWayEqualMeans:
        for (int g = 0; g < layout.group_count(); ++g) {
            const double d = stats.group_means[static_cast<std::size_t>(g)] - stats.grand_mean;
            ss += layout.group_size(g) * d * d;
        }
        return ss;
    case TestKind::TwoWayMainA:
        for (double m : stats.row_means) {
            const double d = m - stats.grand_mean;
            ss += d * d;
        }
        return static_cast<double>(layout.factor_b()) * layout.cell_size() * ss;
    case TestKind::TwoWayMainB:
        for (double m : stats.col_means) {
            const double d = m - stats.grand_mean;
            ss += d * d;
        }
        return static_cast<double>(layout.factor_a()) * layout.cell_size() * ss;
    case TestKind::TwoWayInteraction: {
        const int a = layout.factor_a();
        const int b = layout.factor_b();
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                const double d = stats.group_means[static_cast<std::size_t>(i * b + j)] -
                                 stats.row_means[static_cast<std::size_t>(i)] -
                                 stats.col_means[static_cast<std::size_t>(j)] + stats.grand_mean;
                ss += d * d;
            }
        return static_cast<double>(layout.cell_size()) * ss;
    }
    }
    throw DomainError("unknown test kind");
}

} // namespace

std::pair<int, int> statistic_df(TestKind kind, const Layout& layout) {
    check_pair(kind, layout);
    switch (kind) {
    case TestKind::MeanEqualsMu0:
        return {1, layout.total() - 1};
    case TestKind::OneWayEqualMeans:
        return {layout.group_count() - 1, layout.total() - layout.group_count()};
    case TestKind::TwoWayMainA:
        return {layout.factor_a() - 1,
                layout.factor_a() * layout.factor_b() * (layout.cell_size() - 1)};
    case TestKind::TwoWayMainB:
        return {layout.factor_b() - 1,
                layout.factor_a() * layout.factor_b() * (layout.cell_size() - 1)};
    case TestKind::TwoWayInteraction:
        return {(layout.factor_a() - 1) * (layout.factor_b() - 1),
                layout.factor_a() * layout.factor_b() * (layout.cell_size() - 1)};
    }
    throw DomainError("unknown test kind");
}

FStatistic f_statistic(TestKind kind, const Dataset& x) {
    const auto df = statistic_df(kind, x.layout());
    const SummaryStats stats = summarize(x);
    const double residual = require_positive_ss(stats.residual_ss);
    const double value =
        (effect_ss(kind, x, stats) / df.first) / (residual / df.second);
    return FStatistic{value, df};
}

TestReport run_test(const TestSpec& spec, const Dataset& x) {
    check_pair(spec.kind, spec.layout);
    if (!(x.layout() == spec.layout))
        throw LayoutError("run_test: dataset layout differs from the spec layout");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw DomainError("run_test: alpha must lie in (0,1)");
    if (spec.kind == TestKind::MeanEqualsMu0) {
        if (!spec.mu0) throw DomainError("run_test: the single-sample test needs mu0");
        if (!std::isfinite(*spec.mu0)) throw DomainError("run_test: mu0 is not finite");
    } else if (spec.mu0) {
        throw DomainError("run_test: mu0 only applies to the single-sample test");
    }

    TestReport report;

    // The single-sample statistic is defined about 0; centre the data at mu0
    // so the reported value is exactly f_statistic on the centred sample.
    FStatistic stat{};
    SummaryStats stats;
    if (spec.kind == TestKind::MeanEqualsMu0) {
        std::vector<double> centred(x.values());
        for (double& v : centred) v -= *spec.mu0;
        const Dataset shifted(spec.layout, std::move(centred));
        stat = f_statistic(spec.kind, shifted);
        stats = summarize(shifted);
    } else {
        stat = f_statistic(spec.kind, x);
        stats = summarize(x);
    }

    report.statistic = stat.value;
    report.df = stat.df;
    const FDist law(stat.df.first, stat.df.second);
    report.alpha_point = alpha_point(law, spec.alpha).value;
    report.reject = report.statistic >= report.alpha_point;
    report.p_value = upper_tail(law, report.statistic);
    report.eta = eta_threshold(spec.kind, spec.layout, spec.alpha).value;

    switch (spec.kind) {
    case TestKind::MeanEqualsMu0: {
        // About mu0: total SS splits into n*(mean - mu0)^2 plus the residual.
        report.ss_table = {
            SsRow{"effect", stat.df.first,
                  spec.layout.total() * stats.grand_mean * stats.grand_mean},
            SsRow{"residual", stat.df.second, stats.residual_ss},
        };
        report.ci = confidence_interval(x, spec.alpha);
        break;
    }
    case TestKind::OneWayEqualMeans: {
        double between = 0.0;
        for (int g = 0; g < spec.layout.group_count(); ++g) {
            const double d = stats.group_means[static_cast<std::size_t>(g)] - stats.grand_mean;
            between += spec.layout.group_size(g) * d * d;
        }
        report.ss_table = {
            SsRow{"between", stat.df.first, between},
            SsRow{"within", stat.df.second, stats.residual_ss},
        };
        break;
    }
    default: {
        const Layout& layout = spec.layout;
        const int a = layout.factor_a();
        const int b = layout.factor_b();
        const int n = layout.cell_size();
        double ss_a = 0.0;
        double ss_b = 0.0;
        double ss_ab = 0.0;
        for (double m : stats.row_means) ss_a += (m - stats.grand_mean) * (m - stats.grand_mean);
        for (double m : stats.col_means) ss_b += (m - stats.grand_mean) * (m - stats.grand_mean);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                const double d = stats.group_means[static_cast<std::size_t>(i * b + j)] -
                                 stats.row_means[static_cast<std::size_t>(i)] -
                                 stats.col_means[static_cast<std::size_t>(j)] + stats.grand_mean;
                ss_ab += d * d;
            }
        report.ss_table = {
            SsRow{"factor_a", a - 1, static_cast<double>(b) * n * ss_a},
            SsRow{"factor_b", b - 1, static_cast<double>(a) * n * ss_b},
            SsRow{"interaction", (a - 1) * (b - 1), static_cast<double>(n) * ss_ab},
            SsRow{"residual", a * b * (n - 1), stats.residual_ss},
        };
        break;
    }
    }
    return report;
}

double sigma_bar_cdf(int n, double sigma, double eta) {
    if (n < 2) throw DomainError("sigma_bar_cdf: n must be at least 2");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DomainError("sigma_bar_cdf: sigma must be positive and finite");
    if (std::isnan(eta)) throw DomainError("sigma_bar_cdf: eta is NaN");
    if (eta <= 0.0) return 0.0;
    if (std::isinf(eta)) return 1.0;
    return 1.0 - upper_tail(ChiSquared(n - 1), static_cast<double>(n) * eta * eta / (sigma * sigma));
}

} // namespace anovakit

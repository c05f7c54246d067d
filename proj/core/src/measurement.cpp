#include "anovakit/measurement.hpp"

#include <cmath>
#include <string>

#include "anovakit/anova.hpp"
#include "anovakit/distributions.hpp"
#include "anovakit/errors.hpp"

namespace anovakit {

namespace {

LayoutKind required_layout(TestKind test) {
    switch (test) {
    case TestKind::MeanEqualsMu0: return LayoutKind::Single;
    case TestKind::OneWayEqualMeans: return LayoutKind::OneWay;
    default: return LayoutKind::TwoWay;
    }
}

void check_layout(TestKind test, const Layout& layout) {
    if (layout.kind() != required_layout(test))
        throw LayoutError("test '" + test_kind_name(test) + "' does not match the data layout");
}

} // namespace

std::string test_kind_name(TestKind kind) {
    switch (kind) {
    case TestKind::MeanEqualsMu0: return "t";
    case TestKind::OneWayEqualMeans: return "oneway";
    case TestKind::TwoWayMainA: return "twoway-a";
    case TestKind::TwoWayMainB: return "twoway-b";
    case TestKind::TwoWayInteraction: return "interaction";
    }
    throw DomainError("unknown test kind");
}

TestKind parse_test_kind(const std::string& name) {
    if (name == "t") return TestKind::MeanEqualsMu0;
    if (name == "oneway") return TestKind::OneWayEqualMeans;
    if (name == "twoway-a") return TestKind::TwoWayMainA;
    if (name == "twoway-b") return TestKind::TwoWayMainB;
    if (name == "interaction") return TestKind::TwoWayInteraction;
    throw DomainError("unknown test '" + name +
                      "' (expected t, oneway, twoway-a, twoway-b, or interaction)");
}

SummaryStats summarize(const Dataset& x) {
    const Layout& layout = x.layout();
    SummaryStats stats;

    double total = 0.0;
    for (double v : x.values()) total += v;
    stats.grand_mean = total / layout.total();

    stats.group_means.resize(static_cast<std::size_t>(layout.group_count()));
    for (int g = 0; g < layout.group_count(); ++g) {
        double sum = 0.0;
        for (int k = 0; k < layout.group_size(g); ++k) sum += x.value(g, k);
        stats.group_means[static_cast<std::size_t>(g)] = sum / layout.group_size(g);
    }

    double ss = 0.0;
    for (int g = 0; g < layout.group_count(); ++g) {
        const double mean = stats.group_means[static_cast<std::size_t>(g)];
        for (int k = 0; k < layout.group_size(g); ++k) {
            const double d = x.value(g, k) - mean;
            ss += d * d;
        }
    }
    stats.residual_ss = ss;

    if (layout.kind() == LayoutKind::TwoWay) {
        const int a = layout.factor_a();
        const int b = layout.factor_b();
        stats.row_means.assign(static_cast<std::size_t>(a), 0.0);
        stats.col_means.assign(static_cast<std::size_t>(b), 0.0);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) {
                const double cell = stats.group_means[static_cast<std::size_t>(i * b + j)];
                stats.row_means[static_cast<std::size_t>(i)] += cell / b;
                stats.col_means[static_cast<std::size_t>(j)] += cell / a;
            }
    }
    return stats;
}

int estimator_dimension(TestKind test, const Layout& layout) {
    check_layout(test, layout);
    switch (test) {
    case TestKind::MeanEqualsMu0: return 1;
    case TestKind::OneWayEqualMeans: return layout.group_count();
    case TestKind::TwoWayMainA: return layout.factor_a();
    case TestKind::TwoWayMainB: return layout.factor_b();
    case TestKind::TwoWayInteraction: return layout.factor_a() * layout.factor_b();
    }
    throw DomainError("unknown test kind");
}

std::vector<double> estimator_apply(const Dataset& x, TestKind test) {
    check_layout(test, x.layout());
    const SummaryStats stats = summarize(x);
    const Layout& layout = x.layout();

    switch (test) {
    case TestKind::MeanEqualsMu0:
        return {stats.grand_mean};
    case TestKind::OneWayEqualMeans: {
        std::vector<double> out(stats.group_means);
        for (double& v : out) v -= stats.grand_mean;
        return out;
    }
    case TestKind::TwoWayMainA: {
        std::vector<double> out(stats.row_means);
        for (double& v : out) v -= stats.grand_mean;
        return out;
    }
    case TestKind::TwoWayMainB: {
        std::vector<double> out(stats.col_means);
        for (double& v : out) v -= stats.grand_mean;
        return out;
    }
    case TestKind::TwoWayInteraction: {
        const int a = layout.factor_a();
        const int b = layout.factor_b();
        std::vector<double> out(static_cast<std::size_t>(a * b));
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j)
                out[static_cast<std::size_t>(i * b + j)] =
                    stats.group_means[static_cast<std::size_t>(i * b + j)] -
                    stats.row_means[static_cast<std::size_t>(i)] -
                    stats.col_means[static_cast<std::size_t>(j)] + stats.grand_mean;
        return out;
    }
    }
    throw DomainError("unknown test kind");
}

double theta_norm(TestKind test, const Layout& layout, const std::vector<double>& diff) {
    check_layout(test, layout);
    if (static_cast<int>(diff.size()) != estimator_dimension(test, layout))
        throw LayoutError("parameter vector has length " + std::to_string(diff.size()) +
                          ", test expects " + std::to_string(estimator_dimension(test, layout)));

    double ss = 0.0;
    switch (test) {
    case TestKind::MeanEqualsMu0:
        return std::fabs(diff.front());
    case TestKind::OneWayEqualMeans:
        for (int g = 0; g < layout.group_count(); ++g)
            ss += layout.group_size(g) * diff[static_cast<std::size_t>(g)] *
                  diff[static_cast<std::size_t>(g)];
        return std::sqrt(ss);
    case TestKind::TwoWayMainA:
        for (double d : diff) ss += d * d;
        return std::sqrt(static_cast<double>(layout.factor_b()) * layout.cell_size() * ss);
    case TestKind::TwoWayMainB:
        for (double d : diff) ss += d * d;
        return std::sqrt(static_cast<double>(layout.factor_a()) * layout.cell_size() * ss);
    case TestKind::TwoWayInteraction:
        for (double d : diff) ss += d * d;
        return std::sqrt(static_cast<double>(layout.cell_size()) * ss);
    }
    throw DomainError("unknown test kind");
}

double semi_distance(TestKind test, const Dataset& x, const std::vector<double>& theta1,
                     const std::vector<double>& theta2) {
    check_layout(test, x.layout());
    if (theta1.size() != theta2.size())
        throw LayoutError("semi_distance: parameter vectors differ in length");
    std::vector<double> diff(theta1.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = theta1[i] - theta2[i];

    const double ss = summarize(x).residual_ss;
    if (ss <= 0.0)
        throw DegenerateDataError("semi_distance: residual sum of squares is zero");
    return theta_norm(test, x.layout(), diff) / std::sqrt(ss);
}

EtaThreshold eta_threshold(TestKind test, const Layout& layout, double alpha) {
    check_layout(test, layout);
    const auto [d1, d2] = statistic_df(test, layout);
    const double fa = alpha_point(FDist(d1, d2), alpha).value;

    // With the weighted norms above, statistic = d^2 * d2/d1 for the ANOVA
    // tests, so P(d >= eta | H0) = alpha forces eta^2 = F_alpha * d1/d2. The
    // single-sample norm is unweighted and picks up the extra factor n.
    double eta_sq = 0.0;
    switch (test) {
    case TestKind::MeanEqualsMu0: {
        const int n = layout.total();
        eta_sq = fa / (static_cast<double>(n) * (n - 1));
        break;
    }
    default:
        eta_sq = fa * d1 / d2;
        break;
    }
    return EtaThreshold{std::sqrt(eta_sq), alpha};
}

RejectionRegion::RejectionRegion(TestKind test, Layout layout, double alpha,
                                 std::optional<double> mu0)
    : kind_(test), layout_(std::move(layout)), alpha_(alpha), mu0_(mu0) {
    check_layout(test, layout_);
    if (test == TestKind::MeanEqualsMu0) {
        if (!mu0_) throw DomainError("rejection_region: the single-sample test needs mu0");
        if (!std::isfinite(*mu0_)) throw DomainError("rejection_region: mu0 is not finite");
    } else if (mu0_) {
        throw DomainError("rejection_region: mu0 only applies to the single-sample test");
    }
    df_ = statistic_df(test, layout_);
    threshold_ = alpha_point(FDist(df_.first, df_.second), alpha).value;
}

bool RejectionRegion::contains(const Dataset& x) const {
    if (!(x.layout() == layout_))
        throw LayoutError("rejection_region: dataset layout differs from the region's layout");
    if (kind_ == TestKind::MeanEqualsMu0) {
        std::vector<double> centred(x.values());
        for (double& v : centred) v -= *mu0_;
        return f_statistic(kind_, Dataset(layout_, std::move(centred))).value >= threshold_;
    }
    return f_statistic(kind_, x).value >= threshold_;
}

RejectionRegion rejection_region(TestKind test, const Layout& layout, double alpha,
                                 std::optional<double> mu0) {
    return RejectionRegion(test, layout, alpha, mu0);
}

ConfidenceInterval confidence_interval(const Dataset& x, double alpha) {
    if (x.layout().kind() != LayoutKind::Single)
        throw LayoutError("confidence_interval: only defined for single-sample data");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("confidence_interval: alpha must lie in (0,1)");
    const int n = x.layout().total();
    const SummaryStats stats = summarize(x);
    if (stats.residual_ss <= 0.0)
        throw DegenerateDataError("confidence_interval: residual sum of squares is zero");

    const double fa = alpha_point(FDist(1, n - 1), alpha).value;
    const double sigma_bar = std::sqrt(stats.residual_ss / n);
    const double half_width = sigma_bar * std::sqrt(fa / (n - 1));
    return ConfidenceInterval{stats.grand_mean - half_width, stats.grand_mean + half_width,
                              1.0 - alpha};
}

} // namespace anovakit

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "anovakit/anova.hpp"
#include "anovakit/distributions.hpp"
#include "anovakit/errors.hpp"
#include "anovakit/measurement.hpp"
#include "anovakit/quadrature.hpp"
#include "anovakit/rng.hpp"

using namespace anovakit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Dataset random_dataset(const Layout& layout, GaussianSampler& g, double mu = 0.0,
                       double sigma = 1.0) {
    std::vector<double> values(static_cast<std::size_t>(layout.total()));
    for (double& v : values) v = mu + sigma * g.next();
    return Dataset(layout, std::move(values));
}

} // namespace

TEST_CASE("layout factories enforce the shape rules", "[measurement][errors]") {
    CHECK_THROWS_AS(Layout::single(1), LayoutError);
    CHECK_THROWS_AS(Layout::one_way({5}), LayoutError);
    CHECK_THROWS_AS(Layout::one_way({3, 1}), LayoutError);
    CHECK_THROWS_AS(Layout::two_way(1, 3, 4), LayoutError);
    CHECK_THROWS_AS(Layout::two_way(2, 2, 1), LayoutError);

    const Layout two = Layout::two_way(2, 3, 4);
    CHECK(two.total() == 24);
    CHECK(two.group_count() == 6);
    CHECK(two.factor_a() == 2);
    CHECK(two.factor_b() == 3);
    CHECK(two.cell_size() == 4);

    CHECK_THROWS_AS(Dataset(Layout::single(3), {1.0, 2.0}), LayoutError);
    CHECK_THROWS_AS(Dataset(Layout::single(2), {1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(State({0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(State({}, 1.0), DomainError);
}

TEST_CASE("summaries of hand datasets", "[measurement]") {
    // Single sample (1,2,3): mean 2, residual SS (1-2)^2 + (3-2)^2 = 2.
    const SummaryStats single = summarize(Dataset(Layout::single(3), {1, 2, 3}));
    CHECK_THAT(single.grand_mean, WithinAbs(2.0, 1e-15));
    CHECK_THAT(single.residual_ss, WithinAbs(2.0, 1e-15));

    // Two constant groups: residual SS vanishes, means pass through.
    const SummaryStats flat = summarize(Dataset(Layout::one_way({2, 2}), {1, 1, 3, 3}));
    CHECK(flat.group_means == std::vector<double>{1.0, 3.0});
    CHECK_THAT(flat.grand_mean, WithinAbs(2.0, 1e-15));
    CHECK(flat.residual_ss == 0.0);

    // Balanced two-way marginals.
    const Layout two = Layout::two_way(2, 2, 2);
    const SummaryStats tw =
        summarize(Dataset(two, {0, 2, 4, 6, 10, 12, 14, 16})); // cell means 1, 5, 11, 15
    CHECK(tw.group_means == std::vector<double>{1.0, 5.0, 11.0, 15.0});
    CHECK_THAT(tw.row_means[0], WithinAbs(3.0, 1e-12));
    CHECK_THAT(tw.row_means[1], WithinAbs(13.0, 1e-12));
    CHECK_THAT(tw.col_means[0], WithinAbs(6.0, 1e-12));
    CHECK_THAT(tw.col_means[1], WithinAbs(10.0, 1e-12));
    CHECK_THAT(tw.grand_mean, WithinAbs(8.0, 1e-12));
}

TEST_CASE("estimators of hand datasets", "[measurement]") {
    const auto one = estimator_apply(Dataset(Layout::one_way({2, 2}), {1, 1, 3, 3}),
                                     TestKind::OneWayEqualMeans);
    REQUIRE(one.size() == 2);
    CHECK_THAT(one[0], WithinAbs(-1.0, 1e-15));
    CHECK_THAT(one[1], WithinAbs(1.0, 1e-15));

    const auto mean =
        estimator_apply(Dataset(Layout::single(3), {1, 2, 3}), TestKind::MeanEqualsMu0);
    REQUIRE(mean.size() == 1);
    CHECK_THAT(mean[0], WithinAbs(2.0, 1e-15));

    // Additive cell means (integers, so arithmetic is exact): the
    // interaction contrast must annihilate them.
    const Layout two = Layout::two_way(2, 2, 2);
    const Dataset additive(two, {2, 2, 3, 3, 5, 5, 6, 6});
    for (double v : estimator_apply(additive, TestKind::TwoWayInteraction)) CHECK(v == 0.0);
    const auto main_a = estimator_apply(additive, TestKind::TwoWayMainA);
    CHECK_THAT(main_a[0], WithinAbs(-1.5, 1e-15));
    CHECK_THAT(main_a[1], WithinAbs(1.5, 1e-15));
}

TEST_CASE("estimator contrasts are centred", "[measurement][property]") {
    GaussianSampler g(2024);
    const Layout one = Layout::one_way({3, 5, 4});
    const Layout two = Layout::two_way(3, 2, 3);
    for (int rep = 0; rep < 200; ++rep) {
        const Dataset x = random_dataset(one, g, 1.7, 2.5);
        const auto e = estimator_apply(x, TestKind::OneWayEqualMeans);
        double weighted = 0.0;
        double scale = 1.0;
        for (int gi = 0; gi < one.group_count(); ++gi) {
            weighted += one.group_size(gi) * e[static_cast<std::size_t>(gi)];
            scale += one.group_size(gi) * std::fabs(e[static_cast<std::size_t>(gi)]);
        }
        CHECK(std::fabs(weighted) <= 1e-12 * scale);

        const Dataset y = random_dataset(two, g, -0.3, 1.2);
        const auto inter = estimator_apply(y, TestKind::TwoWayInteraction);
        for (int i = 0; i < 3; ++i) {
            double row = 0.0;
            for (int j = 0; j < 2; ++j) row += inter[static_cast<std::size_t>(i * 2 + j)];
            CHECK(std::fabs(row) <= 1e-12);
        }
        for (int j = 0; j < 2; ++j) {
            double col = 0.0;
            for (int i = 0; i < 3; ++i) col += inter[static_cast<std::size_t>(i * 2 + j)];
            CHECK(std::fabs(col) <= 1e-12);
        }
    }
}

TEST_CASE("semi distance basics", "[measurement]") {
    // x = (0,2): mean 1, SS = 2; |0 - 2| / sqrt(2) = sqrt(2).
    const Dataset x(Layout::single(2), {0, 2});
    CHECK_THAT(semi_distance(TestKind::MeanEqualsMu0, x, {0.0}, {2.0}),
               WithinAbs(std::numbers::sqrt2, 1e-15));
    CHECK(semi_distance(TestKind::MeanEqualsMu0, x, {0.7}, {0.7}) == 0.0);

    const Dataset flat(Layout::single(3), {4, 4, 4});
    CHECK_THROWS_AS(semi_distance(TestKind::MeanEqualsMu0, flat, {0.0}, {1.0}),
                    DegenerateDataError);

    // One-way distances carry the group-size weights.
    const Dataset ow(Layout::one_way({2, 3}), {0, 2, 1, 2, 3});
    const double ss = summarize(ow).residual_ss;
    CHECK_THAT(semi_distance(TestKind::OneWayEqualMeans, ow, {1.0, 0.0}, {0.0, 1.0}),
               WithinRel(std::sqrt(2.0 * 1.0 + 3.0 * 1.0) / std::sqrt(ss), 1e-13));
}

TEST_CASE("semi distance is a metric on parameters", "[measurement][property]") {
    GaussianSampler g(99);
    const Layout layout = Layout::one_way({4, 3, 5});
    const Dataset x = random_dataset(layout, g);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> t1(3), t2(3), t3(3);
        for (int i = 0; i < 3; ++i) {
            t1[static_cast<std::size_t>(i)] = g.next();
            t2[static_cast<std::size_t>(i)] = g.next();
            t3[static_cast<std::size_t>(i)] = g.next();
        }
        const double d12 = semi_distance(TestKind::OneWayEqualMeans, x, t1, t2);
        const double d21 = semi_distance(TestKind::OneWayEqualMeans, x, t2, t1);
        const double d13 = semi_distance(TestKind::OneWayEqualMeans, x, t1, t3);
        const double d23 = semi_distance(TestKind::OneWayEqualMeans, x, t2, t3);
        CHECK(d12 == d21);
        CHECK(d13 <= d12 + d23 + 1e-12);
    }
}

TEST_CASE("eta threshold closed forms", "[measurement]") {
    // n = 2: the null law is F(1,1), whose upper tail 1 - (2/pi) atan sqrt(x)
    // inverts to x = tan^2(pi (1-alpha) / 2); eta^2 is that over n(n-1) = 2.
    const double alpha = 0.25;
    const double f11_quantile = std::pow(std::tan(0.5 * std::numbers::pi * (1.0 - alpha)), 2);
    const EtaThreshold eta = eta_threshold(TestKind::MeanEqualsMu0, Layout::single(2), alpha);
    CHECK_THAT(eta.value * eta.value, WithinRel(0.5 * f11_quantile, 1e-9));
    CHECK(eta.alpha == alpha);
}

TEST_CASE("eta threshold matches a quadrature-derived quantile", "[measurement][quadrature]") {
    // One-way, a=2, sizes (3,3): null law F(1,4). Invert the quadrature
    // tail by bisection and compare eta^2 = quantile * (a-1)/(n-a).
    const Layout layout = Layout::one_way({3, 3});
    const double alpha = 0.1;
    const auto tail = [](double x) {
        return integrate_upper([](double t) { return f_pdf(FDist(1, 4), t); }, x, 1e-13);
    };
    double lo = 0.0, hi = 64.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > alpha ? lo : hi) = mid;
    }
    const double quantile = 0.5 * (lo + hi);
    const EtaThreshold eta = eta_threshold(TestKind::OneWayEqualMeans, layout, alpha);
    CHECK_THAT(eta.value * eta.value, WithinAbs(quantile / 4.0, 1e-8));
}

TEST_CASE("eta threshold has exact null exceedance mass", "[measurement]") {
    // P(d >= eta | H0) = alpha: translate eta back to the statistic scale
    // and evaluate the exact F tail there.
    struct Case {
        TestKind kind;
        Layout layout;
    };
    const Case cases[] = {
        {TestKind::MeanEqualsMu0, Layout::single(5)},
        {TestKind::OneWayEqualMeans, Layout::one_way({4, 5, 6})},
        {TestKind::TwoWayMainA, Layout::two_way(2, 3, 4)},
        {TestKind::TwoWayMainB, Layout::two_way(2, 3, 4)},
        {TestKind::TwoWayInteraction, Layout::two_way(2, 3, 4)},
    };
    for (const auto& c : cases)
        for (double alpha : {0.01, 0.05, 0.25, 0.5}) {
            const auto [d1, d2] = statistic_df(c.kind, c.layout);
            const EtaThreshold eta = eta_threshold(c.kind, c.layout, alpha);
            const double eta_sq = eta.value * eta.value;
            const double statistic_at_eta = c.kind == TestKind::MeanEqualsMu0
                                                ? eta_sq * c.layout.total() * d2
                                                : eta_sq * d2 / d1;
            INFO(test_kind_name(c.kind) << " alpha=" << alpha);
            CHECK_THAT(upper_tail(FDist(d1, d2), statistic_at_eta), WithinAbs(alpha, 1e-9));
        }
}

TEST_CASE("eta threshold decreases as alpha grows", "[measurement][property]") {
    const Layout layout = Layout::one_way({4, 4, 4});
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.01, 0.05, 0.1, 0.25, 0.5, 0.9}) {
        const double eta = eta_threshold(TestKind::OneWayEqualMeans, layout, alpha).value;
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("rejection region thresholds at the alpha point", "[measurement]") {
    const Layout layout = Layout::one_way({4, 5, 6});
    const RejectionRegion region = rejection_region(TestKind::OneWayEqualMeans, layout, 0.05);
    CHECK(region.threshold() == alpha_point(FDist(2, 12), 0.05).value);
    CHECK(region.df() == std::pair<int, int>{2, 12});

    GaussianSampler g(7);
    int in = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Dataset x = random_dataset(layout, g);
        const bool member = region.contains(x);
        const double stat = f_statistic(TestKind::OneWayEqualMeans, x).value;
        CHECK(member == (stat >= region.threshold()));
        in += member;
    }
    CHECK(in > 0); // a 5% region should fire at least once in 200 draws
    CHECK(in < 50);
}

TEST_CASE("rejection region mu0 rules", "[measurement][errors]") {
    CHECK_THROWS_AS(rejection_region(TestKind::MeanEqualsMu0, Layout::single(4), 0.05),
                    DomainError);
    CHECK_THROWS_AS(
        rejection_region(TestKind::OneWayEqualMeans, Layout::one_way({2, 2}), 0.05, 1.0),
        DomainError);
    CHECK_THROWS_AS(rejection_region(TestKind::OneWayEqualMeans, Layout::single(4), 0.05),
                    LayoutError);

    // Membership for the single-sample test is location-covariant in mu0.
    const RejectionRegion at2 = rejection_region(TestKind::MeanEqualsMu0, Layout::single(3), 0.05, 2.0);
    CHECK_FALSE(at2.contains(Dataset(Layout::single(3), {1, 2, 3})));
    const RejectionRegion at100 =
        rejection_region(TestKind::MeanEqualsMu0, Layout::single(3), 0.05, 100.0);
    CHECK(at100.contains(Dataset(Layout::single(3), {1, 2, 3})));
}

TEST_CASE("decisions are invariant under group permutations and shifts", "[measurement][property]") {
    GaussianSampler g(31);
    const Layout layout = Layout::one_way({3, 3, 4});
    const RejectionRegion region = rejection_region(TestKind::OneWayEqualMeans, layout, 0.1);
    for (int rep = 0; rep < 100; ++rep) {
        const Dataset x = random_dataset(layout, g, 0.5, 1.5);
        const bool base = region.contains(x);

        // Reverse within each group.
        std::vector<double> permuted(x.values());
        for (int gi = 0; gi < layout.group_count(); ++gi)
            std::reverse(permuted.begin() + layout.group_offset(gi),
                         permuted.begin() + layout.group_offset(gi) + layout.group_size(gi));
        CHECK(region.contains(Dataset(layout, std::move(permuted))) == base);

        // Common location shift.
        std::vector<double> shifted(x.values());
        for (double& v : shifted) v += 17.25;
        CHECK(region.contains(Dataset(layout, std::move(shifted))) == base);
    }
}

TEST_CASE("confidence interval duality with the region", "[measurement][property]") {
    GaussianSampler g(55);
    const Layout layout = Layout::single(6);
    for (int rep = 0; rep < 100; ++rep) {
        const Dataset x = random_dataset(layout, g, 1.0, 2.0);
        const double alpha = 0.02 + 0.96 * (rep / 100.0);
        const ConfidenceInterval ci = confidence_interval(x, alpha);
        CHECK_THAT(ci.level, WithinAbs(1.0 - alpha, 1e-15));
        const double mid = 0.5 * (ci.lower + ci.upper);
        CHECK_THAT(mid, WithinAbs(summarize(x).grand_mean, 1e-10));

        const double mu0 = 1.0 + 4.0 * g.next();
        const RejectionRegion region =
            rejection_region(TestKind::MeanEqualsMu0, layout, alpha, mu0);
        const bool outside = mu0 < ci.lower || mu0 > ci.upper;
        CHECK(region.contains(x) == outside);
    }
    CHECK_THROWS_AS(confidence_interval(Dataset(Layout::single(3), {2, 2, 2}), 0.05),
                    DegenerateDataError);
    CHECK_THROWS_AS(confidence_interval(Dataset(Layout::single(3), {1, 2, 3}), 0.0), DomainError);
}

TEST_CASE("theta norm input validation", "[measurement][errors]") {
    const Layout layout = Layout::one_way({2, 2});
    CHECK_THROWS_AS(theta_norm(TestKind::OneWayEqualMeans, layout, {1.0}), LayoutError);
    CHECK_THROWS_AS(semi_distance(TestKind::OneWayEqualMeans,
                                  Dataset(layout, {0, 1, 2, 3}), {1.0}, {1.0, 2.0}),
                    LayoutError);
    CHECK_THROWS_AS(estimator_apply(Dataset(layout, {0, 1, 2, 3}), TestKind::TwoWayMainA),
                    LayoutError);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "credlens/stats.hpp"

using namespace credlens;

namespace {

// Independent Mann-Whitney oracle: U by direct pair counting, null
// distribution by enumerating every assignment of group-a positions.
double mwu_u_by_pairs(const std::vector<double>& a, const std::vector<double>& b) {
    double ua = 0.0;
    for (double x : a)
        for (double y : b) {
            if (x > y) ua += 1.0;
            else if (x == y) ua += 0.5;
        }
    return std::min(ua, static_cast<double>(a.size() * b.size()) - ua);
}

// Two-sided p by summing both tails of the enumerated null: the fraction of
// assignments whose min-side U is at or below the observed one.
double mwu_exact_two_sided_bruteforce(std::size_t na, std::size_t nb, double u_obs) {
    const std::size_t n = na + nb;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(na), true);
    std::sort(pick.begin(), pick.end());  // lexicographically smallest arrangement
    std::size_t total = 0, at_or_below = 0;
    do {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i)
            (pick[i] ? a : b).push_back(static_cast<double>(i + 1));
        ++total;
        if (mwu_u_by_pairs(a, b) <= u_obs + 1e-12) ++at_or_below;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return static_cast<double>(at_or_below) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("pearson_r basics") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = x;
    CHECK(stats::pearson_r(x, y) == doctest::Approx(1.0));
    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    CHECK(stats::pearson_r(x, neg) == doctest::Approx(-1.0));

    // hand-computed: cov = 1, var_x = 2, var_y = 2/3 -> r = sqrt(3)/2
    std::vector<double> x3 = {1, 2, 3}, y3 = {1, 2, 2};
    CHECK(stats::pearson_r(x3, y3) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("pearson_r affine invariance and errors") {
    const std::vector<double> x = {0.4, 1.7, -2.3, 5.5, 3.1, 0.0};
    for (double a : {2.5, -0.7}) {
        std::vector<double> y;
        for (double v : x) y.push_back(a * v + 11.0);
        CHECK(stats::pearson_r(x, y) == doctest::Approx(a > 0 ? 1.0 : -1.0).epsilon(1e-12));
    }
    std::vector<double> constant = {3, 3, 3};
    std::vector<double> varying = {1, 2, 3};
    CHECK_THROWS_AS((void)stats::pearson_r(constant, varying), RangeError);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS((void)stats::pearson_r(one, one), RangeError);
}

TEST_CASE("shapiro_wilk matches reference implementation on fixed samples") {
    // reference W and p from an independent statistical package (frozen)
    struct Ref {
        std::vector<double> sample;
        double w;
        double p;
    };
    const std::vector<Ref> refs = {
        {{1.0, 2.0, 3.5}, 0.9868421053, 0.7804408149},
        {{4.1, 1.2, 3.3, 2.8}, 0.9600780079, 0.7793999669},
        {{10.0, 12.0, 11.5, 13.7, 9.2}, 0.9739969285, 0.9002315663},
        {{148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236}, 0.7888146949, 0.006703814062},
        {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, 0.9668963633, 0.8757314439},
        {{1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
          11, 12, 13, 14, 15, 16, 17, 18, 19, 20}, 0.9603751832, 0.5513717458},
        {{0.34, 1.21, 0.05, 2.87, 0.66, 0.12, 4.53, 1.98, 0.77, 0.41,
          3.15, 0.92, 0.28, 1.55, 6.02, 0.19, 2.33, 0.88, 1.07, 0.53}, 0.8110615486, 0.00126913276},
    };
    for (const auto& ref : refs) {
        const auto res = stats::shapiro_wilk(ref.sample);
        CHECK(std::abs(res.statistic - ref.w) <= 1e-3);
        CHECK(res.statistic == doctest::Approx(ref.w).epsilon(1e-6));
        REQUIRE(res.p_value.has_value());
        CHECK(std::abs(*res.p_value - ref.p) <= 1e-6);
    }
}

TEST_CASE("shapiro_wilk flags non-normal zero-inflated counts") {
    // author-count shaped sample: many zeros, small positive tail
    std::vector<double> sample(18, 0.0);
    sample.insert(sample.end(), 6, 1.0);
    sample.insert(sample.end(), 4, 2.0);
    sample.insert(sample.end(), 2, 3.0);
    const auto res = stats::shapiro_wilk(sample);
    CHECK(res.statistic == doctest::Approx(0.7170635147).epsilon(1e-6));
    CHECK(*res.p_value < 0.05);
    CHECK(*res.p_value == doctest::Approx(2.790832049e-06).epsilon(1e-3));
}

TEST_CASE("shapiro_wilk range and degenerate handling") {
    std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS((void)stats::shapiro_wilk(two), RangeError);
    std::vector<double> big(5001, 0.0);
    CHECK_THROWS_AS((void)stats::shapiro_wilk(big), RangeError);
    std::vector<double> constant = {7.0, 7.0, 7.0, 7.0};
    const auto res = stats::shapiro_wilk(constant);
    CHECK(res.degenerate);
    CHECK(std::isnan(res.statistic));
    CHECK_FALSE(res.p_value.has_value());
}

TEST_CASE("shapiro_wilk p is invariant under affine transforms") {
    const std::vector<double> base = {0.3, 1.9, 2.2, -0.7, 4.1, 3.3, 0.0, 1.1, 2.8, -1.5};
    const auto ref = stats::shapiro_wilk(base);
    for (const auto& [a, b] : {std::pair{3.0, 10.0}, std::pair{0.02, -5.0}}) {
        std::vector<double> t;
        for (double v : base) t.push_back(a * v + b);
        const auto res = stats::shapiro_wilk(t);
        CHECK(res.statistic == doctest::Approx(ref.statistic).epsilon(1e-10));
        CHECK(*res.p_value == doctest::Approx(*ref.p_value).epsilon(1e-8));
    }
}

TEST_CASE("mann_whitney_u complete separation and symmetry") {
    std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
    const auto res = stats::mann_whitney_u(a, b);
    CHECK(res.statistic == doctest::Approx(0.0));
    CHECK(*res.p_value == doctest::Approx(0.1).epsilon(1e-12));  // exact path, 2/20

    std::vector<double> same = {1, 2, 3};
    const auto sym = stats::mann_whitney_u(same, same);
    CHECK(sym.statistic == doctest::Approx(9.0 / 2.0));  // n^2/2
    CHECK(*sym.p_value == doctest::Approx(1.0));
}

TEST_CASE("mann_whitney_u exact small-sample p") {
    std::vector<double> a = {1, 2}, b = {3, 4};
    const auto res = stats::mann_whitney_u(a, b);
    CHECK(res.statistic == doctest::Approx(0.0));
    CHECK(*res.p_value == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(res.note == "exact");
}

TEST_CASE("mann_whitney_u matches reference asymptotic values") {
    // frozen two-sided asymptotic p (continuity + tie correction)
    std::vector<double> a = {0, 0, 1, 2, 2, 3, 0, 1}, b = {1, 2, 3, 3, 4, 0, 2, 5};
    const auto tied = stats::mann_whitney_u(a, b);
    CHECK(tied.ties);
    CHECK(tied.statistic == doctest::Approx(15.5));
    CHECK(*tied.p_value == doctest::Approx(0.0861551485).epsilon(1e-8));

    std::vector<double> c = {1.2, 3.4, 2.2, 5.1, 4.4, 2.9, 3.3},
                        d = {2.1, 6.7, 5.9, 7.2, 8.0, 6.1, 5.5};
    const auto shift = stats::mann_whitney_u(c, d);  // n = 14, approx path
    CHECK_FALSE(shift.ties);
    CHECK(shift.statistic == doctest::Approx(6.0));
    CHECK(*shift.p_value == doctest::Approx(0.0214507337).epsilon(1e-8));
}

TEST_CASE("mann_whitney_u all-ties degenerate") {
    std::vector<double> a = {2, 2, 2}, b = {2, 2};
    const auto res = stats::mann_whitney_u(a, b);
    CHECK(res.degenerate);
    CHECK(*res.p_value == doctest::Approx(1.0));
    std::vector<double> empty;
    CHECK_THROWS_AS((void)stats::mann_whitney_u(empty, a), RangeError);
}

TEST_CASE("mann_whitney p within 0.05 of exact enumeration, exhaustive n <= 10") {
    // Every tie-free pattern: which rank positions belong to group a. The
    // shipped p is held to the enumeration oracle on the whole grid (two
    // independent routes: counting recurrence vs brute-force enumeration).
    // The plain normal-approximation branch is additionally held to the
    // oracle wherever both groups have >= 3 observations; with a singleton
    // or pair group its error provably exceeds the bound (worst 0.129 at
    // n = 4), so that regime stays on the exact path in production.
    double worst_gap_approx_small_groups = 0.0;
    for (std::size_t n = 2; n <= 10; ++n) {
        for (std::size_t na = 1; na < n; ++na) {
            std::vector<bool> pick(n, false);
            std::fill(pick.begin(), pick.begin() + static_cast<long>(na), true);
            std::sort(pick.begin(), pick.end());
            do {
                std::vector<double> a, b;
                for (std::size_t i = 0; i < n; ++i)
                    (pick[i] ? a : b).push_back(static_cast<double>(i + 1));
                const double u = mwu_u_by_pairs(a, b);
                const double p_exact = mwu_exact_two_sided_bruteforce(na, n - na, u);
                const auto prod = stats::mann_whitney_u(a, b);
                REQUIRE(std::abs(*prod.p_value - p_exact) <= 0.05);
                REQUIRE(*prod.p_value == doctest::Approx(p_exact).epsilon(1e-12));

                const double p_approx = stats::mwu_p_normal(u, na, n - na, 0.0, true);
                if (std::min(na, n - na) >= 3) {
                    REQUIRE(std::abs(p_exact - p_approx) <= 0.05);
                } else {
                    worst_gap_approx_small_groups =
                        std::max(worst_gap_approx_small_groups, std::abs(p_exact - p_approx));
                }
            } while (std::next_permutation(pick.begin(), pick.end()));
        }
    }
    // documents why the exact path owns the small-sample regime
    CHECK(worst_gap_approx_small_groups > 0.05);
    CHECK(worst_gap_approx_small_groups < 0.13);
}

TEST_CASE("mann_whitney_u invariants") {
    const std::vector<double> a = {0.3, 2.5, 1.1, 4.2, 3.3};
    std::vector<double> shifted;
    for (double v : a) shifted.push_back(v + 1000.0);
    CHECK(stats::mann_whitney_u(a, shifted).statistic == doctest::Approx(0.0));

    // invariance under a strictly monotone transform of the pooled sample
    const std::vector<double> b = {0.9, 1.6, 2.8, 5.0, 0.1, 3.9};
    const auto before = stats::mann_whitney_u(a, b);
    auto cube = [](double v) { return v * v * v + 2.0 * v; };
    std::vector<double> ta, tb;
    for (double v : a) ta.push_back(cube(v));
    for (double v : b) tb.push_back(cube(v));
    const auto after = stats::mann_whitney_u(ta, tb);
    CHECK(before.statistic == doctest::Approx(after.statistic));
    CHECK(*before.p_value == doctest::Approx(*after.p_value));
}

TEST_CASE("compare_groups assembles descriptives and tests") {
    std::vector<double> values = {1, 2, 3, 4, 10, 11, 12, 13};
    std::vector<bool> is_fake = {true, true, true, true, false, false, false, false};
    const auto gc = stats::compare_groups("toy", values, is_fake);
    CHECK(gc.fake.mean == doctest::Approx(2.5));
    CHECK(gc.fake.median == doctest::Approx(2.5));
    CHECK(gc.true_.mean == doctest::Approx(11.5));
    CHECK(gc.mann_whitney.statistic == doctest::Approx(0.0));
    CHECK(*gc.mann_whitney.p_value < 0.05);

    std::vector<double> constant(8, 5.0);
    const auto flat = stats::compare_groups("flat", constant, is_fake);
    CHECK(flat.mann_whitney.degenerate);
    CHECK(*flat.mann_whitney.p_value == doctest::Approx(1.0));

    std::vector<bool> single(8, true);
    CHECK_THROWS_AS((void)stats::compare_groups("x", values, single), RangeError);
}

TEST_CASE("normal helpers round-trip") {
    for (double p : {0.001, 0.025, 0.31, 0.5, 0.77, 0.975, 0.9999}) {
        CHECK(stats::normal_cdf(stats::inv_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)stats::inv_normal_cdf(0.0), RangeError);
}

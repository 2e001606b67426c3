#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credlens/error.hpp"

namespace credlens::stats {

// ---------------------------------------------------------------------------
// Normal distribution helpers
// ---------------------------------------------------------------------------

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Inverse normal CDF, Wichura's algorithm AS 241 (PPND16). Relative error
// below 1e-15 over (0, 1).
inline double inv_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw RangeError("inv_normal_cdf: p must be in (0,1)");
    const double q = p - 0.5;
    double r, num, den;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                    6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                  1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                    3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                  5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    r = q < 0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0 ? -val : val;
}

// ---------------------------------------------------------------------------
// Descriptives
// ---------------------------------------------------------------------------

inline double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double median(std::vector<double> x) {
    if (x.empty()) return 0.0;
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

// ---------------------------------------------------------------------------
// Pearson correlation
// ---------------------------------------------------------------------------

inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw RangeError("pearson_r: series lengths differ");
    const std::size_t n = x.size();
    if (n < 2) throw RangeError("pearson_r: need at least 2 observations");
    const double mx = mean(x), my = mean(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw RangeError("pearson_r: undefined for zero-variance input");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk normality test (Royston's AS R94 approximation)
// ---------------------------------------------------------------------------

enum class TestKind { Pearson, ShapiroWilk, MannWhitneyU };

struct StatTestResult {
    TestKind test = TestKind::ShapiroWilk;
    double statistic = 0.0;            // W for Shapiro-Wilk, U_min for MWU, r for Pearson
    std::optional<double> p_value;     // two-sided for MWU, upper tail for SW
    std::vector<std::size_t> n;        // sample sizes
    bool ties = false;
    bool degenerate = false;           // constant sample / all ties
    std::string note;
};

namespace detail {

inline double poly(std::span<const double> cc, double x) {
    double v = cc[0], p = 1.0;
    for (std::size_t i = 1; i < cc.size(); ++i) {
        p *= x;
        v += cc[i] * p;
    }
    return v;
}

}  // namespace detail

// Valid for 3 <= n <= 5000. A constant sample is reported with the
// degenerate flag set, W = NaN and no p-value.
inline StatTestResult shapiro_wilk(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 3 || n > 5000)
        throw RangeError("shapiro_wilk: sample size must be in [3, 5000], got " + std::to_string(n));

    StatTestResult res;
    res.test = TestKind::ShapiroWilk;
    res.n = {n};

    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) {
        res.degenerate = true;
        res.statistic = std::numeric_limits<double>::quiet_NaN();
        res.note = "constant sample; W undefined";
        return res;
    }
    res.ties = std::adjacent_find(x.begin(), x.end()) != x.end();

    // Polynomial coefficients from AS R94.
    static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr double c3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[3] = {-0.4803, -0.082676, 0.0030302};
    static constexpr double g[2] = {-2.273, 0.459};

    const std::size_t nn2 = n / 2;
    std::vector<double> a(nn2, 0.0);  // upper-tail weights, positive
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        // Blom scores for the lower half, then Royston's polynomial
        // correction of the two outermost weights and renormalization.
        const double an25 = static_cast<double>(n) + 0.25;
        double summ2 = 0.0;
        for (std::size_t i = 1; i <= nn2; ++i) {
            a[i - 1] = inv_normal_cdf((static_cast<double>(i) - 0.375) / an25);  // negative
            summ2 += a[i - 1] * a[i - 1];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
        const double a1 = detail::poly(c1, rsn) - a[0] / ssumm2;
        std::size_t i1;
        double fac;
        if (n > 5) {
            i1 = 3;
            const double a2 = -a[1] / ssumm2 + detail::poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            i1 = 2;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = i1; i <= nn2; ++i) a[i - 1] /= -fac;
    }

    // W = squared correlation between sorted data and antisymmetric weights.
    const double xbar = mean(x);
    double ssx = 0.0, ssa = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 0.0;
        if (i < nn2) w = -a[i];
        else if (n - 1 - i < nn2) w = a[n - 1 - i];
        const double dx = x[i] - xbar;
        ssx += dx * dx;
        ssa += w * w;
        sax += w * x[i];
    }
    double W = sax * sax / (ssa * ssx);
    W = std::min(W, 1.0);
    res.statistic = W;

    double pw;
    if (n == 3) {
        constexpr double pi6 = 1.90985931710274;    // 6/pi
        constexpr double stqr = 1.04719755119660;   // asin(sqrt(3/4))
        pw = pi6 * (std::asin(std::sqrt(W)) - stqr);
        pw = std::clamp(pw, 0.0, 1.0);
    } else {
        double y = std::log(1.0 - W), m, s;
        const double an = static_cast<double>(n);
        if (n <= 11) {
            const double gamma = detail::poly(g, an);
            if (y >= gamma) {
                res.p_value = 1e-99;
                return res;
            }
            y = -std::log(gamma - y);
            m = detail::poly(c3, an);
            s = std::exp(detail::poly(c4, an));
        } else {
            const double lx = std::log(an);
            m = detail::poly(c5, lx);
            s = std::exp(detail::poly(c6, lx));
        }
        pw = normal_sf((y - m) / s);
    }
    res.p_value = pw;
    return res;
}

// ---------------------------------------------------------------------------
// Mann-Whitney U test
// ---------------------------------------------------------------------------

namespace detail {

// Midranks of the pooled sample; also accumulates the tie term sum(t^3 - t).
inline std::vector<double> midranks(const std::vector<double>& pooled, double& tie_term,
                                    bool& has_ties) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(n, 0.0);
    tie_term = 0.0;
    has_ties = false;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double t = static_cast<double>(j - i + 1);
        const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        if (t > 1) {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        i = j + 1;
    }
    return ranks;
}

// Null distribution of U for tie-free samples via the standard counting
// recurrence: f[m][u] = number of ways to choose m of the first k ranks with
// rank-sum statistic u. Returns P(U <= u_obs).
inline double mwu_exact_cdf(std::size_t na, std::size_t nb, double u_obs) {
    const std::size_t n = na + nb;
    const std::size_t umax = na * nb;
    std::vector<std::vector<double>> f(na + 1, std::vector<double>(umax + 1, 0.0));
    f[0][0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t m = std::min(k, na); m >= 1; --m) {
            // placing the k-th smallest rank into group a contributes (k - m)
            // to U_a (the count of b-elements it beats)
            const std::size_t add = k - m;
            for (std::size_t u = umax + 1; u-- > add;) {
                f[m][u] += f[m - 1][u - add];
            }
        }
    }
    double total = 0.0, below = 0.0;
    for (std::size_t u = 0; u <= umax; ++u) {
        total += f[na][u];
        if (static_cast<double>(u) <= u_obs + 1e-12) below += f[na][u];
    }
    return below / total;
}

}  // namespace detail

struct MannWhitneyOptions {
    // Exact enumeration is used when total n <= exact_limit and no ties.
    std::size_t exact_limit = 12;
    bool continuity_correction = true;
};

// Approximate two-sided p via the tie-corrected normal approximation.
// Exposed so the exactness property can be tested over the full small-n grid.
inline double mwu_p_normal(double u_min, std::size_t na, std::size_t nb, double tie_term,
                           bool continuity = true) {
    const double dna = static_cast<double>(na), dnb = static_cast<double>(nb);
    const double n = dna + dnb;
    const double mu = dna * dnb / 2.0;
    const double var = dna * dnb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) return 1.0;  // all observations tied
    double z = u_min - mu;
    if (continuity) z += 0.5;  // u_min <= mu, shift toward the mean
    z /= std::sqrt(var);
    return std::min(1.0, 2.0 * normal_cdf(z));
}

inline StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                     const MannWhitneyOptions& opt = {}) {
    if (a.empty() || b.empty()) throw RangeError("mann_whitney_u: both samples must be nonempty");
    const std::size_t na = a.size(), nb = b.size();
    std::vector<double> pooled;
    pooled.reserve(na + nb);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());

    double tie_term = 0.0;
    bool has_ties = false;
    const auto ranks = detail::midranks(pooled, tie_term, has_ties);
    double ra = 0.0;
    for (std::size_t i = 0; i < na; ++i) ra += ranks[i];
    const double ua = ra - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
    const double ub = static_cast<double>(na) * static_cast<double>(nb) - ua;
    const double u_min = std::min(ua, ub);

    StatTestResult res;
    res.test = TestKind::MannWhitneyU;
    res.statistic = u_min;
    res.n = {na, nb};
    res.ties = has_ties;

    const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    if (*mn == *mx) {
        res.degenerate = true;
        res.p_value = 1.0;
        res.note = "all observations tied";
        return res;
    }
    if (!has_ties && na + nb <= opt.exact_limit) {
        res.p_value = std::min(1.0, 2.0 * detail::mwu_exact_cdf(na, nb, u_min));
        res.note = "exact";
    } else {
        res.p_value = mwu_p_normal(u_min, na, nb, tie_term, opt.continuity_correction);
        res.note = "normal approximation";
    }
    return res;
}

// ---------------------------------------------------------------------------
// Group comparison (one report table row)
// ---------------------------------------------------------------------------

struct GroupDescribe {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
};

struct GroupComparison {
    std::string feature;
    GroupDescribe fake;
    GroupDescribe true_;
    std::optional<StatTestResult> shapiro_fake;
    std::optional<StatTestResult> shapiro_true;
    StatTestResult mann_whitney;
};

// `is_fake[i]` selects the group of values[i]. Requires both groups nonempty.
inline GroupComparison compare_groups(const std::string& feature_name,
                                      std::span<const double> values,
                                      const std::vector<bool>& is_fake) {
    if (values.size() != is_fake.size())
        throw RangeError("compare_groups: values/labels length mismatch");
    std::vector<double> fake_vals, true_vals;
    for (std::size_t i = 0; i < values.size(); ++i)
        (is_fake[i] ? fake_vals : true_vals).push_back(values[i]);
    if (fake_vals.empty() || true_vals.empty())
        throw RangeError("compare_groups: both label groups must be nonempty");

    GroupComparison gc;
    gc.feature = feature_name;
    gc.fake = {fake_vals.size(), mean(fake_vals), median(fake_vals)};
    gc.true_ = {true_vals.size(), mean(true_vals), median(true_vals)};
    auto try_shapiro = [](const std::vector<double>& v) -> std::optional<StatTestResult> {
        if (v.size() < 3 || v.size() > 5000) return std::nullopt;
        return shapiro_wilk(v);
    };
    gc.shapiro_fake = try_shapiro(fake_vals);
    gc.shapiro_true = try_shapiro(true_vals);
    gc.mann_whitney = mann_whitney_u(fake_vals, true_vals);
    return gc;
}

}  // namespace credlens::stats

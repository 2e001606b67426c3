#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "credlens/error.hpp"
#include "credlens/ml/features.hpp"
#include "credlens/random.hpp"

namespace credlens::ml {

enum class ModelKind { LogReg, LinearSvm, GaussianNb, RandomForest, AdaBoostStumps, GbdtStumps };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::LogReg: return "logreg";
        case ModelKind::LinearSvm: return "linear_svm";
        case ModelKind::GaussianNb: return "gaussian_nb";
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::AdaBoostStumps: return "adaboost_stumps";
        default: return "gbdt_stumps";
    }
}

inline ModelKind parse_model_kind(const std::string& s) {
    if (s == "logreg") return ModelKind::LogReg;
    if (s == "linear_svm") return ModelKind::LinearSvm;
    if (s == "gaussian_nb") return ModelKind::GaussianNb;
    if (s == "random_forest") return ModelKind::RandomForest;
    if (s == "adaboost_stumps") return ModelKind::AdaBoostStumps;
    if (s == "gbdt_stumps") return ModelKind::GbdtStumps;
    throw ConfigError("unknown model kind '" + s + "'");
}

inline const std::vector<ModelKind>& model_roster() {
    static const std::vector<ModelKind> r = {ModelKind::LogReg,        ModelKind::LinearSvm,
                                             ModelKind::GaussianNb,    ModelKind::RandomForest,
                                             ModelKind::AdaBoostStumps, ModelKind::GbdtStumps};
    return r;
}

struct HyperParams {
    double logreg_lambda = 1.0;
    double logreg_tol = 1e-6;
    int logreg_max_iter = 5000;
    double svm_c = 1.0;
    int svm_epochs = 200;
    double nb_var_floor_rel = 1e-9;
    int forest_trees = 100;
    int forest_min_leaf = 1;
    int ada_rounds = 100;
    int gbdt_rounds = 100;
    double gbdt_learning_rate = 0.1;
};

struct ModelSpec {
    ModelKind kind = ModelKind::LogReg;
    HyperParams hp{};
    std::uint64_t seed = 42;
};

using Rows = std::vector<std::vector<double>>;

namespace detail {

inline double sigmoid(double z) {
    if (z >= 0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline void check_training_inputs(const Rows& X, const std::vector<int>& y,
                                  const std::vector<std::string>& names) {
    if (X.size() != y.size()) throw TrainingError("fit: feature rows and labels differ in length");
    if (X.empty()) throw TrainingError("fit: empty training set");
    bool has0 = false, has1 = false;
    for (int v : y) (v == 0 ? has0 : has1) = true;
    if (!has0 || !has1) throw TrainingError("fit: training labels contain a single class");
    for (const auto& row : X) {
        if (row.size() != names.size()) throw TrainingError("fit: ragged feature matrix");
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!std::isfinite(row[j]))
                throw DataError("fit: non-finite value in feature '" + names[j] + "'");
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Logistic regression (L2, full-batch gradient descent with backtracking)
// ---------------------------------------------------------------------------

struct LogRegModel {
    std::vector<double> w;
    double b = 0.0;
    int iterations = 0;
    double final_grad_norm = 0.0;

    double score(const std::vector<double>& x) const {
        return detail::sigmoid(std::inner_product(w.begin(), w.end(), x.begin(), b));
    }
};

struct LogRegObjective {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

// Mean cross-entropy plus (lambda / 2n) * ||w||^2; bias unregularized.
// Exposed for the finite-difference gradient check.
inline LogRegObjective logreg_objective(const Rows& X, const std::vector<int>& y,
                                        const std::vector<double>& w, double b, double lambda) {
    const std::size_t n = X.size(), d = w.size();
    LogRegObjective obj;
    obj.grad_w.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = std::inner_product(w.begin(), w.end(), X[i].begin(), b);
        // stable: log(1 + e^z) - y z
        obj.loss += std::max(z, 0.0) - static_cast<double>(y[i]) * z + std::log1p(std::exp(-std::abs(z)));
        const double err = detail::sigmoid(z) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < d; ++j) obj.grad_w[j] += err * X[i][j];
        obj.grad_b += err;
    }
    const double dn = static_cast<double>(n);
    obj.loss /= dn;
    obj.grad_b /= dn;
    double reg = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        obj.grad_w[j] = obj.grad_w[j] / dn + lambda / dn * w[j];
        reg += w[j] * w[j];
    }
    obj.loss += lambda / (2.0 * dn) * reg;
    return obj;
}

inline LogRegModel fit_logreg(const Rows& X, const std::vector<int>& y, const HyperParams& hp) {
    const std::size_t d = X.empty() ? 0 : X[0].size();
    LogRegModel m;
    m.w.assign(d, 0.0);
    double loss = logreg_objective(X, y, m.w, m.b, hp.logreg_lambda).loss;
    for (int it = 0; it < hp.logreg_max_iter; ++it) {
        const auto obj = logreg_objective(X, y, m.w, m.b, hp.logreg_lambda);
        double g2 = obj.grad_b * obj.grad_b;
        for (double g : obj.grad_w) g2 += g * g;
        m.final_grad_norm = std::sqrt(g2);
        m.iterations = it;
        if (m.final_grad_norm <= hp.logreg_tol) break;
        // Armijo backtracking from unit step
        double step = 1.0;
        std::vector<double> w_try(d);
        double b_try = m.b;
        bool accepted = false;
        for (int h = 0; h < 60 && !accepted; ++h) {
            for (std::size_t j = 0; j < d; ++j) w_try[j] = m.w[j] - step * obj.grad_w[j];
            b_try = m.b - step * obj.grad_b;
            const double new_loss = logreg_objective(X, y, w_try, b_try, hp.logreg_lambda).loss;
            if (new_loss <= loss - 1e-4 * step * g2) {
                loss = new_loss;
                accepted = true;
            } else {
                step *= 0.5;
            }
        }
        if (!accepted) break;  // no descent step representable
        m.w.swap(w_try);
        m.b = b_try;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Linear SVM (hinge + L2, Pegasos-style epoch-ordered subgradient descent)
// ---------------------------------------------------------------------------

struct LinearSvmModel {
    std::vector<double> w;  // last entry is the bias weight (constant-1 feature)

    double score(const std::vector<double>& x) const {
        double z = w.back();
        for (std::size_t j = 0; j + 1 < w.size(); ++j) z += w[j] * x[j];
        return z;
    }
};

inline LinearSvmModel fit_linear_svm(const Rows& X, const std::vector<int>& y,
                                     const HyperParams& hp) {
    const std::size_t n = X.size(), d = X[0].size();
    const double lambda = 1.0 / (hp.svm_c * static_cast<double>(n));
    LinearSvmModel m;
    m.w.assign(d + 1, 0.0);
    std::size_t t = 0;
    for (int epoch = 0; epoch < hp.svm_epochs; ++epoch) {
        for (std::size_t i = 0; i < n; ++i) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double ypm = y[i] == 1 ? 1.0 : -1.0;
            double z = m.w[d];
            for (std::size_t j = 0; j < d; ++j) z += m.w[j] * X[i][j];
            const double shrink = 1.0 - eta * lambda;  // = 1 - 1/t
            for (auto& wj : m.w) wj *= shrink;
            if (ypm * z < 1.0) {
                for (std::size_t j = 0; j < d; ++j) m.w[j] += eta * ypm * X[i][j];
                m.w[d] += eta * ypm;
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes
// ---------------------------------------------------------------------------

struct GaussianNbModel {
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> mean[2];
    std::vector<double> var[2];

    double log_likelihood(const std::vector<double>& x, int cls) const {
        double ll = log_prior[cls];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - mean[cls][j];
            ll += -0.5 * std::log(2.0 * 3.14159265358979323846 * var[cls][j]) -
                  diff * diff / (2.0 * var[cls][j]);
        }
        return ll;
    }
};

inline GaussianNbModel fit_gaussian_nb(const Rows& X, const std::vector<int>& y,
                                       const HyperParams& hp) {
    const std::size_t n = X.size(), d = X[0].size();
    GaussianNbModel m;
    std::size_t count[2] = {0, 0};
    for (int cls : {0, 1}) {
        m.mean[cls].assign(d, 0.0);
        m.var[cls].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        ++count[y[i]];
        for (std::size_t j = 0; j < d; ++j) m.mean[y[i]][j] += X[i][j];
    }
    for (int cls : {0, 1})
        for (std::size_t j = 0; j < d; ++j) m.mean[cls][j] /= static_cast<double>(count[cls]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = X[i][j] - m.mean[y[i]][j];
            m.var[y[i]][j] += diff * diff;
        }
    }
    // variance floor scaled by the largest pooled feature variance
    double max_pooled = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += X[i][j];
        mu /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += (X[i][j] - mu) * (X[i][j] - mu);
        max_pooled = std::max(max_pooled, v / static_cast<double>(n));
    }
    const double floor = std::max(hp.nb_var_floor_rel * max_pooled, 1e-12);
    for (int cls : {0, 1}) {
        m.log_prior[cls] = std::log(static_cast<double>(count[cls]) / static_cast<double>(n));
        for (std::size_t j = 0; j < d; ++j)
            m.var[cls][j] = m.var[cls][j] / static_cast<double>(count[cls]) + floor;
    }
    return m;
}

// ---------------------------------------------------------------------------
// CART trees (Gini) and the random forest
// ---------------------------------------------------------------------------

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    int predict(const std::vector<double>& x) const {
        int idx = 0;
        while (nodes[idx].feature >= 0)
            idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                                : nodes[idx].right;
        return nodes[idx].label;
    }
};

namespace detail {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

inline double gini(double c0, double c1) {
    const double n = c0 + c1;
    if (n <= 0) return 0.0;
    return 1.0 - (c0 * c0 + c1 * c1) / (n * n);
}

// Best Gini split over the given candidate features; samples given by index.
inline SplitChoice best_gini_split(const Rows& X, const std::vector<int>& y,
                                   const std::vector<std::size_t>& idx,
                                   const std::vector<int>& features, int min_leaf) {
    SplitChoice best;
    std::vector<std::pair<double, int>> vals(idx.size());
    for (int f : features) {
        for (std::size_t k = 0; k < idx.size(); ++k) vals[k] = {X[idx[k]][f], y[idx[k]]};
        std::sort(vals.begin(), vals.end());
        double left0 = 0, left1 = 0, right0 = 0, right1 = 0;
        for (const auto& [v, lab] : vals) (lab == 0 ? right0 : right1) += 1.0;
        const double n = static_cast<double>(idx.size());
        for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
            (vals[k].second == 0 ? left0 : left1) += 1.0;
            (vals[k].second == 0 ? right0 : right1) -= 1.0;
            if (vals[k].first == vals[k + 1].first) continue;
            const double nl = left0 + left1, nr = right0 + right1;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double imp = (nl * gini(left0, left1) + nr * gini(right0, right1)) / n;
            if (imp < best.impurity - 1e-15) {
                best.impurity = imp;
                best.feature = f;
                best.threshold = 0.5 * (vals[k].first + vals[k + 1].first);
            }
        }
    }
    return best;
}

inline int majority(const std::vector<int>& y, const std::vector<std::size_t>& idx) {
    std::size_t c1 = 0;
    for (auto i : idx)
        if (y[i] == 1) ++c1;
    return 2 * c1 > idx.size() ? 1 : 0;  // ties resolve to class 0
}

inline int grow_tree(Tree& tree, const Rows& X, const std::vector<int>& y,
                     std::vector<std::size_t> idx, int n_features, int mtry, int min_leaf,
                     rng::SplitMix64& gen) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    bool pure = true;
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (y[idx[k]] != y[idx[0]]) {
            pure = false;
            break;
        }
    if (pure || idx.size() < static_cast<std::size_t>(2 * min_leaf)) {
        tree.nodes[node_id].label = majority(y, idx);
        return node_id;
    }
    // sample mtry distinct features, scan them in index order
    std::vector<int> pool(n_features);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> chosen;
    for (int k = 0; k < mtry && !pool.empty(); ++k) {
        const std::size_t pick = static_cast<std::size_t>(gen.next_below(pool.size()));
        chosen.push_back(pool[pick]);
        pool[pick] = pool.back();
        pool.pop_back();
    }
    std::sort(chosen.begin(), chosen.end());
    const auto split = best_gini_split(X, y, idx, chosen, min_leaf);
    if (split.feature < 0) {
        tree.nodes[node_id].label = majority(y, idx);
        return node_id;
    }
    std::vector<std::size_t> left_idx, right_idx;
    for (auto i : idx)
        (X[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    tree.nodes[node_id].feature = split.feature;
    tree.nodes[node_id].threshold = split.threshold;
    const int l = grow_tree(tree, X, y, std::move(left_idx), n_features, mtry, min_leaf, gen);
    const int r = grow_tree(tree, X, y, std::move(right_idx), n_features, mtry, min_leaf, gen);
    tree.nodes[node_id].left = l;
    tree.nodes[node_id].right = r;
    return node_id;
}

}  // namespace detail

struct RandomForestModel {
    std::vector<Tree> trees;

    int predict(const std::vector<double>& x) const {
        std::size_t votes1 = 0;
        for (const auto& t : trees)
            if (t.predict(x) == 1) ++votes1;
        return 2 * votes1 > trees.size() ? 1 : 0;
    }
};

inline RandomForestModel fit_random_forest(const Rows& X, const std::vector<int>& y,
                                           const HyperParams& hp, std::uint64_t seed) {
    const std::size_t n = X.size();
    const int d = static_cast<int>(X[0].size());
    const int mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    RandomForestModel forest;
    rng::SplitMix64 seeder(seed);
    for (int t = 0; t < hp.forest_trees; ++t) {
        rng::SplitMix64 gen(seeder.next());
        std::vector<std::size_t> boot(n);
        for (std::size_t i = 0; i < n; ++i) boot[i] = static_cast<std::size_t>(gen.next_below(n));
        Tree tree;
        detail::grow_tree(tree, X, y, std::move(boot), d, mtry, hp.forest_min_leaf, gen);
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

// ---------------------------------------------------------------------------
// AdaBoost over decision stumps (SAMME, binary)
// ---------------------------------------------------------------------------

struct Stump {
    int feature = 0;
    double threshold = 0.0;
    int left_label = 0;   // predicted when x <= threshold
    int right_label = 1;

    int predict(const std::vector<double>& x) const {
        return x[feature] <= threshold ? left_label : right_label;
    }
};

struct AdaBoostModel {
    std::vector<Stump> stumps;
    std::vector<double> alphas;

    double score(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t m = 0; m < stumps.size(); ++m)
            s += alphas[m] * (stumps[m].predict(x) == 1 ? 1.0 : -1.0);
        return s;
    }
    int predict(const std::vector<double>& x) const { return score(x) > 0.0 ? 1 : 0; }
};

namespace detail {

// Minimum weighted-error stump; each side predicts its weighted majority.
inline std::optional<std::pair<Stump, double>> best_stump(const Rows& X, const std::vector<int>& y,
                                                          const std::vector<double>& w) {
    const std::size_t n = X.size(), d = X[0].size();
    std::optional<std::pair<Stump, double>> best;
    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < d; ++f) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return X[a][f] < X[b][f]; });
        double left_w[2] = {0.0, 0.0};
        double total_w[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) total_w[y[i]] += w[i];
        for (std::size_t k = 0; k + 1 < n; ++k) {
            left_w[y[order[k]]] += w[order[k]];
            if (X[order[k]][f] == X[order[k + 1]][f]) continue;
            const double right_w0 = total_w[0] - left_w[0];
            const double right_w1 = total_w[1] - left_w[1];
            const int ll = left_w[1] > left_w[0] ? 1 : 0;
            const int rl = right_w1 > right_w0 ? 1 : 0;
            const double err = std::min(left_w[0], left_w[1]) + std::min(right_w0, right_w1);
            if (!best || err < best->second - 1e-15) {
                Stump s;
                s.feature = static_cast<int>(f);
                s.threshold = 0.5 * (X[order[k]][f] + X[order[k + 1]][f]);
                s.left_label = ll;
                s.right_label = rl;
                best = {s, err};
            }
        }
    }
    return best;
}

}  // namespace detail

inline AdaBoostModel fit_adaboost(const Rows& X, const std::vector<int>& y,
                                  const HyperParams& hp) {
    const std::size_t n = X.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    AdaBoostModel model;
    for (int m = 0; m < hp.ada_rounds; ++m) {
        const auto found = detail::best_stump(X, y, w);
        if (!found) break;
        const auto& [stump, err] = *found;
        if (err >= 0.5 - 1e-12) break;
        const double eps = std::max(err, 1e-12);
        const double alpha = std::log((1.0 - eps) / eps);
        model.stumps.push_back(stump);
        model.alphas.push_back(alpha);
        if (err <= 1e-12) break;  // perfect stump dominates all later votes
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (stump.predict(X[i]) != y[i]) w[i] *= std::exp(alpha);
            z += w[i];
        }
        for (auto& wi : w) wi /= z;
    }
    if (model.stumps.empty()) {
        // degenerate data with no usable split: constant majority stump
        Stump s;
        s.feature = 0;
        s.threshold = std::numeric_limits<double>::infinity();
        std::size_t c1 = 0;
        for (int v : y)
            if (v == 1) ++c1;
        s.left_label = 2 * c1 > n ? 1 : 0;
        s.right_label = s.left_label;
        model.stumps.push_back(s);
        model.alphas.push_back(1.0);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Gradient-boosted depth-1 regression trees on logistic loss
// ---------------------------------------------------------------------------

struct RegStump {
    int feature = -1;  // -1: constant stump, left_value applies everywhere
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;

    double value(const std::vector<double>& x) const {
        if (feature < 0) return left_value;
        return x[feature] <= threshold ? left_value : right_value;
    }
};

struct GbdtModel {
    double f0 = 0.0;
    double learning_rate = 0.1;
    std::vector<RegStump> stumps;

    double raw_score(const std::vector<double>& x) const {
        double f = f0;
        for (const auto& s : stumps) f += learning_rate * s.value(x);
        return f;
    }
    double probability(const std::vector<double>& x) const {
        return detail::sigmoid(raw_score(x));
    }
    int predict(const std::vector<double>& x) const { return probability(x) >= 0.5 ? 1 : 0; }
};

namespace detail {

// Squared-error split on residuals (maximize sum^2/n on both sides), Newton
// leaf values sum(r) / sum(h).
inline RegStump fit_reg_stump(const Rows& X, const std::vector<double>& residual,
                              const std::vector<double>& hessian) {
    const std::size_t n = X.size(), d = X[0].size();
    const double total_r = std::accumulate(residual.begin(), residual.end(), 0.0);
    const double total_h = std::accumulate(hessian.begin(), hessian.end(), 0.0);
    double best_gain = -std::numeric_limits<double>::infinity();
    RegStump best;
    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < d; ++f) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return X[a][f] < X[b][f]; });
        double lr = 0.0, lh = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            lr += residual[order[k]];
            lh += hessian[order[k]];
            if (X[order[k]][f] == X[order[k + 1]][f]) continue;
            const double nl = static_cast<double>(k + 1), nr = static_cast<double>(n - k - 1);
            const double rr = total_r - lr;
            const double gain = lr * lr / nl + rr * rr / nr;
            if (gain > best_gain + 1e-15) {
                best_gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (X[order[k]][f] + X[order[k + 1]][f]);
                const double rh = total_h - lh;
                best.left_value = lh > 1e-12 ? lr / lh : 0.0;
                best.right_value = rh > 1e-12 ? rr / rh : 0.0;
            }
        }
    }
    if (best.feature < 0) {
        best.left_value = total_h > 1e-12 ? total_r / total_h : 0.0;
        best.right_value = best.left_value;
    }
    return best;
}

}  // namespace detail

inline GbdtModel fit_gbdt(const Rows& X, const std::vector<int>& y, const HyperParams& hp) {
    const std::size_t n = X.size();
    GbdtModel model;
    model.learning_rate = hp.gbdt_learning_rate;
    double p1 = 0.0;
    for (int v : y) p1 += v;
    p1 = std::clamp(p1 / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    model.f0 = std::log(p1 / (1.0 - p1));
    std::vector<double> f(n, model.f0), residual(n), hessian(n);
    for (int m = 0; m < hp.gbdt_rounds; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = detail::sigmoid(f[i]);
            residual[i] = static_cast<double>(y[i]) - p;
            hessian[i] = p * (1.0 - p);
        }
        const RegStump stump = detail::fit_reg_stump(X, residual, hessian);
        model.stumps.push_back(stump);
        for (std::size_t i = 0; i < n; ++i) f[i] += model.learning_rate * stump.value(X[i]);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Unified trained-model wrapper
// ---------------------------------------------------------------------------

struct TrainedModel {
    ModelKind kind = ModelKind::LogReg;
    std::vector<std::string> feature_names;
    std::variant<LogRegModel, LinearSvmModel, GaussianNbModel, RandomForestModel, AdaBoostModel,
                 GbdtModel>
        impl;

    int predict_row(const std::vector<double>& x) const {
        switch (kind) {
            case ModelKind::LogReg:
                return std::get<LogRegModel>(impl).score(x) >= 0.5 ? 1 : 0;
            case ModelKind::LinearSvm:
                return std::get<LinearSvmModel>(impl).score(x) > 0.0 ? 1 : 0;
            case ModelKind::GaussianNb: {
                const auto& nb = std::get<GaussianNbModel>(impl);
                return nb.log_likelihood(x, 1) > nb.log_likelihood(x, 0) ? 1 : 0;
            }
            case ModelKind::RandomForest:
                return std::get<RandomForestModel>(impl).predict(x);
            case ModelKind::AdaBoostStumps:
                return std::get<AdaBoostModel>(impl).predict(x);
            default:
                return std::get<GbdtModel>(impl).predict(x);
        }
    }

    // Class-1 probability for the probabilistic models.
    std::optional<double> probability_row(const std::vector<double>& x) const {
        if (kind == ModelKind::LogReg) return std::get<LogRegModel>(impl).score(x);
        if (kind == ModelKind::GbdtStumps) return std::get<GbdtModel>(impl).probability(x);
        return std::nullopt;
    }
};

inline TrainedModel fit(const ModelSpec& spec, const Rows& X, const std::vector<int>& y,
                        const std::vector<std::string>& feature_names) {
    detail::check_training_inputs(X, y, feature_names);
    TrainedModel model;
    model.kind = spec.kind;
    model.feature_names = feature_names;
    switch (spec.kind) {
        case ModelKind::LogReg: model.impl = fit_logreg(X, y, spec.hp); break;
        case ModelKind::LinearSvm: model.impl = fit_linear_svm(X, y, spec.hp); break;
        case ModelKind::GaussianNb: model.impl = fit_gaussian_nb(X, y, spec.hp); break;
        case ModelKind::RandomForest: model.impl = fit_random_forest(X, y, spec.hp, spec.seed); break;
        case ModelKind::AdaBoostStumps: model.impl = fit_adaboost(X, y, spec.hp); break;
        case ModelKind::GbdtStumps: model.impl = fit_gbdt(X, y, spec.hp); break;
    }
    return model;
}

// Column alignment against the training schema; same names in a different
// order are mapped, anything missing or extra is an error.
inline std::vector<std::size_t> schema_mapping(const std::vector<std::string>& model_names,
                                               const std::vector<std::string>& input_names) {
    std::vector<std::size_t> mapping;
    std::vector<std::string> missing, extra;
    for (const auto& needed : model_names) {
        const auto it = std::find(input_names.begin(), input_names.end(), needed);
        if (it == input_names.end()) missing.push_back(needed);
        else mapping.push_back(static_cast<std::size_t>(it - input_names.begin()));
    }
    for (const auto& given : input_names) {
        if (std::find(model_names.begin(), model_names.end(), given) == model_names.end())
            extra.push_back(given);
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "prediction schema mismatch;";
        if (!missing.empty()) {
            msg += " missing: ";
            for (const auto& s : missing) msg += s + " ";
        }
        if (!extra.empty()) {
            msg += " extra: ";
            for (const auto& s : extra) msg += s + " ";
        }
        throw SchemaError(msg);
    }
    return mapping;
}

inline std::vector<int> predict(const TrainedModel& model, const FeatureMatrix& X) {
    const auto mapping = schema_mapping(model.feature_names, X.feature_names);
    std::vector<int> out;
    out.reserve(X.rows.size());
    std::vector<double> aligned(mapping.size());
    for (const auto& row : X.rows) {
        for (std::size_t j = 0; j < mapping.size(); ++j) aligned[j] = row[mapping[j]];
        out.push_back(model.predict_row(aligned));
    }
    return out;
}

}  // namespace credlens::ml

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "credlens/error.hpp"
#include "credlens/ml/features.hpp"
#include "credlens/ml/models.hpp"
#include "credlens/random.hpp"

namespace credlens::ml {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// F1 scores
// ---------------------------------------------------------------------------

struct ClassF1 {
    int label = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool undefined = false;  // 0/0 precision, recall or F1 reported as 0
};

struct F1Scores {
    double micro = 0.0;
    double macro = 0.0;
    double weighted = 0.0;
    std::vector<ClassF1> per_class;
};

inline F1Scores f1_scores(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.empty())
        throw RangeError("f1_scores: label vectors must be nonempty and equal length");
    F1Scores out;
    double micro_tp = 0, micro_fp = 0, micro_fn = 0;
    double weighted_sum = 0, macro_sum = 0;
    for (int cls : {0, 1}) {
        double tp = 0, fp = 0, fn = 0;
        std::size_t support = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            const bool is_cls = y_true[i] == cls;
            const bool pred_cls = y_pred[i] == cls;
            if (is_cls) ++support;
            if (is_cls && pred_cls) ++tp;
            else if (!is_cls && pred_cls) ++fp;
            else if (is_cls && !pred_cls) ++fn;
        }
        ClassF1 c;
        c.label = cls;
        c.support = support;
        c.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        c.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall)
                                          : 0.0;
        // any 0/0 ratio was reported as 0
        c.undefined = tp + fp == 0 || tp + fn == 0 || c.precision + c.recall == 0;
        micro_tp += tp;
        micro_fp += fp;
        micro_fn += fn;
        macro_sum += c.f1;
        weighted_sum += c.f1 * static_cast<double>(support);
        out.per_class.push_back(c);
    }
    out.macro = macro_sum / 2.0;
    out.weighted = weighted_sum / static_cast<double>(y_true.size());
    const double mp = micro_tp + micro_fp > 0 ? micro_tp / (micro_tp + micro_fp) : 0.0;
    const double mr = micro_tp + micro_fn > 0 ? micro_tp / (micro_tp + micro_fn) : 0.0;
    out.micro = mp + mr > 0 ? 2 * mp * mr / (mp + mr) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Stratified folds
// ---------------------------------------------------------------------------

// Seeded label-stratified assignment; per-class and overall fold sizes each
// differ by at most one. Returns fold index per row.
inline std::vector<int> stratified_fold_assignment(const std::vector<int>& y, int k,
                                                   std::uint64_t seed) {
    if (k < 2) throw TrainingError("cross-validation requires k >= 2");
    for (int cls : {0, 1}) {
        const auto count = std::count(y.begin(), y.end(), cls);
        if (count < k)
            throw TrainingError("class " + std::to_string(cls) + " has " + std::to_string(count) +
                                " samples, fewer than k=" + std::to_string(k));
    }
    rng::SplitMix64 gen(seed);
    std::vector<int> fold(y.size(), -1);
    std::size_t offset = 0;  // continue round-robin across classes to balance totals
    for (int cls : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == cls) idx.push_back(i);
        gen.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold[idx[i]] = static_cast<int>((offset + i) % static_cast<std::size_t>(k));
        offset = (offset + idx.size()) % static_cast<std::size_t>(k);
    }
    return fold;
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

struct FoldResult {
    int fold = 0;
    std::vector<std::string> test_ids;
    double f1_micro = 0.0;
    double f1_macro = 0.0;
    double f1_weighted = 0.0;
};

struct EvalReport {
    std::string classifier;
    std::string feature_config;
    std::uint64_t seed = 42;
    int k = 10;
    std::vector<FoldResult> folds;
    double mean_f1_micro = 0.0;
    double mean_f1_macro = 0.0;
    double mean_f1_weighted = 0.0;
};

inline bool needs_standardization(ModelKind kind) {
    return kind == ModelKind::LogReg || kind == ModelKind::LinearSvm;
}

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Rows& X) {
        Standardizer s;
        if (X.empty()) return s;
        const std::size_t d = X[0].size();
        s.mean.assign(d, 0.0);
        s.scale.assign(d, 1.0);
        for (const auto& row : X)
            for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
        for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(X.size());
        std::vector<double> var(d, 0.0);
        for (const auto& row : X)
            for (std::size_t j = 0; j < d; ++j)
                var[j] += (row[j] - s.mean[j]) * (row[j] - s.mean[j]);
        for (std::size_t j = 0; j < d; ++j) {
            const double sd = std::sqrt(var[j] / static_cast<double>(X.size()));
            s.scale[j] = sd > 0.0 ? sd : 1.0;  // constant column passes through as 0
        }
        return s;
    }

    void apply(Rows& X) const {
        for (auto& row : X)
            for (std::size_t j = 0; j < row.size(); ++j)
                row[j] = (row[j] - mean[j]) / scale[j];
    }
};

namespace detail {

inline void finish_report(EvalReport& report) {
    for (const auto& f : report.folds) {
        report.mean_f1_micro += f.f1_micro;
        report.mean_f1_macro += f.f1_macro;
        report.mean_f1_weighted += f.f1_weighted;
    }
    const double nk = static_cast<double>(report.folds.size());
    report.mean_f1_micro /= nk;
    report.mean_f1_macro /= nk;
    report.mean_f1_weighted /= nk;
}

}  // namespace detail

inline int label_to_int(Label l) { return l == Label::Fake ? 1 : 0; }

// K-fold CV over an already-assembled matrix (no history recomputation).
// Used directly for synthetic data; the corpus variant below handles
// fold-local history features.
inline EvalReport cross_validate_matrix(const ModelSpec& spec, const FeatureMatrix& m, int k,
                                        std::uint64_t seed) {
    std::vector<int> y;
    for (auto l : m.labels) y.push_back(label_to_int(l));
    const auto fold_of = stratified_fold_assignment(y, k, seed);

    EvalReport report;
    report.classifier = to_string(spec.kind);
    report.feature_config = "matrix";
    report.seed = seed;
    report.k = k;
    for (int f = 0; f < k; ++f) {
        Rows xtr, xte;
        std::vector<int> ytr, yte;
        FoldResult fr;
        fr.fold = f;
        for (std::size_t i = 0; i < m.rows.size(); ++i) {
            if (fold_of[i] == f) {
                xte.push_back(m.rows[i]);
                yte.push_back(y[i]);
                fr.test_ids.push_back(m.ids[i]);
            } else {
                xtr.push_back(m.rows[i]);
                ytr.push_back(y[i]);
            }
        }
        if (needs_standardization(spec.kind)) {
            const auto st = Standardizer::fit(xtr);
            st.apply(xtr);
            st.apply(xte);
        }
        ModelSpec fold_spec = spec;
        fold_spec.seed = seed * 1000003ULL + static_cast<std::uint64_t>(f);
        const auto model = fit(fold_spec, xtr, ytr, m.feature_names);
        std::vector<int> pred;
        pred.reserve(xte.size());
        for (const auto& row : xte) pred.push_back(model.predict_row(row));
        const auto f1 = f1_scores(yte, pred);
        fr.f1_micro = f1.micro;
        fr.f1_macro = f1.macro;
        fr.f1_weighted = f1.weighted;
        report.folds.push_back(std::move(fr));
    }
    detail::finish_report(report);
    return report;
}

// Fold-invariant registry rows for every article; reusable across repeated
// cross-validation runs (different models, configs or seeds).
inline std::vector<std::vector<double>> precompute_registry_rows(
    const Corpus& c, const resources::ResourceSet& res) {
    std::vector<std::vector<double>> rows;
    rows.reserve(c.articles.size());
    for (const auto& a : c.articles) rows.push_back(detail::invariant_row(a, res));
    return rows;
}

// Full pipeline CV: stratified folds, history features recomputed per fold
// against the training articles only, optional standardization fit on the
// training fold. A test article id found in any reference set aborts.
// Takes precomputed registry rows so repeated runs skip re-extraction.
inline EvalReport cross_validate_with_rows(const ModelSpec& spec, const Corpus& c,
                                           const FeatureConfig& config, int k,
                                           std::uint64_t seed,
                                           const std::vector<std::vector<double>>& registry_rows) {
    const std::size_t n = c.articles.size();
    if (registry_rows.size() != n)
        throw TrainingError("cross_validate: registry row cache does not match the corpus");
    std::vector<int> y;
    y.reserve(n);
    for (const auto& a : c.articles) y.push_back(label_to_int(a.label));
    const auto fold_of = stratified_fold_assignment(y, k, seed);

    EvalReport report;
    report.classifier = to_string(spec.kind);
    report.feature_config = config.name;
    report.seed = seed;
    report.k = k;

    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        std::unordered_set<std::string> train_ids;
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of[i] == f) test_idx.push_back(i);
            else {
                train_idx.push_back(i);
                train_ids.insert(c.articles[i].id);
            }
        }
        // leakage guard: reference sets are always subsets of the train fold
        for (auto i : test_idx) {
            if (train_ids.count(c.articles[i].id))
                throw LeakageError("fold " + std::to_string(f) + ": test article '" +
                                   c.articles[i].id + "' appears in the history reference set");
        }
        std::unordered_map<std::string, std::vector<std::size_t>> train_by_author;
        for (auto i : train_idx)
            for (const auto& name : c.articles[i].authors)
                train_by_author[corpus::author_identity(name)].push_back(i);

        auto history_for = [&](std::size_t i) {
            std::unordered_set<std::size_t> sharing;
            for (const auto& name : c.articles[i].authors) {
                const auto it = train_by_author.find(corpus::author_identity(name));
                if (it == train_by_author.end()) continue;
                for (auto j : it->second)
                    if (j != i) sharing.insert(j);
            }
            sourcefeat::HistoryFeatures h;
            for (auto j : sharing)
                (c.articles[j].label == Label::Fake ? h.past_fake : h.past_true)++;
            return h;
        };

        Rows xtr, xte;
        std::vector<int> ytr, yte;
        FoldResult fr;
        fr.fold = f;
        for (auto i : train_idx) {
            auto row = registry_rows[i];
            detail::set_history(row, history_for(i));  // train reference = train minus self
            xtr.push_back(detail::select_columns(row, config.features));
            ytr.push_back(y[i]);
        }
        for (auto i : test_idx) {
            auto row = registry_rows[i];
            detail::set_history(row, history_for(i));  // test reference = whole train fold
            xte.push_back(detail::select_columns(row, config.features));
            yte.push_back(y[i]);
            fr.test_ids.push_back(c.articles[i].id);
        }
        if (needs_standardization(spec.kind)) {
            const auto st = Standardizer::fit(xtr);
            st.apply(xtr);
            st.apply(xte);
        }
        ModelSpec fold_spec = spec;
        fold_spec.seed = seed * 1000003ULL + static_cast<std::uint64_t>(f);
        const auto model = fit(fold_spec, xtr, ytr, config.features);
        std::vector<int> pred;
        pred.reserve(xte.size());
        for (const auto& row : xte) pred.push_back(model.predict_row(row));
        const auto f1 = f1_scores(yte, pred);
        fr.f1_micro = f1.micro;
        fr.f1_macro = f1.macro;
        fr.f1_weighted = f1.weighted;
        report.folds.push_back(std::move(fr));
    }
    detail::finish_report(report);
    return report;
}

inline EvalReport cross_validate(const ModelSpec& spec, const Corpus& c,
                                 const FeatureConfig& config, const resources::ResourceSet& res,
                                 int k = 10, std::uint64_t seed = 42) {
    return cross_validate_with_rows(spec, c, config, k, seed, precompute_registry_rows(c, res));
}

inline json report_to_json(const EvalReport& r) {
    json folds = json::array();
    for (const auto& f : r.folds) {
        folds.push_back({{"fold", f.fold},
                         {"test_ids", f.test_ids},
                         {"f1_micro", f.f1_micro},
                         {"f1_macro", f.f1_macro},
                         {"f1_weighted", f.f1_weighted}});
    }
    return json{{"classifier", r.classifier},
                {"feature_config", r.feature_config},
                {"seed", r.seed},
                {"k", r.k},
                {"folds", folds},
                {"means",
                 {{"f1_micro", r.mean_f1_micro},
                  {"f1_macro", r.mean_f1_macro},
                  {"f1_weighted", r.mean_f1_weighted}}}};
}

}  // namespace credlens::ml

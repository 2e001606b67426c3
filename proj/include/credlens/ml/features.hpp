#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "credlens/corpus.hpp"
#include "credlens/error.hpp"
#include "credlens/resources.hpp"
#include "credlens/sentiment.hpp"
#include "credlens/sourcefeat.hpp"
#include "credlens/textfeat.hpp"

namespace credlens::ml {

using corpus::Corpus;
using corpus::Label;
using corpus::NewsArticle;

// Canonical feature registry: 27 named features. The conventional grouping
// the named configs follow counts them as 26, so subsets are expressed by
// explicit name lists rather than arithmetic.
inline const std::vector<std::string>& feature_registry() {
    static const std::vector<std::string> names = {
        "n_authors",
        "p_pos", "p_neu", "p_neg",
        "seq_pos_pos", "seq_pos_neg", "seq_pos_neu",
        "seq_neg_pos", "seq_neg_neg", "seq_neg_neu",
        "seq_neu_pos", "seq_neu_neg", "seq_neu_neu",
        "n_ncsl_fake_only", "n_ncsl_true_only",
        "flesch_score",
        "n_title_words",
        "n_chars", "n_special", "n_words", "n_sentences", "n_digits",
        "typo_rate",
        "words_per_sentence", "chars_per_word",
        "past_fake", "past_true",
    };
    return names;
}

inline int feature_index(const std::string& name) {
    const auto& reg = feature_registry();
    const auto it = std::find(reg.begin(), reg.end(), name);
    return it == reg.end() ? -1 : static_cast<int>(it - reg.begin());
}

inline const std::vector<std::string> kSourceFeatures = {"n_authors", "past_fake", "past_true"};
inline const std::vector<std::string> kHistoryFeatures = {"past_fake", "past_true"};

struct FeatureConfig {
    std::string name;
    std::vector<std::string> features;

    static FeatureConfig all26() { return {"all26", feature_registry()}; }

    static FeatureConfig source3() { return {"source3", kSourceFeatures}; }

    static FeatureConfig content23() {
        FeatureConfig c{"content23", {}};
        for (const auto& f : feature_registry())
            if (std::find(kSourceFeatures.begin(), kSourceFeatures.end(), f) ==
                kSourceFeatures.end())
                c.features.push_back(f);
        return c;
    }

    static FeatureConfig selected13() {
        return {"selected13",
                {"n_authors", "past_fake", "past_true", "n_ncsl_fake_only", "n_ncsl_true_only",
                 "flesch_score", "n_words", "n_title_words", "n_chars", "n_special", "typo_rate",
                 "words_per_sentence", "chars_per_word"}};
    }

    static FeatureConfig custom(std::vector<std::string> names) {
        for (const auto& n : names) {
            if (feature_index(n) < 0)
                throw ConfigError("unknown feature name '" + n + "' (not in the registry)");
        }
        return {"custom", std::move(names)};
    }

    static FeatureConfig by_name(const std::string& name) {
        if (name == "all26") return all26();
        if (name == "source3") return source3();
        if (name == "content23") return content23();
        if (name == "selected13") return selected13();
        throw ConfigError("unknown feature config '" + name +
                          "' (expected all26|source3|content23|selected13)");
    }

    bool uses_history() const {
        for (const auto& h : kHistoryFeatures)
            if (std::find(features.begin(), features.end(), h) != features.end()) return true;
        return false;
    }
};

struct FeatureVector {
    std::string id;
    std::vector<std::string> names;
    std::vector<double> values;
};

struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<std::string> ids;
    std::vector<Label> labels;
    std::vector<std::vector<double>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return feature_names.size(); }
};

namespace detail {

// Registry-ordered values for everything that does not depend on a history
// reference set; past_* slots are left at zero for later fill.
inline std::vector<double> invariant_row(const NewsArticle& a,
                                         const resources::ResourceSet& res) {
    std::vector<double> row(feature_registry().size(), 0.0);
    row[0] = static_cast<double>(sourcefeat::author_count(a));

    const auto labels = sentiment::label_sentences(a.body, res.lexicon, res.abbreviations);
    const auto prof = sentiment::profile_from_labels(labels);
    row[1] = prof.p_pos;
    row[2] = prof.p_neu;
    row[3] = prof.p_neg;
    const auto seq = sentiment::sequence_profile_from_labels(labels);
    for (std::size_t k = 0; k < 9; ++k) row[4 + k] = seq.fractions[k];

    const auto ncsl = textfeat::ncsl_counts(a.body, res.ncsl);
    row[13] = static_cast<double>(ncsl.n_fake_only);
    row[14] = static_cast<double>(ncsl.n_true_only);

    row[15] = textfeat::flesch_reading_ease(a.body, res.abbreviations).score;

    const auto sc = textfeat::surface_counts(a, res.abbreviations);
    row[16] = static_cast<double>(sc.n_title_words);
    row[17] = static_cast<double>(sc.n_chars);
    row[18] = static_cast<double>(sc.n_special);
    row[19] = static_cast<double>(sc.n_words);
    row[20] = static_cast<double>(sc.n_sentences);
    row[21] = static_cast<double>(sc.n_digits);
    row[22] = textfeat::typo_rate(a.body, res.dictionary);
    row[23] = sc.words_per_sentence;
    row[24] = sc.chars_per_word;
    return row;
}

inline void set_history(std::vector<double>& row, const sourcefeat::HistoryFeatures& h) {
    row[25] = static_cast<double>(h.past_fake);
    row[26] = static_cast<double>(h.past_true);
}

inline std::vector<double> select_columns(const std::vector<double>& registry_row,
                                          const std::vector<std::string>& names) {
    std::vector<double> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(registry_row[feature_index(n)]);
    return out;
}

}  // namespace detail

// Single-article feature assembly against an explicit reference set. The
// reference must not contain the article itself.
inline FeatureVector assemble_features(const NewsArticle& article, const FeatureConfig& config,
                                       const std::vector<const NewsArticle*>& reference,
                                       const resources::ResourceSet& res) {
    for (const auto* r : reference) {
        if (r->id == article.id)
            throw LeakageError("assemble_features: article '" + article.id +
                               "' present in its own reference set");
    }
    std::vector<double> row = detail::invariant_row(article, res);
    detail::set_history(row, sourcefeat::history_features(article, reference));
    FeatureVector fv;
    fv.id = article.id;
    fv.names = config.features;
    fv.values = detail::select_columns(row, config.features);
    for (std::size_t i = 0; i < fv.values.size(); ++i) {
        if (!std::isfinite(fv.values[i]))
            throw DataError("non-finite value for feature '" + fv.names[i] + "' in article '" +
                            article.id + "'");
    }
    return fv;
}

// Full-corpus feature matrix with leave-one-out history: each article's
// reference set is every other article. Fold-aware evaluation recomputes
// history per fold instead (see evaluate.hpp).
inline FeatureMatrix featurize_corpus(const Corpus& c, const FeatureConfig& config,
                                      const resources::ResourceSet& res) {
    FeatureMatrix m;
    m.feature_names = config.features;
    std::unordered_map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < c.articles.size(); ++i)
        for (const auto& name : c.articles[i].authors)
            by_author[corpus::author_identity(name)].push_back(i);

    for (std::size_t i = 0; i < c.articles.size(); ++i) {
        const auto& a = c.articles[i];
        std::vector<double> row = detail::invariant_row(a, res);
        std::unordered_set<std::size_t> sharing;
        for (const auto& name : a.authors) {
            const auto it = by_author.find(corpus::author_identity(name));
            if (it == by_author.end()) continue;
            for (auto j : it->second)
                if (j != i) sharing.insert(j);
        }
        sourcefeat::HistoryFeatures h;
        for (auto j : sharing)
            (c.articles[j].label == Label::Fake ? h.past_fake : h.past_true)++;
        detail::set_history(row, h);
        m.ids.push_back(a.id);
        m.labels.push_back(a.label);
        m.rows.push_back(detail::select_columns(row, config.features));
    }
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        for (std::size_t j = 0; j < m.rows[r].size(); ++j) {
            if (!std::isfinite(m.rows[r][j]))
                throw DataError("non-finite value for feature '" + m.feature_names[j] +
                                "' in article '" + m.ids[r] + "'");
        }
    }
    return m;
}

}  // namespace credlens::ml

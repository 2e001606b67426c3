#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "credlens/corpus.hpp"
#include "credlens/ml/features.hpp"
#include "credlens/report.hpp"
#include "credlens/resources.hpp"
#include "credlens/sourcefeat.hpp"
#include "credlens/stats.hpp"

namespace credlens::analysis {

using json = nlohmann::ordered_json;
using corpus::Corpus;
using corpus::Label;

struct AnalysisOutputs {
    json document;
    std::string nodes_csv;
    std::string edges_csv;
    std::string neighbor_csv;
};

namespace detail {

// Article counts by news type, author multiplicity and author-type
// composition, restricted to articles whose authors are all eligible.
inline json article_breakdown(const Corpus& c, const sourcefeat::AuthorIndex& index,
                              std::size_t min_articles) {
    using sourcefeat::AuthorType;
    long counts[2][2][2] = {};  // [fake][multi][mixed_composition]
    long n_considered = 0;
    for (const auto& a : c.articles) {
        if (a.authors.empty()) continue;
        bool all_eligible = true;
        bool any_mixed = false;
        bool any_fake_only = false, any_true_only = false;
        for (const auto& name : a.authors) {
            const auto& rec = index.authors.at(corpus::author_identity(name));
            const AuthorType t = rec.type(min_articles);
            if (t == AuthorType::Insufficient) {
                all_eligible = false;
                break;
            }
            if (t == AuthorType::Mixed) any_mixed = true;
            if (t == AuthorType::FakeOnly) any_fake_only = true;
            if (t == AuthorType::TrueOnly) any_true_only = true;
        }
        if (!all_eligible) continue;
        ++n_considered;
        const int fake = a.label == Label::Fake ? 1 : 0;
        const int multi = a.authors.size() > 1 ? 1 : 0;
        const int mixed = (any_mixed || (any_fake_only && any_true_only)) ? 1 : 0;
        ++counts[fake][multi][mixed];
    }
    json rows = json::array();
    auto row = [&](const char* type, const char* multiplicity, const char* group, long v) {
        rows.push_back({{"news_type", type},
                        {"authors", multiplicity},
                        {"author_group", group},
                        {"n_articles", v}});
    };
    row("true", "one", "true_news_authors", counts[0][0][0]);
    row("true", "one", "fake_and_true_authors", counts[0][0][1]);
    row("true", "multiple", "true_news_authors", counts[0][1][0]);
    row("true", "multiple", "fake_and_true_authors", counts[0][1][1]);
    row("fake", "one", "fake_news_authors", counts[1][0][0]);
    row("fake", "one", "fake_and_true_authors", counts[1][0][1]);
    row("fake", "multiple", "fake_news_authors", counts[1][1][0]);
    row("fake", "multiple", "fake_and_true_authors", counts[1][1][1]);
    return json{{"n_articles_considered", n_considered}, {"rows", rows}};
}

// Distinct glossary words appearing in exactly one news type, regenerating
// the fake-only / true-only split from the data.
inline json ncsl_descriptive(const Corpus& c, const resources::ResourceSet& res) {
    if (res.ncsl_all.empty()) return json{{"available", false}};
    std::set<std::string> in_fake, in_true;
    std::vector<double> counts;
    std::vector<bool> is_fake;
    for (const auto& a : c.articles) {
        long n = 0;
        for (const auto& tok : textfeat::tokenize_words_folded(a.body)) {
            if (!res.ncsl_all.count(tok)) continue;
            ++n;
            (a.label == Label::Fake ? in_fake : in_true).insert(tok);
        }
        counts.push_back(static_cast<double>(n));
        is_fake.push_back(a.label == Label::Fake);
    }
    std::vector<std::string> fake_only, true_only;
    for (const auto& w : in_fake)
        if (!in_true.count(w)) fake_only.push_back(w);
    for (const auto& w : in_true)
        if (!in_fake.count(w)) true_only.push_back(w);
    json j{{"available", true}};
    bool has_fake = false, has_true = false;
    for (bool b : is_fake) (b ? has_fake : has_true) = true;
    if (has_fake && has_true)
        j["count_comparison"] =
            report::group_comparison_to_json(stats::compare_groups("ncsl_words", counts, is_fake));
    j["words_only_in_fake"] = fake_only;
    j["words_only_in_true"] = true_only;
    return j;
}

}  // namespace detail

// Builds the full analysis document plus the graph CSV exports.
inline AnalysisOutputs analyze_corpus(const Corpus& c, const resources::ResourceSet& res,
                                      std::size_t min_articles = 2) {
    AnalysisOutputs out;
    json& doc = out.document;

    doc["corpus"] = corpus::stats_to_json(corpus::corpus_stats(c));

    // author-count analysis; label encoded true=1 so positive correlation
    // means more authors on true news
    const auto index = sourcefeat::build_author_index(c);
    {
        std::vector<double> n_authors, label01;
        std::vector<bool> is_fake;
        for (const auto& a : c.articles) {
            n_authors.push_back(static_cast<double>(a.authors.size()));
            label01.push_back(a.label == Label::True ? 1.0 : 0.0);
            is_fake.push_back(a.label == Label::Fake);
        }
        json ja;
        ja["n_unique_authors"] = index.n_unique();
        ja["n_eligible_authors"] = index.n_eligible(min_articles);
        ja["min_articles"] = min_articles;
        bool has_fake = false, has_true = false;
        for (bool b : is_fake) (b ? has_fake : has_true) = true;
        if (has_fake && has_true) {
            ja["comparison"] = report::group_comparison_to_json(
                stats::compare_groups("n_authors", n_authors, is_fake));
            try {
                ja["pearson_label_vs_n_authors"] = stats::pearson_r(label01, n_authors);
            } catch (const RangeError&) {
                ja["pearson_label_vs_n_authors"] = nullptr;
            }
        }
        doc["author_analysis"] = ja;
    }

    const auto graph = sourcefeat::build_coauthor_graph(index, c, min_articles);
    {
        long type_counts[4] = {};
        for (const auto& n : graph.nodes) type_counts[static_cast<int>(n.type)]++;
        doc["coauthor_graph"] = {
            {"n_nodes", graph.nodes.size()},
            {"n_edges", graph.edges.size()},
            {"mixed_fraction", graph.mixed_fraction()},
            {"type_counts",
             {{"true_only", type_counts[0]}, {"fake_only", type_counts[1]},
              {"mixed", type_counts[2]}}}};
    }
    doc["article_breakdown"] = detail::article_breakdown(c, index, min_articles);

    const auto consistency = sourcefeat::consistency_report(c, min_articles);
    {
        json flips = json::array();
        for (const auto& fl : consistency.flips)
            flips.push_back({{"author", fl.author},
                             {"article_id", fl.article_id},
                             {"from", fl.from},
                             {"to", fl.to}});
        doc["consistency"] = {{"n_dated_articles", consistency.n_dated_articles},
                              {"n_eligible_authors", consistency.n_eligible_authors},
                              {"n_consistent", consistency.n_consistent},
                              {"n_contradicting", consistency.n_contradicting},
                              {"flips", flips}};
    }

    {
        json aff = json::object();
        for (const auto& [kw, names] : sourcefeat::affiliation_keywords(c)) aff[kw] = names;
        doc["affiliations"] = aff;
    }

    doc["ncsl"] = detail::ncsl_descriptive(c, res);

    // per-feature group comparisons over the whole registry; history features
    // use leave-one-out references here, unlike the fold-local evaluation
    doc["feature_comparisons"] = json::object();
    {
        bool has_fake = false, has_true = false;
        for (const auto& a : c.articles) (a.label == Label::Fake ? has_fake : has_true) = true;
        if (has_fake && has_true && !c.articles.empty()) {
            const auto m = ml::featurize_corpus(c, ml::FeatureConfig::all26(), res);
            std::vector<bool> is_fake;
            for (auto l : m.labels) is_fake.push_back(l == Label::Fake);
            json comparisons = json::object();  // keyed by feature name, registry order
            for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
                std::vector<double> col;
                col.reserve(m.rows.size());
                for (const auto& row : m.rows) col.push_back(row[j]);
                comparisons[m.feature_names[j]] = report::group_comparison_to_json(
                    stats::compare_groups(m.feature_names[j], col, is_fake));
            }
            doc["feature_comparisons"] = comparisons;
        }
    }
    doc["metadata"] = {
        {"history_reference", "leave_one_out"},
        {"leakage_warning",
         "history features in this analysis use the full remaining corpus as reference; "
         "classifier evaluation recomputes them fold-locally"}};

    // graph exports
    std::map<std::string, std::string> display;
    out.nodes_csv = report::csv_row({"author", "type", "n_articles"});
    for (const auto& n : graph.nodes) {
        display[n.identity] = n.display;
        out.nodes_csv += report::csv_row(
            {n.display, sourcefeat::to_string(n.type), std::to_string(n.n_articles)});
    }
    out.edges_csv = report::csv_row({"author_a", "author_b", "weight"});
    for (const auto& e : graph.edges)
        out.edges_csv +=
            report::csv_row({display[e.a], display[e.b], std::to_string(e.weight)});
    out.neighbor_csv = report::csv_row({"author", "n_true_only", "n_fake_only", "n_mixed"});
    for (const auto& [identity, counts] : sourcefeat::neighbor_type_profile(graph)) {
        out.neighbor_csv += report::csv_row({display[identity], std::to_string(counts.n_true_only),
                                             std::to_string(counts.n_fake_only),
                                             std::to_string(counts.n_mixed)});
    }
    return out;
}

}  // namespace credlens::analysis

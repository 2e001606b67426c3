#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "credlens/error.hpp"
#include "credlens/stats.hpp"

namespace credlens::report {

using json = nlohmann::ordered_json;

// Shortest round-trip decimal representation; CSV cells keep full precision.
inline std::string full_precision(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

inline std::string markdown_table(const std::vector<std::string>& header,
                                  const std::vector<std::vector<std::string>>& rows) {
    std::string out = "|";
    for (const auto& h : header) out += " " + h + " |";
    out += "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : rows) {
        out += "|";
        for (const auto& cell : row) out += " " + cell + " |";
        out += "\n";
    }
    return out;
}

inline json stat_result_to_json(const stats::StatTestResult& r) {
    json j;
    switch (r.test) {
        case stats::TestKind::Pearson: j["test"] = "pearson"; break;
        case stats::TestKind::ShapiroWilk: j["test"] = "shapiro_wilk"; break;
        case stats::TestKind::MannWhitneyU: j["test"] = "mann_whitney_u"; break;
    }
    if (std::isfinite(r.statistic)) j["statistic"] = r.statistic;
    else j["statistic"] = nullptr;
    if (r.p_value) j["p_value"] = *r.p_value;
    j["n"] = r.n;
    if (r.ties) j["ties"] = true;
    if (r.degenerate) j["degenerate"] = true;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json group_comparison_to_json(const stats::GroupComparison& gc) {
    auto describe = [](const stats::GroupDescribe& d) {
        return json{{"n", d.n}, {"mean", d.mean}, {"median", d.median}};
    };
    json j;
    j["feature"] = gc.feature;
    j["fake"] = describe(gc.fake);
    j["true"] = describe(gc.true_);
    if (gc.shapiro_fake) j["shapiro_fake"] = stat_result_to_json(*gc.shapiro_fake);
    if (gc.shapiro_true) j["shapiro_true"] = stat_result_to_json(*gc.shapiro_true);
    j["mann_whitney"] = stat_result_to_json(gc.mann_whitney);
    return j;
}

// Names of classifiers listed in reports but outside this implementation.
inline const std::vector<std::string>& unimplemented_classifiers() {
    static const std::vector<std::string> v = {"svm_rbf"};
    return v;
}

// Evaluation document -> classifier summary table(s).
inline std::string render_markdown_eval(const json& doc) {
    std::string out;
    if (!doc.contains("reports") || !doc["reports"].is_array())
        throw UsageError("evaluation document lacks a 'reports' array");
    // group rows by feature config, preserving order
    std::vector<std::string> configs;
    for (const auto& r : doc["reports"]) {
        const std::string cfg = r.value("feature_config", "?");
        if (std::find(configs.begin(), configs.end(), cfg) == configs.end())
            configs.push_back(cfg);
    }
    for (const auto& cfg : configs) {
        out += "## Average F1 scores (" + cfg + ")\n\n";
        std::vector<std::vector<std::string>> rows;
        for (const auto& name : unimplemented_classifiers())
            rows.push_back({name, "not implemented", "not implemented", "not implemented"});
        for (const auto& r : doc["reports"]) {
            if (r.value("feature_config", "") != cfg) continue;
            const auto& m = r["means"];
            rows.push_back({r.value("classifier", "?"), fixed(m.value("f1_micro", 0.0)),
                            fixed(m.value("f1_macro", 0.0)), fixed(m.value("f1_weighted", 0.0))});
        }
        out += markdown_table({"Classifier", "F1-micro", "F1-macro", "F1-weighted"}, rows);
        out += "\n";
    }
    return out;
}

inline std::string render_markdown_analysis(const json& doc) {
    std::string out;
    if (doc.contains("corpus")) {
        out += "## Data statistics\n\n";
        std::vector<std::vector<std::string>> rows;
        for (const auto& [name, split] : doc["corpus"]["per_dataset"].items()) {
            rows.push_back({name, std::to_string(split.value("total", 0L)),
                            std::to_string(split.value("fake", 0L)),
                            std::to_string(split.value("true", 0L))});
        }
        const auto& ov = doc["corpus"]["overall"];
        rows.push_back({"total", std::to_string(ov.value("total", 0L)),
                        std::to_string(ov.value("fake", 0L)),
                        std::to_string(ov.value("true", 0L))});
        out += markdown_table({"Dataset", "Stories", "Fake", "True"}, rows);
        out += "\n";
    }
    if (doc.contains("feature_comparisons")) {
        out += "## Feature comparisons (fake vs. true)\n\n";
        std::vector<std::vector<std::string>> rows;
        for (const auto& gc : doc["feature_comparisons"]) {
            const auto& mw = gc["mann_whitney"];
            rows.push_back({gc.value("feature", "?"),
                            fixed(gc["fake"].value("mean", 0.0)),
                            fixed(gc["fake"].value("median", 0.0)),
                            fixed(gc["true"].value("mean", 0.0)),
                            fixed(gc["true"].value("median", 0.0)),
                            mw.contains("p_value") ? fixed(mw["p_value"].get<double>(), 6) : "-"});
        }
        out += markdown_table(
            {"Feature", "Fake mean", "Fake median", "True mean", "True median", "MWU p"}, rows);
        out += "\n";
    }
    if (doc.contains("coauthor_graph")) {
        const auto& g = doc["coauthor_graph"];
        out += "## Coauthorship\n\n";
        out += "- eligible authors: " + std::to_string(g.value("n_nodes", 0L)) + "\n";
        out += "- edges: " + std::to_string(g.value("n_edges", 0L)) + "\n";
        out += "- mixed fraction: " + fixed(g.value("mixed_fraction", 0.0)) + "\n\n";
    }
    if (doc.contains("consistency")) {
        const auto& c = doc["consistency"];
        out += "## Chronological consistency\n\n";
        out += "- dated articles: " + std::to_string(c.value("n_dated_articles", 0L)) + "\n";
        out += "- eligible authors: " + std::to_string(c.value("n_eligible_authors", 0L)) + "\n";
        out += "- contradicting: " + std::to_string(c.value("n_contradicting", 0L)) + "\n\n";
    }
    return out;
}

}  // namespace credlens::report

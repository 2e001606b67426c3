#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "credlens/analysis.hpp"
#include "credlens/corpus.hpp"
#include "credlens/error.hpp"
#include "credlens/ml/evaluate.hpp"
#include "credlens/ml/features.hpp"
#include "credlens/ml/models.hpp"
#include "credlens/report.hpp"
#include "credlens/resources.hpp"

namespace credlens::cli {

using json = nlohmann::ordered_json;

namespace detail {

inline void require_input_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw UsageError("input file does not exist: " + path);
}

inline void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write output file: " + path);
    out << content;
}

inline corpus::InputFormat parse_format(const std::string& s) {
    if (s == "auto") return corpus::InputFormat::Auto;
    if (s == "json-dir") return corpus::InputFormat::JsonDir;
    if (s == "csv") return corpus::InputFormat::Csv;
    if (s == "corpus") return corpus::InputFormat::CorpusJson;
    throw UsageError("unknown input format '" + s + "'");
}

inline corpus::Corpus load_corpus_file(const std::string& path) {
    require_input_file(path);
    return corpus::load_corpus({path}, corpus::InputFormat::CorpusJson);
}

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& part : text::split(csv, ',')) {
        const std::string t = text::trim(part);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string format = "auto";
    std::string output;
    bool keep_duplicates = false;
};

inline int cmd_ingest(const IngestArgs& a) {
    for (const auto& p : a.inputs) require_input_file(p);
    auto c = corpus::load_corpus(a.inputs, parse_format(a.format));
    const std::size_t loaded = c.articles.size();
    std::size_t removed = 0;
    if (!a.keep_duplicates) {
        auto dedup = corpus::deduplicate(c);
        removed = dedup.removed.size();
        c = std::move(dedup.corpus);
    }
    corpus::save_corpus(c, a.output);
    std::cerr << "loaded " << loaded << " articles, removed " << removed
              << " duplicates, wrote " << c.articles.size() << " to " << a.output << "\n";
    return 0;
}

struct StatsArgs {
    std::string corpus_path;
    std::string output;
    std::string format = "json";
};

inline int cmd_stats(const StatsArgs& a) {
    const auto c = load_corpus_file(a.corpus_path);
    const auto s = corpus::corpus_stats(c);
    if (a.format == "json") {
        write_output(a.output, corpus::stats_to_json(s).dump(2) + "\n");
    } else if (a.format == "markdown") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [name, split] : s.per_dataset)
            rows.push_back({name, std::to_string(split.total), std::to_string(split.fake),
                            std::to_string(split.true_)});
        rows.push_back({"total", std::to_string(s.overall.total), std::to_string(s.overall.fake),
                        std::to_string(s.overall.true_)});
        std::string out = report::markdown_table({"Dataset", "Stories", "Fake", "True"}, rows);
        out += "\n";
        out += report::markdown_table(
            {"URL scheme", "Stories", "Fake", "True"},
            {{"http", std::to_string(s.url_http.total), std::to_string(s.url_http.fake),
              std::to_string(s.url_http.true_)},
             {"https", std::to_string(s.url_https.total), std::to_string(s.url_https.fake),
              std::to_string(s.url_https.true_)},
             {"missing", std::to_string(s.url_missing.total), std::to_string(s.url_missing.fake),
              std::to_string(s.url_missing.true_)}});
        write_output(a.output, out);
    } else {
        throw UsageError("unknown output format '" + a.format + "' (expected json|markdown)");
    }
    return 0;
}

struct AnalyzeArgs {
    std::string corpus_path;
    std::string resources_dir;
    std::string output_dir;
    std::size_t min_articles = 2;
    bool markdown = false;
};

inline int cmd_analyze(const AnalyzeArgs& a) {
    const auto c = load_corpus_file(a.corpus_path);
    const auto res = resources::ResourceSet::load(resources::resolve_resources_dir(a.resources_dir));
    std::filesystem::create_directories(a.output_dir);
    const auto out = analysis::analyze_corpus(c, res, a.min_articles);
    namespace fs = std::filesystem;
    write_output((fs::path(a.output_dir) / "analysis.json").string(),
                 out.document.dump(2) + "\n");
    write_output((fs::path(a.output_dir) / "coauthor_nodes.csv").string(), out.nodes_csv);
    write_output((fs::path(a.output_dir) / "coauthor_edges.csv").string(), out.edges_csv);
    write_output((fs::path(a.output_dir) / "neighbor_profile.csv").string(), out.neighbor_csv);
    if (a.markdown)
        write_output((fs::path(a.output_dir) / "analysis.md").string(),
                     report::render_markdown_analysis(out.document));
    std::cerr << "analysis written to " << a.output_dir << "\n";
    return 0;
}

struct FeaturizeArgs {
    std::string corpus_path;
    std::string resources_dir;
    std::string features = "all26";
    std::string feature_list;
    std::string output;
};

inline ml::FeatureConfig make_config(const std::string& name, const std::string& custom_list) {
    if (!custom_list.empty()) return ml::FeatureConfig::custom(split_list(custom_list));
    return ml::FeatureConfig::by_name(name);
}

inline int cmd_featurize(const FeaturizeArgs& a) {
    const auto c = load_corpus_file(a.corpus_path);
    const auto res = resources::ResourceSet::load(resources::resolve_resources_dir(a.resources_dir));
    const auto config = make_config(a.features, a.feature_list);
    const auto m = ml::featurize_corpus(c, config, res);

    std::vector<std::string> header = {"id", "label"};
    header.insert(header.end(), m.feature_names.begin(), m.feature_names.end());
    std::string csv = report::csv_row(header);
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        std::vector<std::string> row = {m.ids[i], corpus::to_string(m.labels[i])};
        for (double v : m.rows[i]) row.push_back(report::full_precision(v));
        csv += report::csv_row(row);
    }
    write_output(a.output, csv);
    if (!a.output.empty() && a.output != "-") {
        json meta;
        meta["feature_config"] = config.name;
        meta["features"] = m.feature_names;
        meta["history_reference"] = "leave_one_out";
        meta["leakage_warning"] =
            "past_fake/past_true columns were computed against the full remaining corpus; "
            "do not evaluate classifiers on this matrix with labels it already saw — "
            "use `credlens evaluate`, which rebuilds history features fold-locally";
        write_output(a.output + ".meta.json", meta.dump(2) + "\n");
    }
    std::cerr << "featurized " << m.rows.size() << " articles ("
              << m.feature_names.size() << " features); history is leave-one-out\n";
    return 0;
}

struct EvaluateArgs {
    std::string corpus_path;
    std::string resources_dir;
    std::string models = "all";
    std::string features = "all26";
    int k = 10;
    std::uint64_t seed = 42;
    std::string output;
};

inline int cmd_evaluate(const EvaluateArgs& a) {
    const auto c = load_corpus_file(a.corpus_path);
    const auto res = resources::ResourceSet::load(resources::resolve_resources_dir(a.resources_dir));

    std::vector<ml::ModelKind> kinds;
    std::vector<std::string> not_implemented;
    if (a.models == "all") {
        kinds = ml::model_roster();
        not_implemented = report::unimplemented_classifiers();
    } else {
        for (const auto& name : split_list(a.models)) {
            if (name == "svm_rbf" || name == "rbf_svm") {
                not_implemented.push_back("svm_rbf");
                continue;
            }
            kinds.push_back(ml::parse_model_kind(name));
        }
    }
    std::vector<ml::FeatureConfig> configs;
    for (const auto& name : split_list(a.features)) configs.push_back(ml::FeatureConfig::by_name(name));
    if (configs.empty()) throw UsageError("no feature configs requested");

    json doc;
    doc["k"] = a.k;
    doc["seed"] = a.seed;
    doc["reports"] = json::array();
    const auto registry_rows = ml::precompute_registry_rows(c, res);
    for (const auto& config : configs) {
        for (const auto kind : kinds) {
            ml::ModelSpec spec;
            spec.kind = kind;
            spec.seed = a.seed;
            const auto report =
                ml::cross_validate_with_rows(spec, c, config, a.k, a.seed, registry_rows);
            doc["reports"].push_back(ml::report_to_json(report));
        }
    }
    doc["not_implemented"] = not_implemented;
    write_output(a.output, doc.dump(2) + "\n");
    std::cerr << "evaluated " << kinds.size() << " classifiers x " << configs.size()
              << " feature configs (k=" << a.k << ", seed=" << a.seed << ")\n";
    return 0;
}

struct ReportArgs {
    std::string input;
    std::string format = "markdown";
    std::string output;
};

inline int cmd_report(const ReportArgs& a) {
    require_input_file(a.input);
    json doc;
    try {
        std::ifstream in(a.input);
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseError("cannot parse report input " + a.input + ": " + e.what());
    }
    std::string rendered;
    if (a.format == "markdown") {
        rendered = doc.contains("reports") ? report::render_markdown_eval(doc)
                                           : report::render_markdown_analysis(doc);
    } else if (a.format == "csv") {
        if (!doc.contains("reports"))
            throw UsageError("csv rendering is only defined for evaluation documents");
        rendered = report::csv_row({"classifier", "feature_config", "f1_micro", "f1_macro",
                                    "f1_weighted"});
        for (const auto& r : doc["reports"]) {
            const auto& m = r["means"];
            rendered += report::csv_row({r.value("classifier", "?"),
                                         r.value("feature_config", "?"),
                                         report::full_precision(m.value("f1_micro", 0.0)),
                                         report::full_precision(m.value("f1_macro", 0.0)),
                                         report::full_precision(m.value("f1_weighted", 0.0))});
        }
    } else if (a.format == "json") {
        rendered = doc.dump(2) + "\n";
    } else {
        throw UsageError("unknown report format '" + a.format + "' (expected markdown|csv|json)");
    }
    write_output(a.output, rendered);
    return 0;
}

}  // namespace detail

// Entry point shared by the binary and the tests. argv conventions follow
// main(): argv[0] is the program name.
inline int run(const std::vector<std::string>& argv) {
    CLI::App app{"credibility-based fake news analysis", "credlens"};
    app.require_subcommand(1);

    detail::IngestArgs ingest;
    auto* cmd_ingest = app.add_subcommand("ingest", "load, deduplicate and persist a corpus");
    cmd_ingest->add_option("--input", ingest.inputs, "dataset directories or files")->required();
    cmd_ingest->add_option("--format", ingest.format, "auto|json-dir|csv|corpus");
    cmd_ingest->add_option("--output", ingest.output, "persisted corpus path")->required();
    cmd_ingest->add_flag("--keep-duplicates", ingest.keep_duplicates, "skip body-text dedup");

    detail::StatsArgs stats;
    auto* cmd_stats = app.add_subcommand("stats", "dataset descriptive statistics");
    cmd_stats->add_option("--corpus", stats.corpus_path, "persisted corpus JSON")->required();
    cmd_stats->add_option("--output", stats.output, "output path (default stdout)");
    cmd_stats->add_option("--format", stats.format, "json|markdown");

    detail::AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "statistical analysis and graph exports");
    cmd_analyze->add_option("--corpus", analyze.corpus_path, "persisted corpus JSON")->required();
    cmd_analyze->add_option("--resources", analyze.resources_dir,
                            "resources directory (or CREDLENS_RESOURCES)");
    cmd_analyze->add_option("--output-dir", analyze.output_dir, "output directory")->required();
    cmd_analyze->add_option("--min-articles", analyze.min_articles,
                            "eligibility threshold for author analyses");
    cmd_analyze->add_flag("--markdown", analyze.markdown, "also render analysis.md");

    detail::FeaturizeArgs featurize;
    auto* cmd_featurize = app.add_subcommand("featurize", "write the feature matrix CSV");
    cmd_featurize->add_option("--corpus", featurize.corpus_path, "persisted corpus JSON")->required();
    cmd_featurize->add_option("--resources", featurize.resources_dir, "resources directory");
    cmd_featurize->add_option("--features", featurize.features,
                              "all26|source3|content23|selected13");
    cmd_featurize->add_option("--feature-list", featurize.feature_list,
                              "comma-separated custom feature names");
    cmd_featurize->add_option("--output", featurize.output, "CSV path (default stdout)");

    detail::EvaluateArgs evaluate;
    auto* cmd_evaluate = app.add_subcommand("evaluate", "cross-validated classifier evaluation");
    cmd_evaluate->add_option("--corpus", evaluate.corpus_path, "persisted corpus JSON")->required();
    cmd_evaluate->add_option("--resources", evaluate.resources_dir, "resources directory");
    cmd_evaluate->add_option("--models", evaluate.models,
                             "all or comma-separated classifier names");
    cmd_evaluate->add_option("--features", evaluate.features,
                             "comma-separated feature config names");
    cmd_evaluate->add_option("--k", evaluate.k, "number of folds");
    cmd_evaluate->add_option("--seed", evaluate.seed, "RNG seed; all randomness flows from it");
    cmd_evaluate->add_option("--output", evaluate.output, "EvalReport JSON path (default stdout)");

    detail::ReportArgs report;
    auto* cmd_report = app.add_subcommand("report", "render result JSON to markdown/csv");
    cmd_report->add_option("--input", report.input, "evaluation or analysis JSON")->required();
    cmd_report->add_option("--format", report.format, "markdown|csv|json");
    cmd_report->add_option("--output", report.output, "output path (default stdout)");

    // CLI11 parses from a reversed vector without the program name
    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cmd_ingest)) return detail::cmd_ingest(ingest);
        if (app.got_subcommand(cmd_stats)) return detail::cmd_stats(stats);
        if (app.got_subcommand(cmd_analyze)) return detail::cmd_analyze(analyze);
        if (app.got_subcommand(cmd_featurize)) return detail::cmd_featurize(featurize);
        if (app.got_subcommand(cmd_evaluate)) return detail::cmd_evaluate(evaluate);
        if (app.got_subcommand(cmd_report)) return detail::cmd_report(report);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace credlens::cli

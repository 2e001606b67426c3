#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "credlens/cli.hpp"
#include "credlens/corpus.hpp"
#include "helpers.hpp"

using namespace credlens;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "credlens");
    return cli::run(args);
}

// FakeNewsNet-style input tree big enough for k=10 evaluation
fs::path write_dataset_tree() {
    static fs::path dir;
    if (!dir.empty()) return dir;
    dir = testutil::scratch_dir("cli_data");
    const auto c = testutil::synthetic_corpus(15);
    for (const auto& a : c.articles) {
        nlohmann::ordered_json j;
        j["title"] = a.title;
        j["text"] = a.body;
        j["authors"] = a.authors;
        if (a.url) j["url"] = *a.url;
        if (a.publish_date) j["publish_date"] = a.publish_date->to_iso();
        const char* label_dir = a.label == corpus::Label::Fake ? "fake" : "real";
        testutil::write_file(dir / "politifact" / label_dir / (a.id + ".json"), j.dump(1));
    }
    return dir;
}

}  // namespace

TEST_CASE("cli ingest -> stats -> featurize -> evaluate -> report round trip") {
    const auto data = write_dataset_tree();
    const auto out = testutil::scratch_dir("cli_out");
    const auto corpus_path = (out / "corpus.json").string();

    CHECK(run_cli({"ingest", "--input", (data / "politifact").string(), "--output",
                   corpus_path}) == 0);
    REQUIRE(fs::exists(corpus_path));
    const auto c = corpus::load_corpus({corpus_path}, corpus::InputFormat::CorpusJson);
    CHECK(c.articles.size() == 30);

    const auto stats_path = (out / "stats.json").string();
    CHECK(run_cli({"stats", "--corpus", corpus_path, "--output", stats_path}) == 0);
    const auto stats_doc = nlohmann::json::parse(testutil::read_file(stats_path));
    CHECK(stats_doc["overall"]["total"] == 30);
    CHECK(stats_doc["overall"]["fake"] == 15);

    const auto stats_md = (out / "stats.md").string();
    CHECK(run_cli({"stats", "--corpus", corpus_path, "--format", "markdown", "--output",
                   stats_md}) == 0);
    CHECK(testutil::read_file(stats_md).find("| URL scheme |") != std::string::npos);

    const auto features_path = (out / "features.csv").string();
    CHECK(run_cli({"featurize", "--corpus", corpus_path, "--resources",
                   testutil::resources_dir(), "--output", features_path}) == 0);
    const auto csv = testutil::read_file(features_path);
    CHECK(csv.rfind("id,label,n_authors,", 0) == 0);

    // CSV cells round-trip to the exact doubles the library computed
    {
        const auto m = ml::featurize_corpus(c, ml::FeatureConfig::all26(),
                                            testutil::shared_resources());
        std::istringstream lines(csv);
        std::string header, first_row;
        std::getline(lines, header);
        std::getline(lines, first_row);
        const auto cells = text::split(first_row, ',');
        REQUIRE(cells.size() == 2 + m.feature_names.size());
        CHECK(cells[0] == m.ids[0]);
        for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
            const double parsed = std::strtod(cells[2 + j].c_str(), nullptr);
            CHECK(parsed == m.rows[0][j]);  // bit-exact via shortest round-trip repr
        }
    }
    CHECK(fs::exists(features_path + ".meta.json"));
    const auto meta = nlohmann::json::parse(testutil::read_file(features_path + ".meta.json"));
    CHECK(meta["history_reference"] == "leave_one_out");
    CHECK(meta.contains("leakage_warning"));

    const auto eval_path = (out / "eval.json").string();
    CHECK(run_cli({"evaluate", "--corpus", corpus_path, "--resources", testutil::resources_dir(),
                   "--models", "gaussian_nb", "--features", "source3", "--k", "10", "--seed",
                   "42", "--output", eval_path}) == 0);
    const auto eval_doc = nlohmann::json::parse(testutil::read_file(eval_path));
    REQUIRE(eval_doc["reports"].size() == 1);
    CHECK(eval_doc["reports"][0]["classifier"] == "gaussian_nb");
    CHECK(eval_doc["reports"][0]["folds"].size() == 10);

    const auto md_path = (out / "eval.md").string();
    CHECK(run_cli({"report", "--input", eval_path, "--format", "markdown", "--output",
                   md_path}) == 0);
    const auto md = testutil::read_file(md_path);
    CHECK(md.find("| Classifier |") != std::string::npos);
    CHECK(md.find("gaussian_nb") != std::string::npos);
    CHECK(md.find("svm_rbf") != std::string::npos);  // reproduced as not implemented
    CHECK(md.find("not implemented") != std::string::npos);
}

TEST_CASE("cli analyze writes analysis document and graph exports") {
    const auto data = write_dataset_tree();
    const auto out = testutil::scratch_dir("cli_analyze");
    const auto corpus_path = (out / "corpus.json").string();
    REQUIRE(run_cli({"ingest", "--input", (data / "politifact").string(), "--output",
                     corpus_path}) == 0);

    const auto analysis_dir = (out / "analysis").string();
    CHECK(run_cli({"analyze", "--corpus", corpus_path, "--resources", testutil::resources_dir(),
                   "--output-dir", analysis_dir, "--markdown"}) == 0);
    REQUIRE(fs::exists(fs::path(analysis_dir) / "analysis.json"));
    const auto doc =
        nlohmann::json::parse(testutil::read_file(fs::path(analysis_dir) / "analysis.json"));
    CHECK(doc.contains("author_analysis"));
    CHECK(doc.contains("feature_comparisons"));
    CHECK(doc.contains("consistency"));
    CHECK(doc["feature_comparisons"].size() == 27);
    CHECK(fs::exists(fs::path(analysis_dir) / "coauthor_nodes.csv"));
    CHECK(fs::exists(fs::path(analysis_dir) / "coauthor_edges.csv"));
    CHECK(fs::exists(fs::path(analysis_dir) / "neighbor_profile.csv"));
    CHECK(fs::exists(fs::path(analysis_dir) / "analysis.md"));

    // the report command renders analysis documents too
    const auto md_path = (out / "analysis_rendered.md").string();
    CHECK(run_cli({"report", "--input", (fs::path(analysis_dir) / "analysis.json").string(),
                   "--format", "markdown", "--output", md_path}) == 0);
    const auto md = testutil::read_file(md_path);
    CHECK(md.find("## Feature comparisons") != std::string::npos);
    CHECK(md.find("flesch_score") != std::string::npos);

    // input corpus untouched
    const auto before = testutil::read_file(corpus_path);
    CHECK(run_cli({"analyze", "--corpus", corpus_path, "--resources", testutil::resources_dir(),
                   "--output-dir", analysis_dir}) == 0);
    CHECK(testutil::read_file(corpus_path) == before);
}

TEST_CASE("cli equal flags produce byte-identical outputs") {
    const auto data = write_dataset_tree();
    const auto out = testutil::scratch_dir("cli_determinism");
    const auto corpus_path = (out / "corpus.json").string();
    REQUIRE(run_cli({"ingest", "--input", (data / "politifact").string(), "--output",
                     corpus_path}) == 0);
    const auto e1 = (out / "e1.json").string(), e2 = (out / "e2.json").string();
    for (const auto& p : {e1, e2}) {
        REQUIRE(run_cli({"evaluate", "--corpus", corpus_path, "--resources",
                         testutil::resources_dir(), "--models", "logreg,adaboost_stumps",
                         "--features", "source3,selected13", "--k", "10", "--seed", "9",
                         "--output", p}) == 0);
    }
    CHECK(testutil::read_file(e1) == testutil::read_file(e2));
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli({"stats", "--corpus", "/does/not/exist.json"}) == 2);
    CHECK(run_cli({"stats"}) == 2);                       // missing required option
    CHECK(run_cli({"--unknown-flag"}) == 2);              // unknown flag
    CHECK(run_cli({}) == 2);                              // no subcommand
    CHECK(run_cli({"report", "--input", "x", "--format", "yaml"}) == 2);

    const auto out = testutil::scratch_dir("cli_exit");
    const auto corpus_path = (out / "c.json").string();
    corpus::save_corpus(testutil::synthetic_corpus(12), corpus_path);
    // valid corpus but unknown feature config name -> usage/config error
    CHECK(run_cli({"evaluate", "--corpus", corpus_path, "--resources",
                   testutil::resources_dir(), "--features", "bogus"}) == 2);
    // runtime failure: k larger than the class counts
    CHECK(run_cli({"evaluate", "--corpus", corpus_path, "--resources",
                   testutil::resources_dir(), "--models", "gaussian_nb", "--features",
                   "source3", "--k", "25"}) == 1);
}

TEST_CASE("analysis of an empty corpus renders a header-only comparison table") {
    const auto& res = testutil::shared_resources();
    corpus::Corpus empty;
    const auto out = analysis::analyze_corpus(empty, res);
    CHECK(out.document["feature_comparisons"].is_object());
    CHECK(out.document["feature_comparisons"].empty());
    const auto md = report::render_markdown_analysis(out.document);
    CHECK(md.find("## Feature comparisons") != std::string::npos);
    CHECK(md.find("| Feature |") != std::string::npos);
    CHECK(out.nodes_csv == "author,type,n_articles\n");
}

TEST_CASE("resources directory resolves flag, env var, then default") {
    CHECK(resources::resolve_resources_dir("/explicit") == "/explicit");
    setenv("CREDLENS_RESOURCES", "/from_env", 1);
    CHECK(resources::resolve_resources_dir("") == "/from_env");
    CHECK(resources::resolve_resources_dir("/explicit") == "/explicit");
    unsetenv("CREDLENS_RESOURCES");
    CHECK(resources::resolve_resources_dir("") == "resources");
}

#ifdef CREDLENS_CLI_PATH
TEST_CASE("cli binary is byte-deterministic across processes") {
    const auto data = write_dataset_tree();
    const auto out = testutil::scratch_dir("cli_process");
    const auto corpus_path = (out / "corpus.json").string();
    REQUIRE(run_cli({"ingest", "--input", (data / "politifact").string(), "--output",
                     corpus_path}) == 0);
    const auto e1 = (out / "p1.json").string(), e2 = (out / "p2.json").string();
    for (const auto& p : {e1, e2}) {
        const std::string cmd = std::string(CREDLENS_CLI_PATH) + " evaluate --corpus " +
                                corpus_path + " --resources " + testutil::resources_dir() +
                                " --models gaussian_nb --features source3 --k 10 --seed 3" +
                                " --output " + p + " 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
    }
    CHECK(testutil::read_file(e1) == testutil::read_file(e2));
}
#endif

TEST_CASE("cli csv ingest handles a UTF-8 BOM and keep-duplicates") {
    const auto out = testutil::scratch_dir("cli_csv");
    const std::string csv =
        "\xEF\xBB\xBF"
        "id,dataset,label,title,text,authors,url,publish_date\n"
        "a,politifact,fake,T,Same body,,,\n"
        "b,politifact,fake,T,Same body,,,\n"
        "c,politifact,true,T,Other body,,,\n";
    testutil::write_file(out / "in.csv", csv);
    const auto c1 = (out / "deduped.json").string();
    REQUIRE(run_cli({"ingest", "--input", (out / "in.csv").string(), "--format", "csv",
                     "--output", c1}) == 0);
    CHECK(corpus::load_corpus({c1}, corpus::InputFormat::CorpusJson).articles.size() == 2);

    const auto c2 = (out / "kept.json").string();
    REQUIRE(run_cli({"ingest", "--input", (out / "in.csv").string(), "--format", "csv",
                     "--keep-duplicates", "--output", c2}) == 0);
    CHECK(corpus::load_corpus({c2}, corpus::InputFormat::CorpusJson).articles.size() == 3);
}

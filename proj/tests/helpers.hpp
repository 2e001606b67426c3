#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "credlens/corpus.hpp"
#include "credlens/resources.hpp"

namespace testutil {

inline std::string repo_root() { return CREDLENS_SOURCE_DIR; }

inline std::string resources_dir() {
    return (std::filesystem::path(repo_root()) / "resources").string();
}

inline const credlens::resources::ResourceSet& shared_resources() {
    static const auto res = credlens::resources::ResourceSet::load(resources_dir());
    return res;
}

// Scratch directory under the build tree, wiped per-name on creation.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("credlens_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline credlens::corpus::NewsArticle make_article(
    std::string id, credlens::corpus::Label label, std::string body,
    std::vector<std::string> authors = {}, std::string date = "",
    std::string url = "", std::string title = "") {
    credlens::corpus::NewsArticle a;
    a.id = std::move(id);
    a.label = label;
    a.body = std::move(body);
    a.title = std::move(title);
    a.authors = credlens::corpus::normalize_authors(authors);
    if (!url.empty()) a.url = url;
    if (!date.empty()) a.publish_date = credlens::corpus::parse_date(date, a.id);
    return a;
}

// Small deterministic corpus with authors, dates and mixed labels; large
// enough for 10-fold CV at the default settings.
inline credlens::corpus::Corpus synthetic_corpus(std::size_t n_per_class = 30) {
    using credlens::corpus::Label;
    credlens::corpus::Corpus c;
    const std::vector<std::string> fake_bodies = {
        "Shocking! You won't believe this terrible scandal. It is a disaster.",
        "The awful truth they hide. Horrible lies everywhere! Fear spreads fast.",
        "Bad news today. A crisis looms and panic grows. Nothing is safe now.",
    };
    const std::vector<std::string> true_bodies = {
        "The committee convened on Tuesday. Lawmakers discussed the fiscal plan in detail.",
        "Officials presented the annual budget. The report cites 120 pages of data.",
        "The governor signed the bill. A bipartisan caucus supported the veto override.",
    };
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const std::string suffix = " Sequence marker " + std::to_string(i) + ".";
        auto fake = make_article(
            "fake" + std::to_string(100 + i), Label::Fake,
            fake_bodies[i % fake_bodies.size()] + suffix,
            i % 3 == 0 ? std::vector<std::string>{}
                       : std::vector<std::string>{"Writer " + std::to_string(i % 5)},
            i % 4 == 0 ? "" : "2016-0" + std::to_string(1 + i % 9) + "-1" + std::to_string(i % 9),
            i % 2 == 0 ? "https://fake.example/" + std::to_string(i) : "");
        fake.title = "Unbelievable story " + std::to_string(i);
        auto real = make_article(
            "true" + std::to_string(100 + i), Label::True,
            true_bodies[i % true_bodies.size()] + suffix,
            {"Reporter " + std::to_string(i % 7), "Editor " + std::to_string(i % 3)},
            i % 5 == 0 ? "" : "2016-0" + std::to_string(1 + i % 9) + "-2" + std::to_string(i % 9),
            i % 2 == 0 ? "http://news.example/" + std::to_string(i) : "");
        real.title = "Committee report " + std::to_string(i);
        c.articles.push_back(std::move(fake));
        c.articles.push_back(std::move(real));
    }
    return c;
}

}  // namespace testutil

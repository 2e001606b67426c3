#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "credlens/corpus.hpp"
#include "helpers.hpp"

using namespace credlens;
using corpus::Label;

namespace {

std::filesystem::path write_fakenewsnet_fixture() {
    const auto dir = testutil::scratch_dir("fnn");
    testutil::write_file(dir / "politifact" / "fake" / "pf_f1.json",
                         R"({"title":"T1","text":"Fake body one.","authors":["  Jane  Doe ", "Jane Doe", "Bob Ray"],"url":"http://a.example/x","publish_date":"2016-10-01"})");
    testutil::write_file(dir / "politifact" / "fake" / "pf_f2.json",
                         R"({"title":"T2","text":"Fake body two.","url":"HTTPS://b.example/y"})");
    testutil::write_file(dir / "politifact" / "real" / "pf_t1.json",
                         R"({"title":"T3","text":"True body one.","authors":["Ann Lee"],"publish_date":"2016-10-02T08:30:00"})");
    testutil::write_file(dir / "buzzfeed" / "fake" / "bf_f1.json",
                         R"({"title":"T4","text":"Fake body three.","authors":[],"url":""})");
    testutil::write_file(dir / "buzzfeed" / "real" / "bf_t1.json",
                         R"({"title":"T5","text":"True body two."})");
    return dir;
}

}  // namespace

TEST_CASE("load_corpus reads FakeNewsNet-style directories") {
    const auto dir = write_fakenewsnet_fixture();
    const auto c = corpus::load_corpus(
        {(dir / "politifact").string(), (dir / "buzzfeed").string()});
    REQUIRE(c.articles.size() == 5);

    const auto find = [&](const std::string& id) {
        const auto it = std::find_if(c.articles.begin(), c.articles.end(),
                                     [&](const auto& a) { return a.id == id; });
        REQUIRE(it != c.articles.end());
        return *it;
    };
    const auto f1 = find("pf_f1");
    CHECK(f1.dataset == corpus::Dataset::Politifact);
    CHECK(f1.label == Label::Fake);
    REQUIRE(f1.authors.size() == 2);  // whitespace-normalized duplicate collapsed
    CHECK(f1.authors[0] == "Jane Doe");
    CHECK(f1.authors[1] == "Bob Ray");
    REQUIRE(f1.publish_date.has_value());
    CHECK(f1.publish_date->to_iso() == "2016-10-01");
    CHECK(f1.url.value() == "http://a.example/x");

    const auto t1 = find("pf_t1");
    CHECK(t1.label == Label::True);
    CHECK(t1.publish_date->to_iso() == "2016-10-02");  // time suffix ignored

    const auto bf1 = find("bf_f1");
    CHECK(bf1.authors.empty());
    CHECK_FALSE(bf1.url.has_value());  // empty string url treated as missing
    CHECK_FALSE(bf1.publish_date.has_value());
}

TEST_CASE("load_corpus error taxonomy") {
    CHECK_THROWS_AS((void)corpus::load_corpus({"/definitely/not/here"}), IoError);

    const auto dir = testutil::scratch_dir("badjson");
    testutil::write_file(dir / "ds" / "fake" / "broken.json", "{not valid json");
    CHECK_THROWS_AS((void)corpus::load_corpus({(dir / "ds").string()}), ParseError);

    const auto dir2 = testutil::scratch_dir("badfield");
    testutil::write_file(dir2 / "ds" / "fake" / "badauthors.json",
                         R"({"title":"x","text":"y","authors":"not-an-array"})");
    try {
        (void)corpus::load_corpus({(dir2 / "ds").string()});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("badauthors") != std::string::npos);  // names the record
        CHECK(msg.find("authors") != std::string::npos);     // names the field
    }

    const auto dir3 = testutil::scratch_dir("dupid");
    testutil::write_file(dir3 / "a" / "fake" / "same.json", R"({"text":"one"})");
    testutil::write_file(dir3 / "b" / "real" / "same.json", R"({"text":"two"})");
    CHECK_THROWS_AS((void)corpus::load_corpus({(dir3 / "a").string(), (dir3 / "b").string()}),
                    StructuralError);

    const auto dir4 = testutil::scratch_dir("baddate");
    testutil::write_file(dir4 / "ds" / "fake" / "bd.json",
                         R"({"text":"z","publish_date":"October 1st"})");
    CHECK_THROWS_AS((void)corpus::load_corpus({(dir4 / "ds").string()}), ParseError);
}

TEST_CASE("load_corpus reads consolidated CSV with RFC-4180 quoting") {
    const auto dir = testutil::scratch_dir("csv");
    const std::string csv =
        "id,dataset,label,title,text,authors,url,publish_date\n"
        "a1,politifact,fake,\"Title, with comma\",\"Line one\nLine two\",\"Jane Doe;Bob Ray\",http://x.y,2016-01-02\n"
        "a2,buzzfeed,true,Plain,\"He said \"\"hi\"\"\",,,\n";
    testutil::write_file(dir / "data.csv", csv);
    const auto c = corpus::load_corpus({(dir / "data.csv").string()}, corpus::InputFormat::Csv);
    REQUIRE(c.articles.size() == 2);
    CHECK(c.articles[0].title == "Title, with comma");
    CHECK(c.articles[0].body == "Line one\nLine two");
    REQUIRE(c.articles[0].authors.size() == 2);
    CHECK(c.articles[0].authors[1] == "Bob Ray");
    CHECK(c.articles[1].body == "He said \"hi\"");
    CHECK(c.articles[1].label == Label::True);
    CHECK_FALSE(c.articles[1].url.has_value());

    testutil::write_file(dir / "badhdr.csv", "id,foo\n1,2\n");
    CHECK_THROWS_AS(
        (void)corpus::load_corpus({(dir / "badhdr.csv").string()}, corpus::InputFormat::Csv),
        ParseError);
}

TEST_CASE("empty input list yields an empty corpus") {
    const auto c = corpus::load_corpus({});
    CHECK(c.articles.empty());
    CHECK(corpus::corpus_stats(c).overall.total == 0);
}

TEST_CASE("persisted corpus round-trips field by field") {
    auto c = testutil::synthetic_corpus(5);
    const auto dir = testutil::scratch_dir("roundtrip");
    const auto path = (dir / "corpus.json").string();
    corpus::save_corpus(c, path);
    const auto back = corpus::load_corpus({path}, corpus::InputFormat::CorpusJson);
    REQUIRE(back.articles.size() == c.articles.size());
    for (std::size_t i = 0; i < c.articles.size(); ++i) CHECK(back.articles[i] == c.articles[i]);

    // a second save is byte-identical (no timestamps in the persisted form)
    const auto path2 = (dir / "corpus2.json").string();
    corpus::save_corpus(back, path2);
    CHECK(testutil::read_file(path) == testutil::read_file(path2));
}

TEST_CASE("deduplicate keeps the smallest id per body group") {
    corpus::Corpus c;
    c.articles.push_back(testutil::make_article("b", Label::Fake, "same body text"));
    c.articles.push_back(testutil::make_article("a", Label::Fake, "same body text"));
    c.articles.push_back(testutil::make_article("c", Label::True, "same body text"));
    c.articles.push_back(testutil::make_article("d", Label::True, "unique body"));
    const auto res = corpus::deduplicate(c);
    REQUIRE(res.corpus.articles.size() == 2);
    CHECK(res.corpus.articles[0].id == "a");
    CHECK(res.corpus.articles[1].id == "d");
    REQUIRE(res.removed.size() == 2);
    CHECK(res.removed[0] == std::pair<std::string, std::string>{"a", "b"});
    CHECK(res.removed[1] == std::pair<std::string, std::string>{"a", "c"});
}

TEST_CASE("deduplicate normalizes line endings and outer whitespace") {
    corpus::Corpus c;
    c.articles.push_back(testutil::make_article("x1", Label::Fake, "body line\r\nnext"));
    c.articles.push_back(testutil::make_article("x2", Label::Fake, "  body line\nnext \n"));
    const auto res = corpus::deduplicate(c);
    CHECK(res.corpus.articles.size() == 1);
    CHECK(res.removed.size() == 1);
}

TEST_CASE("deduplicate is idempotent and a no-op on distinct bodies") {
    auto c = testutil::synthetic_corpus(8);
    const auto first = corpus::deduplicate(c);
    CHECK(first.removed.empty());  // synthetic bodies carry unique markers
    const auto second = corpus::deduplicate(first.corpus);
    CHECK(second.removed.empty());
    CHECK(second.corpus.articles.size() == first.corpus.articles.size());
}

TEST_CASE("corpus_stats splits by dataset and url scheme") {
    corpus::Corpus c;
    auto a1 = testutil::make_article("1", Label::Fake, "b1", {}, "", "HTTPS://x.y");
    a1.dataset = corpus::Dataset::Politifact;
    auto a2 = testutil::make_article("2", Label::True, "b2", {}, "", "http://plain");
    a2.dataset = corpus::Dataset::Politifact;
    auto a3 = testutil::make_article("3", Label::True, "b3");
    a3.dataset = corpus::Dataset::Buzzfeed;
    auto a4 = testutil::make_article("4", Label::Fake, "b4", {}, "", "ftp://odd");
    a4.dataset = corpus::Dataset::Buzzfeed;
    c.articles = {a1, a2, a3, a4};

    const auto s = corpus::corpus_stats(c);
    CHECK(s.overall.total == 4);
    CHECK(s.overall.fake == 2);
    CHECK(s.overall.true_ == 2);
    CHECK(s.per_dataset.at("politifact").total == 2);
    CHECK(s.per_dataset.at("buzzfeed").fake == 1);
    CHECK(s.url_https.total == 1);
    CHECK(s.url_https.fake == 1);  // case-insensitive prefix
    CHECK(s.url_http.total == 1);
    CHECK(s.url_missing.total == 2);  // absent + non-http scheme
    CHECK(s.url_http.total + s.url_https.total + s.url_missing.total == s.overall.total);
}

TEST_CASE("corpus_stats is permutation-invariant") {
    auto c = testutil::synthetic_corpus(6);
    const auto before = corpus::corpus_stats(c);
    std::reverse(c.articles.begin(), c.articles.end());
    const auto after = corpus::corpus_stats(c);
    CHECK(before.overall.total == after.overall.total);
    CHECK(before.overall.fake == after.overall.fake);
    CHECK(before.url_http.total == after.url_http.total);
    CHECK(before.url_https.fake == after.url_https.fake);
    CHECK(before.url_missing.true_ == after.url_missing.true_);
}

TEST_CASE("author normalization preserves display form, folds identity") {
    const auto authors = corpus::normalize_authors({"  Jane  Doe ", "JANE DOE", "", "Bob"});
    REQUIRE(authors.size() == 2);
    CHECK(authors[0] == "Jane Doe");
    CHECK(authors[1] == "Bob");
    CHECK(corpus::author_identity("Jane Doe") == "jane doe");
    CHECK(corpus::author_identity(corpus::normalize_author_display(" JANE   DOE ")) == "jane doe");
}

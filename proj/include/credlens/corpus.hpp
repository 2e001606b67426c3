#pragma once

#include <algorithm>
#include <chrono>
#include <compare>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "credlens/error.hpp"
#include "credlens/text.hpp"

namespace credlens::corpus {

using json = nlohmann::ordered_json;

enum class Label { Fake, True };
enum class Dataset { Politifact, Buzzfeed, Other };

inline std::string to_string(Label l) { return l == Label::Fake ? "fake" : "true"; }
inline std::string to_string(Dataset d) {
    switch (d) {
        case Dataset::Politifact: return "politifact";
        case Dataset::Buzzfeed: return "buzzfeed";
        default: return "other";
    }
}

inline Label parse_label(std::string_view s, const std::string& record_id) {
    const std::string f = text::casefold(text::trim(s));
    if (f == "fake") return Label::Fake;
    if (f == "true" || f == "real") return Label::True;
    throw ParseError("record '" + record_id + "': field 'label' has unknown value '" +
                     std::string(s) + "'");
}

inline Dataset parse_dataset(std::string_view s) {
    const std::string f = text::casefold(text::trim(s));
    if (f == "politifact") return Dataset::Politifact;
    if (f == "buzzfeed") return Dataset::Buzzfeed;
    return Dataset::Other;
}

// Calendar date, parsed from ISO-8601 strings. A trailing time component
// ("2016-10-26T21:41:00") is accepted and ignored.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    std::string to_iso() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

inline std::optional<Date> parse_date(std::string_view s, const std::string& record_id) {
    const std::string t = text::trim(s);
    if (t.empty()) return std::nullopt;
    Date d;
    char sep1 = 0, sep2 = 0;
    char tail[8] = {0};
    const int got = std::sscanf(t.c_str(), "%4d%c%2d%c%2d%1s",
                                &d.year, &sep1, &d.month, &sep2, &d.day, tail);
    const bool tail_ok = got == 5 || (got == 6 && (tail[0] == 'T' || tail[0] == ' '));
    if (got < 5 || !tail_ok || sep1 != '-' || sep2 != '-' ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw ParseError("record '" + record_id + "': field 'publish_date' is not an ISO-8601 date: '" +
                         t + "'");
    }
    return d;
}

// Display form: trimmed, internal whitespace collapsed. Identity for author
// matching is the casefolded display form.
inline std::string normalize_author_display(std::string_view raw) {
    return text::collapse_whitespace(raw);
}

inline std::string author_identity(std::string_view display) {
    return text::casefold(display);
}

inline std::vector<std::string> normalize_authors(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& r : raw) {
        std::string display = normalize_author_display(r);
        if (display.empty()) continue;
        if (seen.insert(author_identity(display)).second) out.push_back(std::move(display));
    }
    return out;
}

struct NewsArticle {
    std::string id;
    Dataset dataset = Dataset::Other;
    std::string title;
    std::string body;
    std::vector<std::string> authors;  // normalized display forms, no dups
    std::optional<std::string> url;
    std::optional<Date> publish_date;
    Label label = Label::Fake;

    bool operator==(const NewsArticle&) const = default;
};

struct Provenance {
    std::vector<std::string> source_paths;
    std::string loaded_at;  // ISO-8601 UTC; in-memory only, never persisted
};

struct Corpus {
    std::vector<NewsArticle> articles;
    Provenance provenance;
};

enum class InputFormat { Auto, JsonDir, Csv, CorpusJson };

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string now_utc_iso() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline NewsArticle article_from_json(const nlohmann::json& j, std::string id,
                                     Dataset dataset, Label label) {
    NewsArticle a;
    a.id = std::move(id);
    a.dataset = dataset;
    a.label = label;
    if (!j.is_object())
        throw ParseError("record '" + a.id + "': top-level JSON value is not an object");
    auto str_field = [&](const char* key) -> std::optional<std::string> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (!it->is_string())
            throw ParseError("record '" + a.id + "': field '" + key + "' is not a string");
        return it->get<std::string>();
    };
    a.title = str_field("title").value_or("");
    a.body = str_field("text").value_or("");
    if (auto it = j.find("authors"); it != j.end() && !it->is_null()) {
        if (!it->is_array())
            throw ParseError("record '" + a.id + "': field 'authors' is not an array");
        std::vector<std::string> raw;
        for (const auto& v : *it) {
            if (!v.is_string())
                throw ParseError("record '" + a.id + "': field 'authors' contains a non-string entry");
            raw.push_back(v.get<std::string>());
        }
        a.authors = normalize_authors(raw);
    }
    if (auto u = str_field("url"); u && !text::trim(*u).empty()) a.url = text::trim(*u);
    if (auto d = str_field("publish_date")) a.publish_date = parse_date(*d, a.id);
    return a;
}

// FakeNewsNet-style directory: <dataset>/<fake|real>/<id>.json
inline void load_json_dir(const std::filesystem::path& dir, std::vector<NewsArticle>& out) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a dataset directory: " + dir.string());
    const Dataset dataset = parse_dataset(dir.filename().string());
    bool any_label_dir = false;
    for (const auto& [sub, label] : {std::pair{"fake", Label::Fake}, std::pair{"real", Label::True},
                                     std::pair{"true", Label::True}}) {
        const fs::path label_dir = dir / sub;
        if (!fs::is_directory(label_dir)) continue;
        any_label_dir = true;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(label_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            const std::string id = f.stem().string();
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(f));
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError("record '" + id + "': invalid JSON in " + f.string() + ": " + e.what());
            }
            out.push_back(article_from_json(j, id, dataset, label));
        }
    }
    if (!any_label_dir)
        throw IoError("dataset directory has no fake/ or real/ subdirectory: " + dir.string());
}

// RFC 4180 CSV reader: quoted fields, doubled-quote escapes, embedded
// newlines. Accepts both LF and CRLF records.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view content,
                                                       const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    while (i < content.size()) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"' && !field_started && field.empty()) {
            in_quotes = true;
            field_started = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
            end_row();
            i += 2;
        } else if (c == '\n') {
            end_row();
            ++i;
        } else {
            field.push_back(c);
            field_started = true;
            ++i;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field in " + origin);
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

inline const std::vector<std::string> kCsvHeader = {
    "id", "dataset", "label", "title", "text", "authors", "url", "publish_date"};

inline void load_csv(const std::filesystem::path& path, std::vector<NewsArticle>& out) {
    std::string content = read_file(path);
    if (content.rfind("\xEF\xBB\xBF", 0) == 0) content.erase(0, 3);  // UTF-8 BOM
    const auto rows = parse_csv(content, path.string());
    if (rows.empty()) return;
    if (rows.front() != kCsvHeader) {
        throw ParseError("record '<header>': CSV header of " + path.string() +
                         " does not match id,dataset,label,title,text,authors,url,publish_date");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        const std::string id = row.empty() ? "" : row[0];
        if (row.size() != kCsvHeader.size())
            throw ParseError("record '" + id + "': expected " + std::to_string(kCsvHeader.size()) +
                             " CSV fields, got " + std::to_string(row.size()));
        if (id.empty()) throw ParseError("record at CSV row " + std::to_string(r + 1) +
                                         ": field 'id' is empty");
        NewsArticle a;
        a.id = id;
        a.dataset = parse_dataset(row[1]);
        a.label = parse_label(row[2], id);
        a.title = row[3];
        a.body = row[4];
        a.authors = normalize_authors(text::split(row[5], ';'));
        if (!text::trim(row[6]).empty()) a.url = text::trim(row[6]);
        a.publish_date = parse_date(row[7], id);
        out.push_back(std::move(a));
    }
}

inline void load_corpus_json(const std::filesystem::path& path, std::vector<NewsArticle>& out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("record '<corpus>': invalid JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_array())
        throw ParseError("record '<corpus>': persisted corpus must be a JSON array: " + path.string());
    for (const auto& item : j) {
        auto it = item.find("id");
        if (it == item.end() || !it->is_string())
            throw ParseError("record '<unknown>': article object lacks a string 'id'");
        const std::string id = it->get<std::string>();
        auto lab = item.find("label");
        if (lab == item.end() || !lab->is_string())
            throw ParseError("record '" + id + "': field 'label' missing or not a string");
        auto ds = item.find("dataset");
        const Dataset dataset =
            ds != item.end() && ds->is_string() ? parse_dataset(ds->get<std::string>()) : Dataset::Other;
        out.push_back(article_from_json(item, id, dataset, parse_label(lab->get<std::string>(), id)));
    }
}

inline InputFormat sniff_format(const std::filesystem::path& p) {
    if (std::filesystem::is_directory(p)) return InputFormat::JsonDir;
    const auto ext = p.extension().string();
    if (ext == ".csv") return InputFormat::Csv;
    if (ext == ".json") return InputFormat::CorpusJson;
    throw UsageError("cannot infer input format of " + p.string() +
                     "; pass --format json-dir|csv|corpus");
}

}  // namespace detail

inline Corpus load_corpus(const std::vector<std::string>& paths,
                          InputFormat format = InputFormat::Auto) {
    Corpus c;
    for (const auto& p : paths) {
        const std::filesystem::path path(p);
        if (!std::filesystem::exists(path)) throw IoError("input path does not exist: " + p);
        const InputFormat fmt = format == InputFormat::Auto ? detail::sniff_format(path) : format;
        switch (fmt) {
            case InputFormat::JsonDir: detail::load_json_dir(path, c.articles); break;
            case InputFormat::Csv: detail::load_csv(path, c.articles); break;
            case InputFormat::CorpusJson: detail::load_corpus_json(path, c.articles); break;
            case InputFormat::Auto: break;  // unreachable
        }
        c.provenance.source_paths.push_back(p);
    }
    std::unordered_set<std::string> ids;
    for (const auto& a : c.articles) {
        if (!ids.insert(a.id).second)
            throw StructuralError("duplicate article id in corpus: '" + a.id + "'");
    }
    c.provenance.loaded_at = detail::now_utc_iso();
    return c;
}

inline json article_to_json(const NewsArticle& a) {
    json j;
    j["id"] = a.id;
    j["dataset"] = to_string(a.dataset);
    j["label"] = to_string(a.label);
    j["title"] = a.title;
    j["text"] = a.body;
    j["authors"] = a.authors;
    if (a.url) j["url"] = *a.url;
    if (a.publish_date) j["publish_date"] = a.publish_date->to_iso();
    return j;
}

// Persisted form: a single JSON array of article objects. Provenance is
// deliberately not written so equal inputs serialize byte-identically.
inline json corpus_to_json(const Corpus& c) {
    json arr = json::array();
    for (const auto& a : c.articles) arr.push_back(article_to_json(a));
    return arr;
}

inline void save_corpus(const Corpus& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << corpus_to_json(c).dump(2) << '\n';
}

struct DedupResult {
    Corpus corpus;
    std::vector<std::pair<std::string, std::string>> removed;  // (kept_id, dropped_id)
};

// Keeps exactly one article per distinct normalized body; the survivor of a
// duplicate group is the lexicographically smallest id.
inline DedupResult deduplicate(const Corpus& c) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < c.articles.size(); ++i)
        groups[text::normalize_body(c.articles[i].body)].push_back(i);

    std::unordered_set<std::string> dropped;
    DedupResult result;
    for (auto& [body, idxs] : groups) {
        if (idxs.size() < 2) continue;
        std::vector<std::string> ids;
        for (auto i : idxs) ids.push_back(c.articles[i].id);
        std::sort(ids.begin(), ids.end());
        for (std::size_t k = 1; k < ids.size(); ++k) {
            result.removed.emplace_back(ids[0], ids[k]);
            dropped.insert(ids[k]);
        }
    }
    std::sort(result.removed.begin(), result.removed.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    result.corpus.provenance = c.provenance;
    for (const auto& a : c.articles)
        if (!dropped.count(a.id)) result.corpus.articles.push_back(a);
    return result;
}

struct LabelSplit {
    long total = 0;
    long fake = 0;
    long true_ = 0;
};

struct CorpusStats {
    std::map<std::string, LabelSplit> per_dataset;
    LabelSplit overall;
    LabelSplit url_http;
    LabelSplit url_https;
    LabelSplit url_missing;
};

inline CorpusStats corpus_stats(const Corpus& c) {
    CorpusStats s;
    for (const auto& a : c.articles) {
        auto bump = [&](LabelSplit& split) {
            ++split.total;
            (a.label == Label::Fake ? split.fake : split.true_)++;
        };
        bump(s.per_dataset[to_string(a.dataset)]);
        bump(s.overall);
        if (!a.url) {
            bump(s.url_missing);
        } else if (text::starts_with_ci(*a.url, "https://")) {
            bump(s.url_https);
        } else if (text::starts_with_ci(*a.url, "http://")) {
            bump(s.url_http);
        } else {
            bump(s.url_missing);
        }
    }
    return s;
}

inline json stats_to_json(const CorpusStats& s) {
    auto split = [](const LabelSplit& ls) {
        return json{{"total", ls.total}, {"fake", ls.fake}, {"true", ls.true_}};
    };
    json j;
    j["overall"] = split(s.overall);
    json per;
    for (const auto& [name, ls] : s.per_dataset) per[name] = split(ls);
    j["per_dataset"] = per;
    j["url_schemes"] = {{"http", split(s.url_http)},
                        {"https", split(s.url_https)},
                        {"missing", split(s.url_missing)}};
    return j;
}

}  // namespace credlens::corpus

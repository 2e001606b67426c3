#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "credlens/corpus.hpp"
#include "credlens/error.hpp"
#include "credlens/sentiment.hpp"
#include "credlens/text.hpp"

namespace credlens::textfeat {

// Word tokens: maximal runs of letters, optionally containing internal
// apostrophes. Digits and punctuation never join a token.
inline std::vector<std::string> tokenize_words(std::string_view txt) {
    return sentiment::detail::sentence_tokens(txt);
}

inline std::vector<std::string> tokenize_words_folded(std::string_view txt) {
    return sentiment::detail::sentence_tokens(text::casefold(txt));
}

struct SurfaceCounts {
    long n_chars = 0;       // Unicode scalars in body, whitespace included
    long n_words = 0;
    long n_sentences = 0;
    long n_title_words = 0;
    double words_per_sentence = 0.0;
    double chars_per_word = 0.0;
    long n_special = 0;
    long n_digits = 0;
    long n_urls = 0;
};

// Special characters tracked by the surface counts.
inline bool is_special_char(char32_t cp) {
    switch (cp) {
        case U'!': case U'#': case U'$': case U'%': case U'*':
        case U'+': case U'-': case U'?': case U'@': case U'|':
            return true;
        default:
            return false;
    }
}

inline long count_urls(std::string_view body) {
    long n = 0;
    for (std::size_t i = 0; i + 7 <= body.size(); ++i) {
        if (text::starts_with_ci(body.substr(i), "http://") ||
            text::starts_with_ci(body.substr(i), "https://"))
            ++n;
    }
    return n;
}

inline SurfaceCounts surface_counts(const corpus::NewsArticle& article,
                                    const sentiment::AbbrevSet& abbrevs =
                                        sentiment::AbbrevSet::builtin()) {
    SurfaceCounts sc;
    std::size_t pos = 0;
    while (pos < article.body.size()) {
        auto [cp, len] = text::decode_utf8(article.body, pos);
        ++sc.n_chars;
        if (cp >= U'0' && cp <= U'9') ++sc.n_digits;
        if (is_special_char(cp)) ++sc.n_special;
        pos += len;
    }
    sc.n_words = static_cast<long>(tokenize_words(article.body).size());
    sc.n_sentences = static_cast<long>(sentiment::segment_sentences(article.body, abbrevs).size());
    sc.n_title_words = static_cast<long>(tokenize_words(article.title).size());
    sc.n_urls = count_urls(article.body);
    if (sc.n_sentences > 0)
        sc.words_per_sentence = static_cast<double>(sc.n_words) / static_cast<double>(sc.n_sentences);
    if (sc.n_words > 0)
        sc.chars_per_word = static_cast<double>(sc.n_chars) / static_cast<double>(sc.n_words);
    return sc;
}

// Heuristic syllable count: maximal vowel-group runs (a e i o u y), minus one
// for a silent trailing "e" (not "le", and only if another group remains),
// floored at 1.
inline long count_syllables(std::string_view word) {
    const std::string w = text::casefold(word);
    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    long groups = 0;
    bool in_group = false;
    for (char c : w) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    const bool silent_e = w.size() >= 2 && w.back() == 'e' &&
                          w.substr(w.size() - 2) != "le" && groups > 1;
    if (silent_e) --groups;
    return groups < 1 ? 1 : groups;
}

struct FleschResult {
    double score = 0.0;
    bool degenerate = false;  // no words or no sentences
};

// 206.835 - 1.015 * words/sentence - 84.6 * syllables/word
inline FleschResult flesch_reading_ease(std::string_view txt,
                                        const sentiment::AbbrevSet& abbrevs =
                                            sentiment::AbbrevSet::builtin()) {
    const auto words = tokenize_words(txt);
    const auto sentences = sentiment::segment_sentences(txt, abbrevs);
    if (words.empty() || sentences.empty()) return {0.0, true};
    long syllables = 0;
    for (const auto& w : words) syllables += count_syllables(w);
    const double nw = static_cast<double>(words.size());
    const double ns = static_cast<double>(sentences.size());
    return {206.835 - 1.015 * (nw / ns) - 84.6 * (static_cast<double>(syllables) / nw), false};
}

class Dictionary {
public:
    Dictionary() = default;

    explicit Dictionary(const std::vector<std::string>& words) {
        for (const auto& w : words) {
            const std::string t = text::casefold(text::trim(w));
            if (!t.empty()) words_.insert(t);
        }
    }

    static Dictionary from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read dictionary wordlist: " + path);
        Dictionary d;
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = text::casefold(text::trim(line));
            if (!t.empty() && t[0] != '#') d.words_.insert(t);
        }
        return d;
    }

    bool contains(std::string_view folded_word) const {
        return words_.count(std::string(folded_word)) > 0;
    }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

private:
    std::unordered_set<std::string> words_;
};

// Fraction of word tokens absent from the dictionary (casefolded on both
// sides); 0 for token-free text.
inline double typo_rate(std::string_view txt, const Dictionary& dict) {
    if (dict.empty()) throw ConfigError("typo_rate: dictionary is empty");
    const auto tokens = tokenize_words_folded(txt);
    if (tokens.empty()) return 0.0;
    std::size_t misses = 0;
    for (const auto& t : tokens)
        if (!dict.contains(t)) ++misses;
    return static_cast<double>(misses) / static_cast<double>(tokens.size());
}

struct DomainWordLists {
    std::unordered_set<std::string> fake_only;  // casefolded
    std::unordered_set<std::string> true_only;

    static std::unordered_set<std::string> load_list(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read word list: " + path);
        std::unordered_set<std::string> set;
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = text::casefold(text::trim(line));
            if (!t.empty() && t[0] != '#') set.insert(t);
        }
        return set;
    }

    static DomainWordLists from_files(const std::string& fake_path, const std::string& true_path) {
        DomainWordLists lists;
        lists.fake_only = load_list(fake_path);
        lists.true_only = load_list(true_path);
        for (const auto& w : lists.fake_only) {
            if (lists.true_only.count(w))
                throw ConfigError("domain word lists overlap on '" + w + "'");
        }
        return lists;
    }
};

struct NcslCounts {
    long n_fake_only = 0;
    long n_true_only = 0;
};

// Total (not distinct) occurrences by default; set `distinct` to count each
// listed word at most once per text.
inline NcslCounts ncsl_counts(std::string_view txt, const DomainWordLists& lists,
                              bool distinct = false) {
    NcslCounts c;
    std::unordered_set<std::string> seen;
    for (const auto& tok : tokenize_words_folded(txt)) {
        const bool in_fake = lists.fake_only.count(tok) > 0;
        const bool in_true = !in_fake && lists.true_only.count(tok) > 0;
        if (!in_fake && !in_true) continue;
        if (distinct && !seen.insert(tok).second) continue;
        if (in_fake) ++c.n_fake_only;
        else ++c.n_true_only;
    }
    return c;
}

// Occurrences of any word from a single list (used for the NCSL descriptive
// comparison against the full glossary).
inline long count_list_words(std::string_view txt, const std::unordered_set<std::string>& words,
                             bool distinct = false) {
    long n = 0;
    std::unordered_set<std::string> seen;
    for (const auto& tok : tokenize_words_folded(txt)) {
        if (!words.count(tok)) continue;
        if (distinct && !seen.insert(tok).second) continue;
        ++n;
    }
    return n;
}

}  // namespace credlens::textfeat

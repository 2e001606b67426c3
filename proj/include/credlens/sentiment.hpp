#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "credlens/error.hpp"
#include "credlens/text.hpp"

namespace credlens::sentiment {

// ---------------------------------------------------------------------------
// Sentence segmentation
// ---------------------------------------------------------------------------

// Abbreviations whose trailing period must not end a sentence. Stored
// casefolded, including the final period ("dr.", "u.s.").
class AbbrevSet {
public:
    AbbrevSet() = default;

    static AbbrevSet builtin() {
        AbbrevSet s;
        for (const char* a :
             {"Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Rev.", "Hon.", "St.", "Jr.", "Sr.",
              "Gen.", "Sen.", "Rep.", "Gov.", "Lt.", "Col.", "Sgt.", "Capt.", "Maj.",
              "U.S.", "U.K.", "U.N.", "D.C.", "E.U.", "a.m.", "p.m.", "vs.", "etc.",
              "e.g.", "i.e.", "cf.", "al.", "Inc.", "Ltd.", "Co.", "Corp.", "No.",
              "Jan.", "Feb.", "Mar.", "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.",
              "Oct.", "Nov.", "Dec.", "Mt.", "Ft.", "Ave.", "Blvd.", "Rd."}) {
            s.add(a);
        }
        return s;
    }

    static AbbrevSet from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read abbreviation list: " + path);
        AbbrevSet s;
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = text::trim(line);
            if (!t.empty() && t[0] != '#') s.add(t);
        }
        return s;
    }

    void add(std::string_view abbrev) { set_.insert(text::casefold(abbrev)); }
    bool contains(std::string_view token_casefolded) const {
        return set_.count(std::string(token_casefolded)) > 0;
    }
    std::size_t size() const { return set_.size(); }

private:
    std::unordered_set<std::string> set_;
};

// Splits on '.', '!' or '?' followed by whitespace or end of text. A '.'
// whose preceding token (letters and internal periods, e.g. "Dr.", "U.S.")
// is a known abbreviation does not split. Segments are trimmed; empty ones
// are dropped.
inline std::vector<std::string> segment_sentences(std::string_view txt,
                                                  const AbbrevSet& abbrevs = AbbrevSet::builtin()) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::string seg = text::trim(txt.substr(start, end - start));
        if (!seg.empty()) sentences.push_back(std::move(seg));
    };
    for (std::size_t i = 0; i < txt.size(); ++i) {
        const char c = txt[i];
        if (c != '.' && c != '!' && c != '?') continue;
        const bool at_end = i + 1 == txt.size();
        if (!at_end && !text::is_ascii_space(txt[i + 1])) continue;
        if (c == '.') {
            // token ending at this period, scanning back over letters,
            // apostrophes and periods
            std::size_t b = i;
            while (b > start) {
                const char p = txt[b - 1];
                if (text::is_ascii_alpha(p) || p == '.' || p == '\'') --b;
                else break;
            }
            const std::string token = text::casefold(txt.substr(b, i - b + 1));
            if (abbrevs.contains(token)) continue;
        }
        flush(i + 1);
        start = i + 1;
    }
    if (start < txt.size()) flush(txt.size());
    return sentences;
}

// ---------------------------------------------------------------------------
// Lexicon scoring
// ---------------------------------------------------------------------------

struct SentimentLexicon {
    std::unordered_map<std::string, double> valence;  // casefolded token -> valence
    std::unordered_set<std::string> negations;
    double negation_scale = -0.74;

    static std::unordered_set<std::string> default_negations() {
        return {"not",     "no",      "never",    "neither", "nor",      "nothing",
                "nobody",  "none",    "nowhere",  "cannot",  "can't",    "cant",
                "don't",   "dont",    "won't",    "wont",    "isn't",    "isnt",
                "aren't",  "arent",   "wasn't",   "wasnt",   "weren't",  "werent",
                "doesn't", "doesnt",  "didn't",   "didnt",   "couldn't", "couldnt",
                "shouldn't", "shouldnt", "wouldn't", "wouldnt", "hasn't", "hasnt",
                "haven't", "havent",  "hadn't",   "hadnt",   "ain't",    "aint",
                "without", "hardly",  "barely",   "scarcely", "rarely",  "seldom"};
    }

    // TSV: token <TAB> valence [<TAB> ignored ...]. The published VADER
    // lexicon file parses unchanged.
    static SentimentLexicon from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read sentiment lexicon: " + path);
        SentimentLexicon lex;
        lex.negations = default_negations();
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            const auto cols = text::split(line, '\t');
            if (cols.size() < 2)
                throw ParseError("lexicon " + path + " line " + std::to_string(lineno) +
                                 ": expected token<TAB>valence");
            char* endp = nullptr;
            const double v = std::strtod(cols[1].c_str(), &endp);
            if (endp == cols[1].c_str() || !std::isfinite(v))
                throw ParseError("lexicon " + path + " line " + std::to_string(lineno) +
                                 ": bad valence '" + cols[1] + "'");
            lex.valence[text::casefold(cols[0])] = v;
        }
        return lex;
    }
};

namespace detail {

// Word tokens of a casefolded sentence: letter runs with internal
// apostrophes, matching the tokenizer used by the content extractors.
inline std::vector<std::string> sentence_tokens(std::string_view folded) {
    std::vector<std::string> tokens;
    std::string cur;
    bool prev_letter = false;
    std::size_t pos = 0;
    while (pos < folded.size()) {
        auto [cp, len] = text::decode_utf8(folded, pos);
        const bool letter = text::is_letter_cp(cp);
        const bool apos = (cp == U'\'' || cp == 0x2019);
        if (letter) {
            text::encode_utf8(cp, cur);
            prev_letter = true;
        } else if (apos && prev_letter && pos + len < folded.size()) {
            auto nxt = text::decode_utf8(folded, pos + len);
            if (text::is_letter_cp(nxt.cp)) {
                cur.push_back('\'');
                prev_letter = false;
            } else {
                if (!cur.empty()) tokens.push_back(std::move(cur));
                cur.clear();
                prev_letter = false;
            }
        } else {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
            prev_letter = false;
        }
        pos += len;
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace detail

// Compound score in [-1, 1]: summed valences of lexicon tokens, negation
// within a 3-token window scaling by negation_scale, then s / sqrt(s^2 + 15).
// No lexicon hits scores exactly 0.
inline double score_sentence(std::string_view sentence, const SentimentLexicon& lex) {
    const auto tokens = detail::sentence_tokens(text::casefold(sentence));
    double s = 0.0;
    bool any = false;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const auto it = lex.valence.find(tokens[t]);
        if (it == lex.valence.end()) continue;
        double v = it->second;
        for (std::size_t back = 1; back <= 3 && back <= t; ++back) {
            if (lex.negations.count(tokens[t - back])) {
                v *= lex.negation_scale;
                break;
            }
        }
        s += v;
        any = true;
    }
    if (!any || s == 0.0) return 0.0;
    constexpr double alpha = 15.0;
    return s / std::sqrt(s * s + alpha);
}

enum class SentimentLabel { Positive, Neutral, Negative };

inline std::string to_string(SentimentLabel l) {
    switch (l) {
        case SentimentLabel::Positive: return "positive";
        case SentimentLabel::Neutral: return "neutral";
        default: return "negative";
    }
}

// Standard VADER thresholds, boundary values inclusive on the non-neutral side.
inline SentimentLabel label_sentence(double compound) {
    if (compound >= 0.05) return SentimentLabel::Positive;
    if (compound <= -0.05) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

struct SentimentProfile {
    double p_pos = 0.0;
    double p_neu = 0.0;
    double p_neg = 0.0;
    std::size_t n_sentences = 0;
};

inline std::vector<SentimentLabel> label_sentences(std::string_view txt,
                                                   const SentimentLexicon& lex,
                                                   const AbbrevSet& abbrevs) {
    std::vector<SentimentLabel> labels;
    for (const auto& s : segment_sentences(txt, abbrevs))
        labels.push_back(label_sentence(score_sentence(s, lex)));
    return labels;
}

inline SentimentProfile profile_from_labels(const std::vector<SentimentLabel>& labels) {
    SentimentProfile p;
    p.n_sentences = labels.size();
    if (labels.empty()) return p;
    std::size_t pos = 0, neu = 0, neg = 0;
    for (auto l : labels) {
        if (l == SentimentLabel::Positive) ++pos;
        else if (l == SentimentLabel::Neutral) ++neu;
        else ++neg;
    }
    const double n = static_cast<double>(labels.size());
    p.p_pos = static_cast<double>(pos) / n;
    p.p_neu = static_cast<double>(neu) / n;
    p.p_neg = static_cast<double>(neg) / n;
    return p;
}

inline SentimentProfile sentiment_profile(std::string_view txt, const SentimentLexicon& lex,
                                          const AbbrevSet& abbrevs = AbbrevSet::builtin()) {
    return profile_from_labels(label_sentences(txt, lex, abbrevs));
}

// Ordered label-pair fractions over consecutive sentences. Index layout:
// [from * 3 + to] with 0 = positive, 1 = negative, 2 = neutral.
struct SentimentSequenceProfile {
    std::array<double, 9> fractions{};
    std::size_t n_pairs = 0;

    static constexpr std::array<const char*, 9> names = {
        "seq_pos_pos", "seq_pos_neg", "seq_pos_neu",
        "seq_neg_pos", "seq_neg_neg", "seq_neg_neu",
        "seq_neu_pos", "seq_neu_neg", "seq_neu_neu"};
};

namespace detail {
inline int seq_index(SentimentLabel l) {
    switch (l) {
        case SentimentLabel::Positive: return 0;
        case SentimentLabel::Negative: return 1;
        default: return 2;
    }
}
}  // namespace detail

inline SentimentSequenceProfile sequence_profile_from_labels(
    const std::vector<SentimentLabel>& labels) {
    SentimentSequenceProfile p;
    if (labels.size() < 2) return p;
    p.n_pairs = labels.size() - 1;
    std::array<std::size_t, 9> counts{};
    for (std::size_t i = 0; i + 1 < labels.size(); ++i)
        ++counts[detail::seq_index(labels[i]) * 3 + detail::seq_index(labels[i + 1])];
    for (std::size_t k = 0; k < 9; ++k)
        p.fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(p.n_pairs);
    return p;
}

inline SentimentSequenceProfile sentiment_sequence_profile(
    std::string_view txt, const SentimentLexicon& lex,
    const AbbrevSet& abbrevs = AbbrevSet::builtin()) {
    return sequence_profile_from_labels(label_sentences(txt, lex, abbrevs));
}

}  // namespace credlens::sentiment

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "credlens/corpus.hpp"
#include "credlens/error.hpp"

namespace credlens::sourcefeat {

using corpus::Corpus;
using corpus::Label;
using corpus::NewsArticle;

inline long author_count(const NewsArticle& a) { return static_cast<long>(a.authors.size()); }

enum class AuthorType { TrueOnly, FakeOnly, Mixed, Insufficient };

inline std::string to_string(AuthorType t) {
    switch (t) {
        case AuthorType::TrueOnly: return "true_only";
        case AuthorType::FakeOnly: return "fake_only";
        case AuthorType::Mixed: return "mixed";
        default: return "insufficient";
    }
}

struct AuthorRecord {
    std::string display;            // first-seen display form
    std::vector<std::string> article_ids;  // dated first (ascending), then undated; ties by id
    std::size_t n_fake = 0;
    std::size_t n_true = 0;

    std::size_t n_articles() const { return article_ids.size(); }

    AuthorType type(std::size_t min_articles = 2) const {
        if (n_articles() < min_articles) return AuthorType::Insufficient;
        if (n_fake > 0 && n_true > 0) return AuthorType::Mixed;
        return n_fake > 0 ? AuthorType::FakeOnly : AuthorType::TrueOnly;
    }
};

// Identity (casefolded name) -> publication record.
struct AuthorIndex {
    std::map<std::string, AuthorRecord> authors;

    std::size_t n_unique() const { return authors.size(); }

    std::size_t n_eligible(std::size_t min_articles = 2) const {
        std::size_t n = 0;
        for (const auto& [_, rec] : authors)
            if (rec.n_articles() >= min_articles) ++n;
        return n;
    }
};

inline AuthorIndex build_author_index(const Corpus& c) {
    AuthorIndex index;
    std::unordered_map<std::string, const NewsArticle*> by_id;
    for (const auto& a : c.articles) by_id[a.id] = &a;
    for (const auto& a : c.articles) {
        for (const auto& name : a.authors) {
            const std::string key = corpus::author_identity(name);
            auto& rec = index.authors[key];
            if (rec.display.empty()) rec.display = name;
            rec.article_ids.push_back(a.id);
            (a.label == Label::Fake ? rec.n_fake : rec.n_true)++;
        }
    }
    for (auto& [_, rec] : index.authors) {
        std::sort(rec.article_ids.begin(), rec.article_ids.end(),
                  [&](const std::string& x, const std::string& y) {
                      const auto& dx = by_id.at(x)->publish_date;
                      const auto& dy = by_id.at(y)->publish_date;
                      if (dx.has_value() != dy.has_value()) return dx.has_value();
                      if (dx && dy && *dx != *dy) return *dx < *dy;
                      return x < y;
                  });
    }
    return index;
}

struct CoauthorEdge {
    std::string a;  // identities, a < b
    std::string b;
    long weight = 0;
};

struct CoauthorNode {
    std::string identity;
    std::string display;
    AuthorType type = AuthorType::Insufficient;
    std::size_t n_articles = 0;
};

struct CoauthorGraph {
    std::vector<CoauthorNode> nodes;                     // sorted by identity
    std::vector<CoauthorEdge> edges;                     // sorted by (a, b)
    std::map<std::string, std::vector<std::size_t>> adjacency;  // identity -> edge indices
    std::size_t min_articles = 2;

    double mixed_fraction() const {
        if (nodes.empty()) return 0.0;
        std::size_t mixed = 0;
        for (const auto& n : nodes)
            if (n.type == AuthorType::Mixed) ++mixed;
        return static_cast<double>(mixed) / static_cast<double>(nodes.size());
    }
};

// Nodes are authors with >= min_articles articles; edges connect eligible
// pairs, weighted by the number of co-authored articles. Coauthors below the
// threshold stay in the index but never appear in the graph.
inline CoauthorGraph build_coauthor_graph(const AuthorIndex& index, const Corpus& c,
                                          std::size_t min_articles = 2) {
    CoauthorGraph g;
    g.min_articles = min_articles;
    std::unordered_set<std::string> eligible;
    for (const auto& [key, rec] : index.authors) {
        if (rec.n_articles() < min_articles) continue;
        eligible.insert(key);
        g.nodes.push_back({key, rec.display, rec.type(min_articles), rec.n_articles()});
    }
    std::map<std::pair<std::string, std::string>, long> weights;
    for (const auto& art : c.articles) {
        std::vector<std::string> ids;
        for (const auto& name : art.authors) {
            std::string key = corpus::author_identity(name);
            if (eligible.count(key)) ids.push_back(std::move(key));
        }
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                ++weights[{ids[i], ids[j]}];
    }
    for (const auto& [pair, w] : weights) g.edges.push_back({pair.first, pair.second, w});
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.adjacency[g.edges[e].a].push_back(e);
        g.adjacency[g.edges[e].b].push_back(e);
    }
    return g;
}

struct NeighborTypeCounts {
    long n_true_only = 0;
    long n_fake_only = 0;
    long n_mixed = 0;
};

// Per-author counts of graph neighbors by type (the 3D representation behind
// the author scatter export).
inline std::map<std::string, NeighborTypeCounts> neighbor_type_profile(const CoauthorGraph& g) {
    std::map<std::string, AuthorType> type_of;
    for (const auto& n : g.nodes) type_of[n.identity] = n.type;
    std::map<std::string, NeighborTypeCounts> profile;
    for (const auto& n : g.nodes) profile[n.identity];  // isolated nodes report zeros
    for (const auto& e : g.edges) {
        auto bump = [&](const std::string& who, AuthorType neighbor_type) {
            auto& c = profile[who];
            switch (neighbor_type) {
                case AuthorType::TrueOnly: ++c.n_true_only; break;
                case AuthorType::FakeOnly: ++c.n_fake_only; break;
                case AuthorType::Mixed: ++c.n_mixed; break;
                default: break;
            }
        };
        bump(e.a, type_of.at(e.b));
        bump(e.b, type_of.at(e.a));
    }
    return profile;
}

struct HistoryFeatures {
    long past_fake = 0;
    long past_true = 0;
};

// Reference articles sharing at least one author with the target, counted
// once per article. The reference set must not contain the target.
inline HistoryFeatures history_features(const NewsArticle& article,
                                        const std::vector<const NewsArticle*>& reference) {
    std::unordered_set<std::string> target_authors;
    for (const auto& name : article.authors)
        target_authors.insert(corpus::author_identity(name));

    HistoryFeatures h;
    for (const auto* ref : reference) {
        if (ref->id == article.id)
            throw LeakageError("history_features: target article '" + article.id +
                               "' present in its own reference set");
        if (target_authors.empty()) continue;
        bool shares = false;
        for (const auto& name : ref->authors) {
            if (target_authors.count(corpus::author_identity(name))) {
                shares = true;
                break;
            }
        }
        if (!shares) continue;
        (ref->label == Label::Fake ? h.past_fake : h.past_true)++;
    }
    return h;
}

struct FlipRecord {
    std::string author;              // identity
    std::string article_id;          // first article after the flip
    std::string from;                // label before
    std::string to;                  // label after
};

struct ConsistencyReport {
    std::size_t n_dated_articles = 0;
    std::size_t n_eligible_authors = 0;
    std::size_t n_consistent = 0;
    std::size_t n_contradicting = 0;
    std::vector<FlipRecord> flips;
};

// Chronological behavior check over dated articles only: an author with
// >= min_articles dated articles contradicts when any later label differs
// from an earlier one. Same-date ties order by article id.
inline ConsistencyReport consistency_report(const Corpus& c, std::size_t min_articles = 2) {
    ConsistencyReport report;
    std::vector<const NewsArticle*> dated;
    for (const auto& a : c.articles)
        if (a.publish_date) dated.push_back(&a);
    report.n_dated_articles = dated.size();

    std::map<std::string, std::vector<const NewsArticle*>> by_author;
    for (const auto* a : dated)
        for (const auto& name : a->authors) by_author[corpus::author_identity(name)].push_back(a);

    for (auto& [author, arts] : by_author) {
        if (arts.size() < min_articles) continue;
        ++report.n_eligible_authors;
        std::sort(arts.begin(), arts.end(), [](const NewsArticle* x, const NewsArticle* y) {
            if (*x->publish_date != *y->publish_date) return *x->publish_date < *y->publish_date;
            return x->id < y->id;
        });
        bool contradicts = false;
        for (std::size_t i = 1; i < arts.size(); ++i) {
            if (arts[i]->label != arts[i - 1]->label) {
                contradicts = true;
                report.flips.push_back({author, arts[i]->id,
                                        corpus::to_string(arts[i - 1]->label),
                                        corpus::to_string(arts[i]->label)});
            }
        }
        if (contradicts) ++report.n_contradicting;
        else ++report.n_consistent;
    }
    return report;
}

// Organization keywords observed inside author strings. Reported for the
// affiliation analysis; never used as classifier features.
inline std::map<std::string, std::vector<std::string>> affiliation_keywords(
    const Corpus& c,
    const std::vector<std::string>& keywords = {
        "abc news", "associated press", "politico", "cnn", "nbc", "cbs", "fox",
        "reuters", "npr", "bbc", "usa today", "washington post", "new york times"}) {
    std::map<std::string, std::vector<std::string>> hits;  // keyword -> author display forms
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& a : c.articles) {
        for (const auto& name : a.authors) {
            const std::string folded = text::casefold(name);
            for (const auto& kw : keywords) {
                if (folded.find(kw) == std::string::npos) continue;
                if (seen.insert({kw, folded}).second) hits[kw].push_back(name);
            }
        }
    }
    return hits;
}

}  // namespace credlens::sourcefeat

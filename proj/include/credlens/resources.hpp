#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "credlens/error.hpp"
#include "credlens/sentiment.hpp"
#include "credlens/textfeat.hpp"

namespace credlens::resources {

// Bundled resource filenames, resolved against a resources directory.
inline constexpr const char* kLexiconFile = "vader_lexicon.tsv";
inline constexpr const char* kAbbrevFile = "abbreviations.txt";
inline constexpr const char* kDictionaryFile = "english_words.txt";
inline constexpr const char* kNcslFakeFile = "ncsl_fake_only.txt";
inline constexpr const char* kNcslTrueFile = "ncsl_true_only.txt";
inline constexpr const char* kNcslAllFile = "ncsl_words.txt";

// Everything the feature extractors read from disk, loaded once and shared.
struct ResourceSet {
    sentiment::SentimentLexicon lexicon;
    sentiment::AbbrevSet abbreviations;
    textfeat::Dictionary dictionary;
    textfeat::DomainWordLists ncsl;
    std::unordered_set<std::string> ncsl_all;  // full glossary, for descriptive stats
    std::string directory;

    static ResourceSet load(const std::string& dir) {
        namespace fs = std::filesystem;
        if (!fs::is_directory(dir)) throw ConfigError("resources directory not found: " + dir);
        auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
        ResourceSet r;
        r.directory = dir;
        r.lexicon = sentiment::SentimentLexicon::from_file(path(kLexiconFile));
        r.abbreviations = sentiment::AbbrevSet::from_file(path(kAbbrevFile));
        r.dictionary = textfeat::Dictionary::from_file(path(kDictionaryFile));
        r.ncsl = textfeat::DomainWordLists::from_files(path(kNcslFakeFile), path(kNcslTrueFile));
        if (fs::exists(path(kNcslAllFile)))
            r.ncsl_all = textfeat::DomainWordLists::load_list(path(kNcslAllFile));
        if (r.dictionary.empty()) throw ConfigError("dictionary wordlist is empty: " +
                                                    path(kDictionaryFile));
        return r;
    }
};

// Resolution order: explicit flag, CREDLENS_RESOURCES, ./resources.
inline std::string resolve_resources_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CREDLENS_RESOURCES"); env && *env) return env;
    return "resources";
}

}  // namespace credlens::resources

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "udgan/error.hpp"

namespace udgan {

// Rule constants for the lexicon analyzer. Defaults mirror the published
// VADER reference constants; every value can be overridden from a
// key=value file.
struct SentimentRules {
    double negation_factor = -0.74;
    double caps_boost = 0.733;
    double exclaim_boost = 0.292;
    int exclaim_cap = 4;
    double but_before = 0.5;
    double but_after = 1.5;
    double booster_damp[3] = {1.0, 0.95, 0.90}; // by distance 1..3

    std::unordered_set<std::string> negators;
    std::unordered_map<std::string, double> boosters;
    std::unordered_set<std::string> contrastive;

    static SentimentRules defaults();
};

class SentimentLexicon {
public:
    // Built-in lexicon plus default rules.
    static SentimentLexicon defaults();
    // Lexicon file: one "token<TAB>valence" per line. Empty rules path keeps
    // the built-in rule constants.
    static SentimentLexicon from_files(const std::filesystem::path& lexicon_path,
                                       const std::filesystem::path& rules_path = {});

    bool has(const std::string& token) const;
    double valence(const std::string& token) const; // 0 when absent
    void set_valence(const std::string& token, double v);
    const SentimentRules& rules() const { return rules_; }
    SentimentRules& rules() { return rules_; }
    std::size_t size() const { return valence_.size(); }

private:
    std::unordered_map<std::string, double> valence_;
    SentimentRules rules_;
};

struct SentimentScores {
    double pos = 0.0;
    double neg = 0.0;
    double neu = 0.0;
};

// Three-class proportions of a tokenized sentence. Lexicon hits are
// rule-adjusted in a fixed order (negation window of 3 preceding tokens,
// booster increments, all-caps amplification, exclamation amplification,
// contrastive-conjunction reweighting); the proportions are
//   pos = S+ / (S+ + S- + N0),  neg = S- / (...),  neu = N0 / (...)
// with S+ the positive valence mass, S- the absolute negative mass and N0
// the count of non-lexicon tokens. A sentence with no mass at all is neutral.
SentimentScores sentiment_proportions(const SentimentLexicon& lex,
                                      std::span<const std::string> tokens);

std::string ascii_lower(const std::string& s);

} // namespace udgan

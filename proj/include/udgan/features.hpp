#pragma once

#include <array>
#include <span>
#include <unordered_map>

#include "udgan/corpus.hpp"
#include "udgan/sentiment.hpp"

namespace udgan {

enum class Sentiment { positive, negative, neutral };

Sentiment parse_sentiment(const std::string& s); // DataError on anything else
std::string to_string(Sentiment s);

struct UserSpec {
    std::string topic_text; // surface form as entered
    Sentence topic;         // encoded against the corpus vocabulary
    Sentiment target = Sentiment::positive;
};

// Sentence-level TF-IDF: each corpus sentence is one document,
// idf = ln((1+N)/(1+df)) + 1, tf = raw count. Unseen tokens get the df=0
// value ln(1+N) + 1.
class TfidfModel {
public:
    static TfidfModel fit(const std::vector<Paragraph>& paragraphs);
    // Direct construction, used by tests that need a fixed idf table.
    static TfidfModel from_idf(std::unordered_map<int, double> idf, std::size_t doc_count,
                               double unseen_idf);

    double idf(int token_id) const;
    std::size_t document_count() const { return doc_count_; }

    // Cosine of the tf*idf vectors of two sentences, in [0,1]; 0 for disjoint
    // token supports.
    double cosine(const Sentence& a, const Sentence& b) const;

    // Order-independent digest of the idf table; lets tests assert the model
    // is never mutated by later training stages.
    std::uint64_t content_hash() const;

private:
    std::unordered_map<int, double> idf_;
    std::size_t doc_count_ = 0;
    double unseen_idf_ = 1.0;
};

struct FeatureVector {
    double topic_sim = 0.0;
    double length_penalty = 0.5;
    double p_pos = 0.0;
    double p_neg = 0.0;
    double p_neu = 1.0;

    std::array<double, 5> to_array() const {
        return {topic_sim, length_penalty, p_pos, p_neg, p_neu};
    }
    // Range and sum invariants; DSpecial scoring treats a violation as a
    // precondition error.
    void validate() const;
};

// Batch-normalized length penalty of each generated sentence against the
// topic length: |len - topic_len| mapped to [0,1] over the batch, 0 at the
// smallest difference and 1 at the largest. A batch in which every
// difference is equal (including singletons) maps to 0.5, the declared
// optimum.
std::vector<double> length_penalty_batch(std::span<const std::size_t> gen_lengths,
                                         std::size_t topic_length);

// Normalization captured from a generated minibatch, so rollout completions
// can be scored on the same scale. Values outside the batch range clamp.
struct LengthPenaltyScale {
    std::size_t topic_len = 0;
    std::size_t min_diff = 0;
    std::size_t max_diff = 0;

    static LengthPenaltyScale from_batch(std::span<const std::size_t> gen_lengths,
                                         std::size_t topic_length);
    double penalty(std::size_t len) const;
};

// The 5-element descriptor: [topic cosine, batch length penalty, p_pos,
// p_neg, p_neu]. The caller supplies the batch penalty it computed for s.
FeatureVector feature_vector(const TfidfModel& model, const SentimentLexicon& lex,
                             const Vocabulary& vocab, const Sentence& topic, const Sentence& s,
                             double batch_penalty);

// Idealized positive-class vectors for D-special training, one per sentiment
// class: positive -> [1,0.5,1,0,0], negative -> [1,0.5,0,1,0],
// neutral -> [1,0.5,0,0,1].
FeatureVector synthetic_target_one(Sentiment target);
std::vector<FeatureVector> synthetic_target(const UserSpec& spec, std::size_t n);

} // namespace udgan

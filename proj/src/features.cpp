#include "udgan/features.hpp"

#include <algorithm>
#include <cmath>

#include "udgan/rng.hpp"

namespace udgan {

Sentiment parse_sentiment(const std::string& s) {
    if (s == "positive") return Sentiment::positive;
    if (s == "negative") return Sentiment::negative;
    if (s == "neutral") return Sentiment::neutral;
    throw DataError("unknown sentiment class: " + s);
}

std::string to_string(Sentiment s) {
    switch (s) {
        case Sentiment::positive: return "positive";
        case Sentiment::negative: return "negative";
        case Sentiment::neutral: return "neutral";
    }
    throw DataError("invalid sentiment enum");
}

TfidfModel TfidfModel::fit(const std::vector<Paragraph>& paragraphs) {
    std::unordered_map<int, std::size_t> df;
    std::size_t docs = 0;
    for (const auto& p : paragraphs) {
        for (const auto& s : p.sentences) {
            ++docs;
            std::unordered_map<int, bool> seen;
            for (int id : s.ids) {
                if (!seen[id]) {
                    seen[id] = true;
                    ++df[id];
                }
            }
        }
    }
    if (docs == 0) throw DataError("tfidf: empty corpus");
    TfidfModel m;
    m.doc_count_ = docs;
    const double n1 = 1.0 + static_cast<double>(docs);
    for (const auto& [id, d] : df)
        m.idf_[id] = std::log(n1 / (1.0 + static_cast<double>(d))) + 1.0;
    m.unseen_idf_ = std::log(n1) + 1.0;
    return m;
}

TfidfModel TfidfModel::from_idf(std::unordered_map<int, double> idf, std::size_t doc_count,
                                double unseen_idf) {
    for (const auto& [id, v] : idf)
        if (v <= 0.0) throw DataError("tfidf: idf must be positive");
    TfidfModel m;
    m.idf_ = std::move(idf);
    m.doc_count_ = doc_count;
    m.unseen_idf_ = unseen_idf;
    return m;
}

double TfidfModel::idf(int token_id) const {
    auto it = idf_.find(token_id);
    return it == idf_.end() ? unseen_idf_ : it->second;
}

double TfidfModel::cosine(const Sentence& a, const Sentence& b) const {
    std::unordered_map<int, double> ta, tb;
    for (int id : a.ids) ta[id] += 1.0;
    for (int id : b.ids) tb[id] += 1.0;

    double na = 0.0, nb = 0.0, dot = 0.0;
    for (auto& [id, tf] : ta) {
        const double w = tf * idf(id);
        ta[id] = w;
        na += w * w;
    }
    for (auto& [id, tf] : tb) {
        const double w = tf * idf(id);
        tb[id] = w;
        nb += w * w;
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    for (const auto& [id, wa] : ta) {
        auto it = tb.find(id);
        if (it != tb.end()) dot += wa * it->second;
    }
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, 0.0, 1.0);
}

std::uint64_t TfidfModel::content_hash() const {
    std::vector<std::pair<int, double>> items(idf_.begin(), idf_.end());
    std::sort(items.begin(), items.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(doc_count_);
    std::uint64_t bits;
    std::memcpy(&bits, &unseen_idf_, 8);
    mix(bits);
    for (const auto& [id, v] : items) {
        mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(id)));
        std::memcpy(&bits, &v, 8);
        mix(bits);
    }
    return h;
}

void FeatureVector::validate() const {
    const auto arr = to_array();
    for (double v : arr) {
        if (!std::isfinite(v)) throw DataError("feature vector: non-finite element");
        if (v < 0.0 || v > 1.0) throw DataError("feature vector: element out of [0,1]");
    }
    if (std::fabs(p_pos + p_neg + p_neu - 1.0) > 1e-9)
        throw DataError("feature vector: sentiment proportions do not sum to 1");
}

LengthPenaltyScale LengthPenaltyScale::from_batch(std::span<const std::size_t> gen_lengths,
                                                  std::size_t topic_length) {
    if (gen_lengths.empty()) throw UsageError("length penalty: empty batch");
    LengthPenaltyScale s;
    s.topic_len = topic_length;
    std::size_t mn = SIZE_MAX, mx = 0;
    for (std::size_t len : gen_lengths) {
        const std::size_t d =
            len > topic_length ? len - topic_length : topic_length - len;
        mn = std::min(mn, d);
        mx = std::max(mx, d);
    }
    s.min_diff = mn;
    s.max_diff = mx;
    return s;
}

double LengthPenaltyScale::penalty(std::size_t len) const {
    if (max_diff == min_diff) return 0.5; // degenerate batch: everything optimal
    const std::size_t d = len > topic_len ? len - topic_len : topic_len - len;
    const double num = static_cast<double>(d) - static_cast<double>(min_diff);
    const double den = static_cast<double>(max_diff) - static_cast<double>(min_diff);
    return std::clamp(num / den, 0.0, 1.0);
}

std::vector<double> length_penalty_batch(std::span<const std::size_t> gen_lengths,
                                         std::size_t topic_length) {
    const auto scale = LengthPenaltyScale::from_batch(gen_lengths, topic_length);
    std::vector<double> out;
    out.reserve(gen_lengths.size());
    for (std::size_t len : gen_lengths) out.push_back(scale.penalty(len));
    return out;
}

FeatureVector feature_vector(const TfidfModel& model, const SentimentLexicon& lex,
                             const Vocabulary& vocab, const Sentence& topic, const Sentence& s,
                             double batch_penalty) {
    FeatureVector v;
    v.topic_sim = model.cosine(topic, s);
    v.length_penalty = batch_penalty;
    const auto tokens = decode_tokens(vocab, s);
    const auto sc = sentiment_proportions(lex, tokens);
    v.p_pos = sc.pos;
    v.p_neg = sc.neg;
    v.p_neu = sc.neu;
    return v;
}

FeatureVector synthetic_target_one(Sentiment target) {
    FeatureVector v;
    v.topic_sim = 1.0;
    v.length_penalty = 0.5;
    v.p_pos = target == Sentiment::positive ? 1.0 : 0.0;
    v.p_neg = target == Sentiment::negative ? 1.0 : 0.0;
    v.p_neu = target == Sentiment::neutral ? 1.0 : 0.0;
    return v;
}

std::vector<FeatureVector> synthetic_target(const UserSpec& spec, std::size_t n) {
    if (n < 1) throw UsageError("synthetic_target: n must be >= 1");
    return std::vector<FeatureVector>(n, synthetic_target_one(spec.target));
}

} // namespace udgan

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "udgan/features.hpp"
#include "udgan/rng.hpp"

using namespace udgan;

namespace {

Sentence sent(std::initializer_list<int> ids) {
    Sentence s;
    s.ids = ids;
    return s;
}

TfidfModel uniform_idf_model() {
    std::unordered_map<int, double> idf;
    for (int i = 0; i < 32; ++i) idf[i] = 1.0;
    return TfidfModel::from_idf(std::move(idf), 32, 1.0);
}

} // namespace

TEST_CASE("tfidf cosine: identity, disjoint supports, hand-computed value") {
    auto m = uniform_idf_model();
    SUBCASE("identical nonempty sentences -> 1") {
        Sentence a = sent({4, 5, 6});
        CHECK(m.cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("disjoint token sets -> 0") {
        CHECK(m.cosine(sent({4, 5}), sent({6, 7})) == 0.0);
    }
    SUBCASE("'x y' vs 'x z' with uniform idf -> 0.5") {
        // tf vectors (1,1,0) and (1,0,1): dot 1, norms sqrt(2) each
        CHECK(m.cosine(sent({4, 5}), sent({4, 6})) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("tfidf cosine is symmetric and idf-scale-invariant") {
    Rng rng(55);
    std::unordered_map<int, double> idf, idf3;
    for (int i = 0; i < 20; ++i) {
        idf[i] = 0.5 + uniform01(rng) * 2.0;
        idf3[i] = 3.0 * idf[i];
    }
    auto m1 = TfidfModel::from_idf(idf, 20, 1.0);
    auto m3 = TfidfModel::from_idf(idf3, 20, 3.0);

    for (int t = 0; t < 50; ++t) {
        Sentence a, b;
        const std::size_t la = 1 + rng() % 6, lb = 1 + rng() % 6;
        for (std::size_t i = 0; i < la; ++i) a.ids.push_back(static_cast<int>(rng() % 20));
        for (std::size_t i = 0; i < lb; ++i) b.ids.push_back(static_cast<int>(rng() % 20));
        const double ab = m1.cosine(a, b);
        CHECK(ab == doctest::Approx(m1.cosine(b, a)).epsilon(1e-12));
        CHECK(ab == doctest::Approx(m3.cosine(a, b)).epsilon(1e-9));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("tfidf fit: idf formula and unseen-token fallback") {
    // 4 sentences; token 4 in all, token 5 in one
    Corpus c = load_corpus_text("a b\na\n\na\na\n", 45, 1);
    auto m = TfidfModel::fit(c.paragraphs);
    const int a = c.vocab.id_of("a"), b = c.vocab.id_of("b");
    CHECK(m.document_count() == 4);
    CHECK(m.idf(a) == doctest::Approx(std::log(5.0 / 5.0) + 1.0));
    CHECK(m.idf(b) == doctest::Approx(std::log(5.0 / 2.0) + 1.0));
    CHECK(m.idf(99) == doctest::Approx(std::log(5.0) + 1.0)); // df = 0
    CHECK(m.idf(99) > 0.0);
}

TEST_CASE("length penalty: worked example {10,12,14} about topic 10") {
    std::vector<std::size_t> lens = {10, 12, 14};
    auto p = length_penalty_batch(lens, 10);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.0));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(p[2] == doctest::Approx(1.0));
}

TEST_CASE("length penalty: degenerate batches collapse to the 0.5 optimum") {
    std::vector<std::size_t> equal = {7, 7, 7};
    for (double v : length_penalty_batch(equal, 12)) CHECK(v == 0.5);
    std::vector<std::size_t> single = {9};
    CHECK(length_penalty_batch(single, 3)[0] == 0.5);
    // distinct lengths but equal |len - topic| is degenerate too
    std::vector<std::size_t> sym = {8, 12};
    for (double v : length_penalty_batch(sym, 10)) CHECK(v == 0.5);
}

TEST_CASE("length penalty: range, endpoints, permutation equivariance") {
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng() % 10;
        std::vector<std::size_t> lens;
        for (std::size_t i = 0; i < n; ++i) lens.push_back(1 + rng() % 30);
        const std::size_t topic = 1 + rng() % 30;
        auto p = length_penalty_batch(lens, topic);

        bool degenerate = true;
        auto diff = [&](std::size_t l) { return l > topic ? l - topic : topic - l; };
        for (std::size_t i = 1; i < n; ++i) degenerate = degenerate && diff(lens[i]) == diff(lens[0]);

        std::size_t zeros = 0, ones = 0;
        for (double v : p) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (v == 0.0) ++zeros;
            if (v == 1.0) ++ones;
        }
        if (!degenerate) {
            CHECK(zeros >= 1);
            CHECK(ones >= 1);
        }

        // permuting the batch permutes penalties identically
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng() % i]);
        std::vector<std::size_t> lens2(n);
        for (std::size_t i = 0; i < n; ++i) lens2[i] = lens[perm[i]];
        auto p2 = length_penalty_batch(lens2, topic);
        for (std::size_t i = 0; i < n; ++i) CHECK(p2[i] == p[perm[i]]);
    }
}

TEST_CASE("length penalty scale clamps out-of-batch lengths") {
    std::vector<std::size_t> lens = {10, 12, 14};
    auto scale = LengthPenaltyScale::from_batch(lens, 10);
    CHECK(scale.penalty(30) == 1.0);
    CHECK(scale.penalty(10) == 0.0);
    CHECK(scale.penalty(12) == doctest::Approx(0.5));
}

TEST_CASE("feature_vector composes the three sub-oracles in order") {
    Corpus c = load_corpus_text("good day today\ngood day today\nother words here\n", 45, 1);
    auto model = TfidfModel::fit(c.paragraphs);
    auto lex = SentimentLexicon::defaults();

    Sentence topic = encode(c.vocab, "good day today");

    SUBCASE("s = topic with neutral words only") {
        Sentence s = encode(c.vocab, "day today"); // no lexicon tokens
        auto v = feature_vector(model, lex, c.vocab, topic, s, 0.5);
        CHECK(v.topic_sim > 0.0);
        CHECK(v.length_penalty == 0.5);
        CHECK(v.p_neu == 1.0);
        auto vt = feature_vector(model, lex, c.vocab, topic, topic, 0.5);
        // topic itself contains "good": positive sentiment mass
        CHECK(vt.topic_sim == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(vt.p_pos > 0.0);
        vt.validate();
    }
    SUBCASE("disjoint-from-topic neutral sentence -> [0, 0.5, 0, 0, 1]") {
        Sentence s = encode(c.vocab, "other words here");
        auto v = feature_vector(model, lex, c.vocab, topic, s, 0.5);
        CHECK(v.topic_sim == 0.0);
        CHECK(v.length_penalty == 0.5);
        CHECK(v.p_pos == 0.0);
        CHECK(v.p_neg == 0.0);
        CHECK(v.p_neu == 1.0);
        v.validate();
    }
    SUBCASE("element order is [cos, penalty, pos, neg, neu]") {
        Sentence s = encode(c.vocab, "good day today");
        auto v = feature_vector(model, lex, c.vocab, topic, s, 0.25);
        auto arr = v.to_array();
        CHECK(arr[0] == v.topic_sim);
        CHECK(arr[1] == 0.25);
        CHECK(arr[2] == v.p_pos);
        CHECK(arr[3] == v.p_neg);
        CHECK(arr[4] == v.p_neu);
    }
}

TEST_CASE("synthetic targets match the published pattern") {
    UserSpec spec;
    spec.target = Sentiment::positive;
    auto vs = synthetic_target(spec, 3);
    REQUIRE(vs.size() == 3);
    for (const auto& v : vs) {
        CHECK(v.to_array() == std::array<double, 5>{1.0, 0.5, 1.0, 0.0, 0.0});
        v.validate();
    }
    CHECK(synthetic_target_one(Sentiment::negative).to_array() ==
          std::array<double, 5>{1.0, 0.5, 0.0, 1.0, 0.0});
    CHECK(synthetic_target_one(Sentiment::neutral).to_array() ==
          std::array<double, 5>{1.0, 0.5, 0.0, 0.0, 1.0});
    CHECK_THROWS_AS(synthetic_target(spec, 0), UsageError);
}

TEST_CASE("feature vector validation rejects malformed vectors") {
    FeatureVector v = synthetic_target_one(Sentiment::positive);
    v.validate();
    FeatureVector bad = v;
    bad.topic_sim = 1.5;
    CHECK_THROWS_AS(bad.validate(), DataError);
    FeatureVector bad2 = v;
    bad2.p_pos = 0.4; // proportions no longer sum to 1
    CHECK_THROWS_AS(bad2.validate(), DataError);
}

TEST_CASE("sentiment enum parsing") {
    CHECK(parse_sentiment("positive") == Sentiment::positive);
    CHECK(parse_sentiment("negative") == Sentiment::negative);
    CHECK(parse_sentiment("neutral") == Sentiment::neutral);
    CHECK_THROWS_AS(parse_sentiment("angry"), DataError);
    CHECK(to_string(Sentiment::negative) == "negative");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "udgan/gradcheck.hpp"
#include "udgan/tape.hpp"

using namespace udgan;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (double& v : m.data) v = uniform_range(rng, -1.5, 1.5);
    return m;
}

} // namespace

TEST_CASE("softmax basics") {
    SUBCASE("uniform on zeros") {
        Matrix x = Matrix::from_rows({{0.0, 0.0}});
        Matrix y = softmax_rows(x);
        CHECK(y(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(y(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("large logits do not overflow") {
        Matrix x = Matrix::from_rows({{1000.0, 0.0}});
        Matrix y = softmax_rows(x);
        CHECK(y.all_finite());
        CHECK(y(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(y(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("closed form on log inputs") {
        Matrix x = Matrix::from_rows({{std::log(1.0), std::log(2.0), std::log(3.0)}});
        Matrix y = softmax_rows(x);
        CHECK(y(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(y(0, 1) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
        CHECK(y(0, 2) == doctest::Approx(3.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("rows sum to one and shift invariance") {
        Rng rng(99);
        for (int t = 0; t < 20; ++t) {
            Matrix x = random_matrix(3, 7, rng);
            Matrix y = softmax_rows(x);
            for (std::size_t r = 0; r < y.rows; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < y.cols; ++c) {
                    s += y(r, c);
                    CHECK(y(r, c) >= 0.0);
                }
                CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
            }
            Matrix shifted = x;
            for (std::size_t c = 0; c < x.cols; ++c) shifted(1, c) += 17.25;
            Matrix y2 = softmax_rows(shifted);
            for (std::size_t c = 0; c < x.cols; ++c)
                CHECK(y2(1, c) == doctest::Approx(y(1, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear loss has exact outer-product gradient") {
    // loss = sum(x*W); dL/dW = x^T * ones, with x fixed.
    ParamStore store;
    Rng rng(3);
    store.add("w", random_matrix(3, 4, rng));
    Matrix x = random_matrix(2, 3, rng);

    Tape t(&store);
    Tape::Id xid = t.input(x);
    Tape::Id loss = t.sum_all(t.matmul(xid, t.param("w")));
    t.backward(loss);
    t.add_param_grads_to(store);

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double expect = x(0, i) + x(1, i); // column sums of x
            CHECK(store.grad("w")(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("zero-influence parameter gets zero gradient") {
    ParamStore store;
    Rng rng(4);
    store.add("used", random_matrix(2, 2, rng));
    store.add("unused", random_matrix(2, 2, rng));

    Tape t(&store);
    Tape::Id x = t.input(random_matrix(1, 2, rng));
    Tape::Id dead = t.scale(t.matmul(x, t.param("unused")), 0.0);
    Tape::Id live = t.matmul(x, t.param("used"));
    Tape::Id loss = t.sum_all(t.add(live, dead));
    t.backward(loss);
    t.add_param_grads_to(store);

    for (double g : store.grad("unused").data) CHECK(g == 0.0);
    bool any = false;
    for (double g : store.grad("used").data) any = any || g != 0.0;
    CHECK(any);
}

TEST_CASE("composed network passes central finite differences") {
    // Touches every op kind the models use: gather, matmul, add_row, slices,
    // concat, sigmoid/tanh/relu, mul, softmax/log-softmax picks, reductions.
    for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
        ParamStore store;
        Rng rng(seed);
        store.add("emb", random_matrix(6, 3, rng));
        store.add("w1", random_matrix(3, 8, rng));
        store.add("b1", random_matrix(1, 8, rng));
        store.add("w2", random_matrix(4, 5, rng));

        auto forward = [&](Tape& t) {
            Tape::Id e = t.gather_rows(t.param("emb"), {0, 2, 5, 2});
            Tape::Id h = t.add_row(t.matmul(e, t.param("w1")), t.param("b1"));
            Tape::Id left = t.sigmoid(t.slice_cols(h, 0, 4));
            Tape::Id right = t.tanh_(t.slice_cols(h, 4, 8));
            Tape::Id mixed = t.mul(left, t.relu(right));
            Tape::Id cat = t.concat_cols(t.slice_cols(mixed, 0, 2), t.slice_cols(mixed, 2, 4));
            Tape::Id logits = t.matmul(cat, t.param("w2"));
            Tape::Id logp = t.log_softmax_rows(logits);
            Tape::Id nll = t.pick_nll_mean(logp, {1, 4, 0, 2});
            Tape::Id probs = t.softmax_rows(logits);
            return t.add(nll, t.mean_all(t.mul(probs, probs)));
        };

        Tape t(&store);
        Tape::Id loss = forward(t);
        t.backward(loss);
        t.add_param_grads_to(store);

        auto loss_fn = [&]() {
            Tape t2(&store);
            return t2.value(forward(t2)).data[0];
        };
        auto rep = finite_difference_check(store, loss_fn, 1e-4);
        CAPTURE(rep.worst_param);
        CHECK(rep.max_rel_err < 1e-3);
    }
}

TEST_CASE("pick_weighted_sum gradient routes weights to picked entries") {
    ParamStore store;
    Rng rng(8);
    store.add("w", random_matrix(2, 3, rng));

    Tape t(&store);
    Tape::Id logp = t.log_softmax_rows(t.param("w"));
    Tape::Id obj = t.pick_weighted_sum(logp, {2, 0}, {0.5, 2.0});
    t.backward(obj);
    t.add_param_grads_to(store);

    auto loss_fn = [&]() {
        Tape t2(&store);
        Tape::Id lp = t2.log_softmax_rows(t2.param("w"));
        return t2.value(t2.pick_weighted_sum(lp, {2, 0}, {0.5, 2.0})).data[0];
    };
    auto rep = finite_difference_check(store, loss_fn, 1e-4);
    CHECK(rep.max_rel_err < 1e-3);
}

TEST_CASE("usage errors") {
    ParamStore store;
    Rng rng(1);
    store.add("w", random_matrix(2, 2, rng));

    SUBCASE("backward without any forward") {
        Tape t(&store);
        CHECK_THROWS_AS(t.backward(0), UsageError);
    }
    SUBCASE("backward needs scalar") {
        Tape t(&store);
        Tape::Id w = t.param("w");
        CHECK_THROWS_AS(t.backward(w), UsageError);
    }
    SUBCASE("backward twice") {
        Tape t(&store);
        Tape::Id loss = t.sum_all(t.param("w"));
        t.backward(loss);
        CHECK_THROWS_AS(t.backward(loss), UsageError);
    }
    SUBCASE("grad before backward") {
        Tape t(&store);
        Tape::Id loss = t.sum_all(t.param("w"));
        CHECK_THROWS_AS(t.grad(loss), UsageError);
    }
}

TEST_CASE("determinism: identical seeds produce bitwise-identical forwards") {
    auto run = [](std::uint64_t seed) {
        ParamStore store;
        Rng rng(seed);
        store.add("w", Matrix::uniform_init(4, 4, 4, rng));
        Tape t(&store);
        Tape::Id y = t.tanh_(t.matmul(t.param("w"), t.param("w")));
        return t.value(y);
    };
    Matrix a = run(777), b = run(777);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::memcmp(&a.data[i], &b.data[i], sizeof(double)) == 0);
    }
}

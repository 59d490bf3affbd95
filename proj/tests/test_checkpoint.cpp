#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "udgan/checkpoint.hpp"

using namespace udgan;

namespace {

ParamStore sample_store(std::uint64_t seed) {
    ParamStore s;
    Rng rng(seed);
    s.add("alpha.w", Matrix::uniform_init(3, 4, 3, rng));
    s.add("alpha.b", Matrix(1, 4));
    s.add("beta", Matrix::uniform_init(2, 2, 2, rng));
    return s;
}

CheckpointHeader sample_header() {
    CheckpointHeader h;
    h.model_kind = "generator";
    h.seed = 31337;
    h.layers = {{"linear", 3, 4, 1}, {"gru-cell", 4, 4, 1}};
    return h;
}

} // namespace

TEST_CASE("serialize/deserialize round-trips byte-exactly") {
    ParamStore s = sample_store(1);
    auto bytes = serialize_checkpoint(sample_header(), s);

    ParamStore loaded;
    CheckpointHeader h = deserialize_checkpoint(bytes, loaded);
    CHECK(h.model_kind == "generator");
    CHECK(h.seed == 31337);
    REQUIRE(h.layers.size() == 2);
    CHECK(h.layers[0] == LayerSpec{"linear", 3, 4, 1});

    REQUIRE(loaded.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(loaded.entry(i).name == s.entry(i).name);
        CHECK(loaded.entry(i).value.data == s.entry(i).value.data);
    }

    auto bytes2 = serialize_checkpoint(h, loaded);
    CHECK(bytes2 == bytes);
}

TEST_CASE("file save/load round-trip and stable hash") {
    const auto path = std::filesystem::temp_directory_path() / "udgan_ckpt_test.bin";
    ParamStore s = sample_store(2);
    save_checkpoint(path, sample_header(), s);

    ParamStore loaded;
    CheckpointHeader h = load_checkpoint(path, loaded);
    CHECK(h.seed == 31337);
    CHECK(loaded.value("beta").data == s.value("beta").data);

    const std::uint64_t h1 = file_fnv1a64(path);
    save_checkpoint(path, h, loaded); // re-save what was loaded
    const std::uint64_t h2 = file_fnv1a64(path);
    CHECK(h1 == h2);

    std::filesystem::remove(path);
}

TEST_CASE("corrupt input raises DataError") {
    ParamStore s = sample_store(3);
    auto bytes = serialize_checkpoint(sample_header(), s);

    SUBCASE("bad magic") {
        bytes[0] = 'X';
        ParamStore out;
        CHECK_THROWS_AS(deserialize_checkpoint(bytes, out), DataError);
    }
    SUBCASE("truncated") {
        bytes.resize(bytes.size() / 2);
        ParamStore out;
        CHECK_THROWS_AS(deserialize_checkpoint(bytes, out), DataError);
    }
    SUBCASE("trailing garbage") {
        bytes.push_back(0);
        ParamStore out;
        CHECK_THROWS_AS(deserialize_checkpoint(bytes, out), DataError);
    }
    SUBCASE("missing file") {
        ParamStore out;
        CHECK_THROWS_AS(load_checkpoint("/nonexistent/path/x.bin", out), IoError);
    }
}

TEST_CASE("hash_hex formats 64-bit values") {
    CHECK(hash_hex(0) == "0000000000000000");
    CHECK(hash_hex(0xdeadbeefULL) == "00000000deadbeef");
}

TEST_CASE("adam converges on a quadratic and is deterministic") {
    auto run = [] {
        ParamStore s;
        s.add("x", Matrix::from_rows({{5.0, -3.0}}));
        AdamOptimizer opt;
        for (int i = 0; i < 600; ++i) {
            // loss = 0.5*||x - (1,2)||^2 ; grad = x - (1,2)
            s.zero_grads();
            s.grad("x")(0, 0) = s.value("x")(0, 0) - 1.0;
            s.grad("x")(0, 1) = s.value("x")(0, 1) - 2.0;
            s.clip_grads_global_norm(5.0);
            opt.step(s, 0.05);
        }
        return std::pair<double, double>{s.value("x")(0, 0), s.value("x")(0, 1)};
    };
    auto [x0, x1] = run();
    CHECK(x0 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(x1 == doctest::Approx(2.0).epsilon(1e-3));
    auto [y0, y1] = run();
    CHECK(x0 == y0);
    CHECK(x1 == y1);
}

TEST_CASE("gradient clipping caps the global norm") {
    ParamStore s;
    s.add("a", Matrix::from_rows({{3.0, 4.0}})); // values irrelevant
    s.grad("a")(0, 0) = 30.0;
    s.grad("a")(0, 1) = 40.0;
    s.clip_grads_global_norm(5.0);
    CHECK(s.grad_global_norm() == doctest::Approx(5.0).epsilon(1e-12));
    // direction preserved
    CHECK(s.grad("a")(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.grad("a")(0, 1) == doctest::Approx(4.0).epsilon(1e-12));

    s.grad("a")(0, 0) = 0.3;
    s.grad("a")(0, 1) = 0.4;
    s.clip_grads_global_norm(5.0);
    CHECK(s.grad("a")(0, 0) == 0.3); // untouched below the cap
}

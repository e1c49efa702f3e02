#include <catch_amalgamated.hpp>

#include <random>

#include "asreval/kernels/levenshtein.hpp"
#include "support/oracles.hpp"

using namespace asreval::kernels;

namespace {

std::vector<Symbol> random_symbols(std::mt19937_64& rng, std::size_t len, Symbol alphabet) {
    std::uniform_int_distribution<Symbol> sym(0, alphabet - 1);
    std::vector<Symbol> out(len);
    for (auto& s : out) s = sym(rng);
    return out;
}

}  // namespace

TEST_CASE("scalar kernel: edge cases") {
    const std::vector<Symbol> e, abc{1, 2, 3};
    CHECK(levenshtein_scalar(e, e) == 0);
    CHECK(levenshtein_scalar(e, abc) == 3);
    CHECK(levenshtein_scalar(abc, e) == 3);
    CHECK(levenshtein_scalar(abc, abc) == 0);
    CHECK(levenshtein_scalar(std::vector<Symbol>{1, 2, 3}, std::vector<Symbol>{1, 9, 3}) == 1);
}

TEST_CASE("scalar kernel matches the recursive oracle") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> len(0, 12);
    for (int t = 0; t < 2000; ++t) {
        const auto a = random_symbols(rng, len(rng), 4);
        const auto b = random_symbols(rng, len(rng), 4);
        REQUIRE(levenshtein_scalar(a, b) == testsupport::brute_force_distance(a, b));
    }
}

TEST_CASE("avx2 kernel equals scalar kernel") {
    if (!avx2_available()) SKIP("AVX2 kernel not available on this CPU/build");

    std::mt19937_64 rng(1234);
    SECTION("every small length pair") {
        for (std::size_t m = 0; m <= 40; ++m) {
            for (std::size_t n = 0; n <= 40; ++n) {
                const auto a = random_symbols(rng, m, 3);
                const auto b = random_symbols(rng, n, 3);
                REQUIRE(levenshtein_avx2(a, b) == levenshtein_scalar(a, b));
            }
        }
    }
    SECTION("random longer inputs and alphabets") {
        std::uniform_int_distribution<std::size_t> len(0, 400);
        std::uniform_int_distribution<Symbol> alpha(1, 50);
        for (int t = 0; t < 500; ++t) {
            const Symbol k = alpha(rng);
            const auto a = random_symbols(rng, len(rng), k);
            const auto b = random_symbols(rng, len(rng), k);
            REQUIRE(levenshtein_avx2(a, b) == levenshtein_scalar(a, b));
            REQUIRE(levenshtein_avx2(b, a) == levenshtein_scalar(a, b));
        }
    }
    SECTION("near-identical long sequences") {
        for (int t = 0; t < 50; ++t) {
            auto a = random_symbols(rng, 1000, 20);
            auto b = a;
            std::uniform_int_distribution<std::size_t> pos(0, b.size() - 1);
            for (int e = 0; e < 10; ++e) b[pos(rng)] = 99;
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(pos(rng)));
            REQUIRE(levenshtein_avx2(a, b) == levenshtein_scalar(a, b));
        }
    }
    SECTION("large symbol ids") {
        const std::vector<Symbol> a{0xFFFFFFFFu, 0x80000000u, 7}, b{0x80000000u, 0xFFFFFFFFu, 7};
        REQUIRE(levenshtein_avx2(a, b) == levenshtein_scalar(a, b));
    }
}

TEST_CASE("dispatch agrees with the scalar reference") {
    CHECK((active_isa() == Isa::Avx2) <= avx2_available());
    CHECK(isa_name(Isa::Scalar) == "scalar");
    CHECK(isa_name(Isa::Avx2) == "avx2");
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_symbols(rng, 64, 5);
        const auto b = random_symbols(rng, 70, 5);
        REQUIRE(levenshtein(a, b) == levenshtein_scalar(a, b));
    }
}

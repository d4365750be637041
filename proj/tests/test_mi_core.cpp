#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"
#include "oracles.hpp"

using namespace mipost;

TEST_CASE("empirical_mi examples") {
    CHECK(std::abs(empirical_mi(PosteriorCounts(2, 2, {2, 4, 3, 6}))) < 1e-12);
    CHECK(empirical_mi(PosteriorCounts(2, 2, {5, 0, 0, 5})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // Frozen from a 30-digit evaluation of the defining sum.
    CHECK(std::abs(empirical_mi(PosteriorCounts(2, 2, {8, 2, 4, 16})) - 0.172609243471068556) < 1e-14);
    CHECK_THROWS_AS(empirical_mi(PosteriorCounts(2, 2, {0, 0, 0, 0})), InputError);
}

TEST_CASE("i_max") {
    CHECK(i_max(2, 2) == doctest::Approx(std::log(2.0)));
    CHECK(i_max(1, 5) == 0.0);
    CHECK(i_max(3, 4) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("digamma") {
    CHECK(std::abs(digamma(1.0) + kEulerGamma) < 1e-13);
    CHECK(std::abs(digamma(2.0) - (digamma(1.0) + 1.0)) < 1e-13);
    CHECK(std::abs(digamma(11.0) - (-kEulerGamma + 2.9289682539682539683)) < 1e-13);
    for (int m = 1; m <= 200; ++m) {
        CHECK(std::abs(digamma(m) - oracle::digamma_integer(m)) < 1e-12);
    }
    // 30-digit reference values.
    CHECK(std::abs(digamma(0.5) - (-1.963510026021423479440976333)) < 1e-12);
    CHECK(std::abs(digamma(2.5) - 0.703156640645243187225690333668) < 1e-12);
    CHECK(std::abs(digamma(7.99) - 2.01430922204622379950928476203) < 1e-12);
    CHECK(std::abs(digamma(123.456) - 4.81182932382898541228662774193) < 1e-12);
    CHECK(std::abs(digamma(1000.0) - 6.90725519564881205205000611425) < 1e-12);
    CHECK(std::abs(digamma(1e-3) - (-1000.57557193181027965475671066)) < 1e-10);

    for (double x : {0.5, 1.0, 2.5, 10.0, 1000.0}) {
        CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12);
    }
    CHECK_THROWS_AS(digamma(0.0), NumericalError);
    CHECK_THROWS_AS(digamma(-2.5), NumericalError);
}

namespace {

std::vector<double> random_cells(std::mt19937_64& rng, std::size_t r, std::size_t s) {
    std::uniform_int_distribution<int> cell(0, 25);
    std::vector<double> cells(r * s);
    for (auto& c : cells) c = cell(rng);
    cells[0] += 1;  // never an all-zero table
    return cells;
}

}  // namespace

TEST_CASE("empirical_mi properties") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 5, s = 1 + rng() % 5;
        const auto cells = random_cells(rng, r, s);
        const PosteriorCounts pc(r, s, cells);
        const double j = empirical_mi(pc);

        oracle::Grid g(r, std::vector<double>(s));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < s; ++k) g[i][k] = cells[i * s + k];
        CHECK(std::abs(j - oracle::mutual_information(g)) < 1e-12);

        CHECK(std::abs(empirical_mi(pc.transposed()) - j) < 1e-12);
        CHECK(j <= i_max(r, s) + 1e-12);
        CHECK(j >= 0.0);

        // Column permutation.
        std::vector<std::size_t> perm(s);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> permuted(r * s);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < s; ++k) permuted[i * s + k] = cells[i * s + perm[k]];
        CHECK(std::abs(empirical_mi(PosteriorCounts(r, s, permuted)) - j) < 1e-12);
    }
}

TEST_CASE("empirical_mi vanishes exactly on rank-one tables") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> w(1, 9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng() % 4, s = 1 + rng() % 4;
        std::vector<double> a(r), b(s), cells(r * s);
        for (auto& v : a) v = w(rng);
        for (auto& v : b) v = w(rng);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < s; ++k) cells[i * s + k] = a[i] * b[k];
        CHECK(empirical_mi(PosteriorCounts(r, s, cells)) < 1e-12);
        if (r > 1 && s > 1) {
            cells[0] += 5;  // breaks rank one
            CHECK(empirical_mi(PosteriorCounts(r, s, cells)) > 1e-12);
        }
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"
#include "mipost/mi_missing.hpp"
#include "mipost/mi_moments.hpp"
#include "oracles.hpp"

using namespace mipost;

namespace {

const PriorSpec kRaw = PriorSpec::haldane();

}  // namespace

TEST_CASE("fill_estimate") {
    SUBCASE("row mass redistributed") {
        const ContingencyTable t(2, 2, {1, 1, 1, 1}, {2, 0});
        const auto pi = fill_estimate(t, kRaw);
        CHECK(pi[0] == doctest::Approx(1.0 / 3.0));
        CHECK(pi[1] == doctest::Approx(1.0 / 3.0));
        CHECK(pi[2] == doctest::Approx(1.0 / 6.0));
        CHECK(pi[3] == doctest::Approx(1.0 / 6.0));
        CHECK(std::abs(pi[0] + pi[1] + pi[2] + pi[3] - 1.0) < 1e-12);
    }
    SUBCASE("complete case gives relative frequencies") {
        const ContingencyTable t(2, 3, {3, 1, 4, 1, 5, 9});
        const auto pi = fill_estimate(t, kRaw);
        for (std::size_t k = 0; k < 6; ++k) CHECK(pi[k] == doctest::Approx(t.counts()[k] / 23.0));
    }
    SUBCASE("empty cells allowed") {
        const auto pi = fill_estimate(ContingencyTable(2, 2, {4, 0, 0, 4}), kRaw);
        CHECK(pi == std::vector<double>{0.5, 0.0, 0.0, 0.5});
    }
    SUBCASE("undefined fill") {
        const ContingencyTable t(2, 2, {0, 0, 2, 3}, {1, 0});
        CHECK_THROWS_AS(fill_estimate(t, kRaw), NumericalError);
        // A positive prior makes the row defined again.
        CHECK_NOTHROW(fill_estimate(t, PriorSpec::uniform()));
    }
    SUBCASE("both variables partially missing is rejected") {
        const ContingencyTable t(2, 2, {1, 2, 3, 4}, {1, 0}, {0, 1});
        CHECK_THROWS_AS(fill_estimate(t, kRaw), InputError);
        CHECK_THROWS_AS(mi_variance_missing(t, kRaw), InputError);
    }
}

TEST_CASE("mean for incomplete samples") {
    CHECK(std::abs(mi_mean_missing(ContingencyTable(2, 2, {8, 2, 4, 16}), kRaw) -
                   0.172609243471068556) < 1e-14);
    CHECK(mi_mean_missing(ContingencyTable(2, 2, {1, 1, 1, 1}, {2, 0}), kRaw) < 1e-15);
    CHECK(mi_mean_missing(ContingencyTable(2, 2, {3, 6, 1, 2}, {4, 7}), kRaw) < 1e-15);
}

TEST_CASE("variance for incomplete samples") {
    SUBCASE("rank-one fill has zero variance") {
        const auto mm = mi_variance_missing(ContingencyTable(2, 2, {1, 1, 1, 1}, {2, 0}), kRaw);
        CHECK(std::abs(mm.k_bar) < 1e-15);
        CHECK(std::abs(mm.j_bar) < 1e-15);
        CHECK(mm.variance < 1e-15);
        CHECK(mm.total == 6.0);
    }
    SUBCASE("matches the straight transcription") {
        const ContingencyTable t(2, 2, {8, 2, 4, 16}, {3, 5});
        const auto mm = mi_variance_missing(t, kRaw);
        const auto ref = oracle::missing_moments({{8, 2}, {4, 16}}, {3, 5});
        CHECK(std::abs(mm.variance - ref.variance) < 1e-12);
        CHECK(std::abs(mm.mean - ref.mean) < 1e-12);
        CHECK(std::abs(mm.k_bar - ref.k_bar) < 1e-12);
        CHECK(std::abs(mm.j_bar - ref.j_bar) < 1e-12);
        CHECK(std::abs(mm.q_bar - ref.q_bar) < 1e-12);
        CHECK(std::abs(mm.p_bar - ref.p_bar) < 1e-12);
        // 30-digit evaluation.
        CHECK(std::abs(mm.variance - 0.00966091460360968313877282241756578) < 1e-14);
        CHECK(std::abs(mm.p_bar - 0.0124281700803772719010858772899868) < 1e-13);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(mm.q_bar_i[i] > 0.0);
            CHECK(mm.q_bar_i[i] <= 1.0);
            CHECK(mm.rho_missing[i].has_value());
        }
        CHECK(mm.prior_extrapolated);
        CHECK_FALSE(mm.transposed);
    }
    SUBCASE("a 3x4 table against the transcription") {
        const ContingencyTable t(3, 4, {5, 1, 2, 7, 3, 3, 9, 1, 2, 8, 1, 4}, {2, 0, 6});
        const auto mm = mi_variance_missing(t, kRaw);
        const auto ref =
            oracle::missing_moments({{5, 1, 2, 7}, {3, 3, 9, 1}, {2, 8, 1, 4}}, {2, 0, 6});
        CHECK(std::abs(mm.variance - ref.variance) < 1e-12);
        CHECK(mm.q_bar_i[1] == 1.0);
        CHECK_FALSE(mm.rho_missing[1].has_value());
    }
    SUBCASE("missing feature values route through the transpose") {
        const ContingencyTable t(3, 2, {5, 1, 2, 7, 3, 3}, {}, {4, 1});
        const auto mm = mi_variance_missing(t, PriorSpec::uniform());
        CHECK(mm.transposed);
        CHECK(mm.rows == 3);
        CHECK(mm.cols == 2);
        // Direct evaluation on the transposed orientation.
        const auto ref = oracle::missing_moments({{6, 3, 4}, {2, 8, 4}}, {4, 1});
        CHECK(std::abs(mm.variance - ref.variance) < 1e-12);
        CHECK(std::abs(mm.mean - ref.mean) < 1e-12);
        const auto pi = fill_estimate(t, PriorSpec::uniform());
        CHECK(pi == mm.pi_hat);
        // Grid comes back in feature x class orientation.
        CHECK(mm.pi_hat[0] == doctest::Approx((17.0 / 32.0) * 6.0 / 13.0));
    }
    CHECK(mi_variance_missing(ContingencyTable(2, 2, {1, 2, 3, 4}, {1, 0}), PriorSpec::jeffreys())
              .prior_extrapolated);
}

TEST_CASE("complete-case reduction") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> cell(1, 60);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 1 + rng() % 5, s = 1 + rng() % 5;
        std::vector<std::uint64_t> counts(r * s);
        for (auto& c : counts) c = cell(rng);
        const ContingencyTable t(r, s, counts);
        const auto pc = apply_prior(t, PriorSpec::uniform());
        const auto m = mi_variance_approx(pc);
        const auto mm = mi_variance_missing(t, PriorSpec::uniform());
        CHECK(std::abs(mm.mean - empirical_mi(pc)) < 1e-12);
        CHECK(std::abs(mm.variance - (m.k_term - m.j_term * m.j_term) / pc.total()) < 1e-12);
        CHECK(std::abs(mm.k_bar - m.k_term) < 1e-12);
        CHECK(std::abs(mm.j_bar - m.j_term) < 1e-12);
        CHECK(std::abs(mm.q_bar - 1.0) < 1e-12);
        CHECK(mm.p_bar == 0.0);
        double sum = 0;
        for (double p : mm.pi_hat) sum += p;
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("missing counts shrinking to zero approach the complete case") {
    const PosteriorCounts pc(2, 3, {8, 2, 5, 4, 16, 3});
    const std::vector<double> none{0.0, 0.0};
    const auto complete = mi_variance_missing(pc, none);
    double prev = 1e9;
    for (double m : {1.0, 1e-2, 1e-4, 1e-6, 1e-8}) {
        const std::vector<double> miss{m, 2.0 * m};
        const auto mm = mi_variance_missing(pc, miss);
        const double gap = std::abs(mm.variance - complete.variance) +
                           std::abs(mm.mean - complete.mean) + std::abs(mm.q_bar - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-8);
}

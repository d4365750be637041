#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mipost/errors.hpp"
#include "mipost/experiment.hpp"
#include "synthetic.hpp"

using namespace mipost;

TEST_CASE("paired t test pins") {
    const std::vector<std::uint8_t> a{1, 0, 1, 1, 0, 1};
    const auto same = paired_t_test(a, a, 6);
    CHECK(same.t == 0.0);
    CHECK_FALSE(same.significant);

    const std::vector<std::uint8_t> x{1, 0, 1, 0}, y{0, 0, 0, 0};
    const auto r = paired_t_test(x, y, 4);
    CHECK(r.t == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.df == 3);
    CHECK(r.critical == doctest::Approx(3.182446305284263).epsilon(1e-12));
    CHECK_FALSE(r.significant);
    CHECK(paired_t_test(y, x, 4).t == -r.t);

    const std::vector<std::uint8_t> ones{1, 1, 1}, zeros{0, 0, 0};
    const auto constant = paired_t_test(ones, zeros, 3);
    CHECK(std::isinf(constant.t));
    CHECK(constant.significant);
    CHECK_THROWS_AS(paired_t_test(x, y, 1), InputError);
    CHECK_THROWS_AS(paired_t_test(x, y, 5), InputError);
    // Standard table values.
    CHECK(t_critical_05(1) == doctest::Approx(12.706).epsilon(1e-4));
    CHECK(t_critical_05(10) == doctest::Approx(2.228).epsilon(1e-3));
    CHECK(t_critical_05(120) == doctest::Approx(1.980).epsilon(1e-3));
}

TEST_CASE("compare_runs matches per-k t tests") {
    DrawStream rng(3, 3);
    FilterRun a, b;
    for (int k = 0; k < 300; ++k) {
        a.correct.push_back(rng.uniform() < 0.7);
        b.correct.push_back(rng.uniform() < 0.6);
    }
    const auto cmp = compare_runs(a, b);
    for (std::size_t k = 2; k <= 300; k += 37) {
        const auto r = paired_t_test(a.correct, b.correct, k);
        CHECK(cmp.t[k - 1] == r.t);
        CHECK(static_cast<bool>(cmp.significant[k - 1]) == r.significant);
    }
    CHECK(cmp.t[0] == 0.0);
}

TEST_CASE("one-instance data set") {
    auto ds = synthetic::make(synthetic::Spec{1, {0.1}, 1, 2}, 1);
    const auto rep = run_incremental(ds, FilterConfig{}, {FilterKind::f, FilterKind::ff});
    CHECK(rep.instances == 1);
    CHECK(rep.run(FilterKind::f).predicted == std::vector<std::size_t>{0});
    CHECK(rep.run(FilterKind::ff).selected_count == std::vector<std::size_t>{0});
}

TEST_CASE("class copied from attribute 0") {
    auto ds = synthetic::make(synthetic::Spec{200, {0.0}, 3, 3}, 7);
    const auto rep = run_incremental(ds, FilterConfig{}, {FilterKind::ff});
    const auto& ff = rep.run(FilterKind::ff);
    CHECK(ff.final_accuracy > 0.9);
    // Kept from early on: present in every subset after the first 20 instances.
    std::size_t first_kept = 0;
    while (first_kept < ff.selected_count.size() && ff.selected_count[first_kept] == 0) ++first_kept;
    CHECK(first_kept < 20);
    for (std::size_t t = 20; t < 200; ++t) CHECK(ff.correct[t] == 1);
}

TEST_CASE("pure noise: FF < F < BF on average") {
    auto ds = synthetic::make(synthetic::Spec{500, {}, 10, 2}, 11);
    const auto rep =
        run_incremental(ds, FilterConfig{}, {FilterKind::f, FilterKind::ff, FilterKind::bf});
    const double f = rep.run(FilterKind::f).average_selected;
    const double ff = rep.run(FilterKind::ff).average_selected;
    const double bf = rep.run(FilterKind::bf).average_selected;
    CHECK(ff < f);
    CHECK(f < bf);
    CHECK(bf <= 10.0);
}

TEST_CASE("report invariants, formats and round trip") {
    auto ds = prepare(synthetic::make(synthetic::graded_benchmark(120), 5), MissingMode::drop_missing, 9);
    const auto rep = run_incremental(ds, FilterConfig{},
                                     {FilterKind::f, FilterKind::ff, FilterKind::bf}, 9);
    CHECK(rep.pairs.size() == 3);
    CHECK(rep.config.seed == 9);
    for (const auto& run : rep.runs) {
        CHECK(run.order_hash == ds.order_hash());
        CHECK(run.running_accuracy.size() == 120);
        for (std::size_t t = 0; t < 120; ++t) {
            CHECK(run.running_accuracy[t] >= 0.0);
            CHECK(run.running_accuracy[t] <= 1.0);
            if (t > 0) {
                CHECK(std::abs(run.running_accuracy[t] - run.running_accuracy[t - 1]) <=
                      1.0 / static_cast<double>(t + 1) + 1e-15);
            }
        }
        CHECK(run.average_selected <= 10.0);
    }

    const auto dir = std::filesystem::temp_directory_path() / "mipost_test_report";
    std::filesystem::create_directories(dir);
    write_report(rep, (dir / "r.json").string(), ReportFormat::json);
    CHECK(read_report((dir / "r.json").string()) == rep);
    write_report(rep, (dir / "r.csv").string(), ReportFormat::csv);
    std::ifstream in(dir / "r.csv");
    std::string line;
    std::size_t lines = 0;
    std::getline(in, line);
    CHECK(line == "instance,accuracy_f,accuracy_ff,accuracy_bf,selected_f,selected_ff,selected_bf,"
                  "significant_f_ff,significant_f_bf,significant_ff_bf");
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 120);
    CHECK_THROWS_AS(write_report(rep, (dir / "missing_dir" / "r.csv").string(), ReportFormat::csv),
                    std::system_error);

    auto small = synthetic::make(synthetic::Spec{3, {0.2}, 1, 2}, 2);
    const auto three = run_incremental(small, FilterConfig{}, {FilterKind::f});
    const auto csv = report_to_csv(three);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("missing values kept: filters see partial counts") {
    std::istringstream in(
        "a,b,class\nx,p,yes\ny,q,no\n?,p,yes\nx,?,yes\ny,q,no\nx,p,yes\ny,p,no\n?,q,no\n");
    const auto ds = parse_dataset(in, {});
    const auto kept = prepare(ds, MissingMode::keep_missing, 1);
    const auto rep = run_incremental(kept, FilterConfig{}, {FilterKind::f, FilterKind::bf}, 1,
                                     MissingMode::keep_missing);
    CHECK(rep.instances == 8);
    CHECK(rep.config.missing == "keep");
    CHECK_THROWS_AS(run_incremental(kept, FilterConfig{}, {FilterKind::f}, 1), InputError);
}

TEST_CASE("configuration errors surface") {
    auto ds = synthetic::make(synthetic::Spec{10, {0.2}, 1, 2}, 2);
    FilterConfig zero;
    zero.epsilon = 0.0;
    CHECK_THROWS_AS(run_incremental(ds, zero, {FilterKind::ff}), ConfigError);
    CHECK_NOTHROW(run_incremental(ds, zero, {FilterKind::f}));
    ds.instances.clear();
    CHECK_THROWS_AS(run_incremental(ds, FilterConfig{}, {FilterKind::f}), InputError);
}

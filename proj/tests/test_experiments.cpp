#include "fracpow/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace fracpow;

TEST_CASE("observed rate formula") {
    // errors {4e-3, 1e-3} with h halving -> rate 2
    CHECK(observed_rate(4e-3, 1e-3, 0.2, 0.1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(observed_rate(1e-2, 1e-2, 0.2, 0.1) == doctest::Approx(0.0));
}

TEST_CASE("expected rate for the checkerboard data") {
    const double betas[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const double rates[] = {0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.0, 2.0};
    for (int i = 0; i < 9; ++i)
        CHECK(expected_rate(betas[i]) == doctest::Approx(rates[i]).epsilon(1e-12));
}

TEST_CASE("table runner output is deterministic") {
    const std::vector<double> betas = {0.5};
    const std::vector<double> ks = {1.0, 0.5};
    const auto rows1 = run_table3(betas, ks);
    const auto rows2 = run_table3(betas, ks);
    CHECK(table_csv(rows1) == table_csv(rows2));
    CHECK(rows1.size() == 2);
    CHECK(rows1[0].nsys == 11);
    CHECK(rows1[1].nsys == 41);
    // csv schema: header + one line per row, LF endings
    const std::string csv = table_csv(rows1);
    CHECK(csv.rfind("scheme,beta,param,sup_error,nsys\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("convergence runner on a short mesh ladder") {
    const std::vector<int> meshes = {8, 16};
    const ConvergenceResult r = run_convergence(Beta(0.5), meshes);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].n == 8);
    CHECK(r.rows[1].has_oroc);
    CHECK(!r.rows[0].has_oroc);
    CHECK(r.rows[1].l2_error < r.rows[0].l2_error);
    // short ladder, generous band around the theoretical 1.5
    CHECK(r.aroc > 1.0);
    CHECK(r.aroc < 2.0);
    CHECK(r.expected == doctest::Approx(1.5));
    CHECK(r.quad_bound <= 0.01 * r.rows[1].l2_error * 1.5);

    const std::vector<ConvergenceResult> all = {r};
    const std::string csv = convergence_csv(all);
    CHECK(csv.rfind("beta,n,h,l2_error,oroc,aroc,expected_rate\n", 0) == 0);
    CHECK(convergence_csv(all) == csv);

    CHECK_THROWS_AS(run_convergence(Beta(0.5), std::vector<int>{7, 14}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_convergence(Beta(0.5), std::vector<int>{16, 8}),
                    std::invalid_argument);
}

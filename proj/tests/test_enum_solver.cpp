#include "ortree/enum_solver.hpp"

#include "support/instances.hpp"
#include "support/tictactoe.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

using namespace ortree;

using testsupport::random_config;
using testsupport::random_instance;

TEST_CASE("worst-case evaluation counts") {
    CHECK(worst_case_evals(98, 3) == 156947);
    CHECK(worst_case_evals(100, 1) == 100);
    CHECK(worst_case_evals(5, 5) == 31);
    CHECK(worst_case_evals(27, 2) == 378);
    CHECK(worst_case_evals(5000, 200) == kEvalSaturation);
}

TEST_CASE("enumeration agrees with brute force on random instances") {
    std::mt19937 rng(2024);
    for (int t = 0; t < 400; ++t) {
        auto B = random_instance(rng);
        const auto s = NodeStats::of(B);
        auto cfg = random_config(rng);
        auto fast = enum_solve(B, s, cfg);
        auto slow = brute_force_solve(B, s, cfg);
        INFO("trial " << t);
        REQUIRE(fast.feasible == slow.feasible);
        CHECK(fast.optimal);
        CHECK(fast.evaluations <= worst_case_evals(B.m(), cfg.max_rules));
        if (!slow.feasible) continue;
        CHECK(fast.objective == slow.objective);
        CHECK(fast.best == slow.best);
        CHECK(fast.best_eval == slow.best_eval);
        CHECK(slow.evaluations == worst_case_evals(B.m(), cfg.max_rules));
    }
}

TEST_CASE("a single question budget evaluates every question once") {
    std::mt19937 rng(9);
    for (int t = 0; t < 50; ++t) {
        auto B = random_instance(rng);
        SolverConfig cfg;
        cfg.max_rules = 1;
        cfg.min_node_size = 1;
        auto r = enum_solve(B, NodeStats::of(B), cfg);
        CHECK(r.evaluations == B.m());
    }
}

TEST_CASE("results do not depend on the worker count") {
    std::mt19937 rng(31);
    for (int t = 0; t < 60; ++t) {
        auto B = random_instance(rng);
        auto cfg = random_config(rng);
        auto one = enum_solve(B, NodeStats::of(B), cfg);
        cfg.threads = 4;
        auto four = enum_solve(B, NodeStats::of(B), cfg);
        CHECK(one.best == four.best);
        CHECK(one.objective == four.objective);
        CHECK(one.evaluations == four.evaluations);
        CHECK(one.feasible == four.feasible);
    }
}

TEST_CASE("budget-limited search returns the best evaluated set") {
    auto B = testsupport::tictactoe_matrix();
    SolverConfig cfg;
    cfg.min_node_size = 1;
    cfg.node_budget = 10;
    auto r = enum_solve(B, NodeStats::of(B), cfg);
    CHECK_FALSE(r.optimal);
    CHECK(r.evaluations == 10);
    // the first ten evaluations are the singletons 0..9
    std::int64_t best = INT64_MAX;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < 10; ++k) {
        auto e = eval_ruleset(B, {{k}});
        if (e.nu < best) {
            best = e.nu;
            arg = k;
        }
    }
    CHECK(r.objective == best);
    CHECK(r.best == RuleSet{{arg}});
}

TEST_CASE("tic-tac-toe endgame root split") {
    auto B = testsupport::tictactoe_matrix();
    REQUIRE(B.n == 958);
    REQUIRE(B.m() == 27);
    REQUIRE(B.positives() == 626);
    SolverConfig cfg;
    cfg.max_rules = 2;
    cfg.min_node_size = 1;
    auto r = enum_solve(B, NodeStats::of(B), cfg);
    CHECK(r.objective == 95336);
    CHECK(r.best == RuleSet{{13}});
    CHECK(r.evaluations == 378);
    CHECK(r.optimal);
}

TEST_CASE("zoo-1 root split", "[data]") {
    const char *path = std::getenv("ORTREE_ZOO1");
    if (!path) SKIP("set ORTREE_ZOO1 to the dl8.5 zoo-1 file");
    auto B = load_dl85(path);
    SolverConfig cfg;
    cfg.max_rules = 2;
    cfg.min_node_size = 1;
    auto r = enum_solve(B, NodeStats::of(B), cfg);
    CHECK(r.objective == 0);
    CHECK(r.best.size() == 1);
    CHECK(r.evaluations == 36);
}

TEST_CASE("solver input errors") {
    auto B = matrix_from_dense({{1}, {0}}, {1, 0});
    SolverConfig cfg;
    CHECK_THROWS(enum_solve(B, {2, 0}, cfg));
    cfg.max_rules = 0;
    CHECK_THROWS(enum_solve(B, NodeStats::of(B), cfg));
    BinaryMatrix empty = B;
    empty.columns.clear();
    empty.questions.clear();
    CHECK_THROWS_WITH(enum_solve(empty, NodeStats::of(B), SolverConfig{}), "empty question pool");

    std::mt19937 rng(1);
    std::vector<std::vector<std::uint8_t>> rows(10, std::vector<std::uint8_t>(200, 0));
    std::vector<std::uint8_t> y(10, 0);
    y[0] = 1;
    auto big = matrix_from_dense(rows, y);
    SolverConfig c3;
    c3.max_rules = 3;
    CHECK_THROWS(brute_force_solve(big, NodeStats::of(big), c3));
}

TEST_CASE("infeasible node size leaves no solution") {
    auto B = matrix_from_dense({{1}, {0}, {1}, {0}}, {1, 0, 1, 0});
    SolverConfig cfg;
    cfg.min_node_size = 3;
    auto r = enum_solve(B, NodeStats::of(B), cfg);
    CHECK_FALSE(r.feasible);
}

TEST_CASE("dynamic minimum node size") {
    SolverConfig cfg;
    CHECK(cfg.effective_min_node_size(1) == 1);
    CHECK(cfg.effective_min_node_size(99) == 9);
    CHECK(cfg.effective_min_node_size(100) == 10);
    cfg.min_size_policy = MinSizePolicy::FourthRoot;
    CHECK(cfg.effective_min_node_size(10000) == 10);
    CHECK(cfg.effective_min_node_size(15) == 1);
    cfg.min_node_size = 7;
    CHECK(cfg.effective_min_node_size(10000) == 7);
}

#pragma once

#include "ortree/splitcore.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace ortree {

enum class MinSizePolicy : std::uint8_t { Sqrt, FourthRoot };

const char *to_string(MinSizePolicy p);
MinSizePolicy min_size_policy_from_string(const std::string &s);

struct SolverConfig {
    std::size_t max_rules = 2;
    /// 0 selects the dynamic policy below.
    std::size_t min_node_size = 0;
    MinSizePolicy min_size_policy = MinSizePolicy::Sqrt;
    bool no_same_gender_children = false;
    Objective objective = Objective::Gini;
    std::optional<double> time_limit; // seconds
    std::optional<std::uint64_t> node_budget;
    unsigned threads = 1;

    std::size_t effective_min_node_size(std::size_t n) const;
    void validate() const;
    bool operator==(const SolverConfig &) const = default;
};

struct SolveResult {
    RuleSet best;
    SplitEval best_eval;
    std::int64_t objective = 0;
    std::uint64_t evaluations = 0;
    bool optimal = true;
    bool feasible = false;
    double seconds = 0.0;
};

/// Breadth-first implicit enumeration over rule sets of size 1..max_rules.
/// Children extend a set only with larger indices. A set is not expanded once
/// its bound reaches the incumbent, or when it is feasible and its bound is
/// already attained. Among equal optima the smallest, then lexicographically
/// first, set is returned.
SolveResult enum_solve(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg);

/// Exhaustive search with the same feasibility rules and tie-break.
SolveResult brute_force_solve(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                              std::uint64_t cap = 1'000'000);

/// sum_{i=1..max_rules} C(m, i), saturated at 2^63.
std::uint64_t worst_case_evals(std::size_t m, std::size_t max_rules);
inline constexpr std::uint64_t kEvalSaturation = std::uint64_t{1} << 63;

/// True when S (with evaluation e) may become the incumbent.
bool is_feasible(const SplitEval &e, NodeStats stats, const SolverConfig &cfg);

} // namespace ortree

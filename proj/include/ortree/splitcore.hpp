#pragma once

#include "ortree/binarizer.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ortree {

struct NodeStats {
    std::int64_t P = 0;
    std::int64_t N = 0;

    std::int64_t n() const { return P + N; }
    static NodeStats of(const BinaryMatrix &B);
    bool operator==(const NodeStats &) const = default;
};

/// Sorted, distinct question indices; the split asks "any of these?".
struct RuleSet {
    std::vector<std::size_t> indices;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
    bool operator==(const RuleSet &) const = default;
    /// Size first, then lexicographic.
    bool operator<(const RuleSet &other) const;
};

struct SplitEval {
    std::int64_t TP = 0, FP = 0, TN = 0, FN = 0;
    std::int64_t nu = 0;
    std::int64_t tau = 0;
    std::int64_t z_sum = 0;

    bool operator==(const SplitEval &) const = default;
};

double gini(NodeStats s);

/// nu = P*FP + N*FN - 2*FN*FP, which equals TP*FP + TN*FN.
std::int64_t nu_value(NodeStats s, std::int64_t FP, std::int64_t FN);

/// Lower bound on nu over every superset of a rule set with these counts.
std::int64_t tau_bound(NodeStats s, std::int64_t FP, std::int64_t FN);

/// Fills in all fields from the false positive / false negative counts.
SplitEval eval_counts(NodeStats s, std::int64_t FP, std::int64_t FN);

SplitEval eval_ruleset(const BinaryMatrix &B, const RuleSet &S);

/// Rows answering yes to at least one question of S.
RowBits ruleset_bits(const BinaryMatrix &B, const RuleSet &S);

/// Gini reduction with squared-proportion child weights. Throws on an empty child.
double delta_gini(NodeStats parent, const SplitEval &e);
double delta_gini_closed(NodeStats parent, const SplitEval &e);

/// Misclassified cases when the yes-side is predicted positive.
std::int64_t error_objective(const SplitEval &e);

/// Sum over positive/negative pairs of (1 - z_i + z_j): N*FN + P*FP.
std::int64_t error_objective_raw(NodeStats s, const SplitEval &e);

enum class Objective : std::uint8_t { Gini, Error };

const char *to_string(Objective o);
Objective objective_from_string(const std::string &s);

/// The value the solver minimizes for `o` (nu or the raw error sum).
std::int64_t objective_value(Objective o, NodeStats s, const SplitEval &e);

/// Lower bound on objective_value over all supersets.
std::int64_t objective_bound(Objective o, NodeStats s, const SplitEval &e);

std::string describe(const BinaryMatrix &B, const RuleSet &S);

} // namespace ortree

#include "ortree/splitcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace ortree {

NodeStats NodeStats::of(const BinaryMatrix &B) {
    const auto P = static_cast<std::int64_t>(B.positives());
    return {P, static_cast<std::int64_t>(B.n) - P};
}

bool RuleSet::operator<(const RuleSet &other) const {
    if (indices.size() != other.indices.size()) return indices.size() < other.indices.size();
    return indices < other.indices;
}

double gini(NodeStats s) {
    if (s.P < 0 || s.N < 0 || s.n() < 1) throw std::invalid_argument("gini of an empty node");
    const double n = static_cast<double>(s.n());
    return 2.0 * static_cast<double>(s.P) * static_cast<double>(s.N) / (n * n);
}

std::int64_t nu_value(NodeStats s, std::int64_t FP, std::int64_t FN) {
    return s.P * FP + s.N * FN - 2 * FN * FP;
}

std::int64_t tau_bound(NodeStats s, std::int64_t FP, std::int64_t FN) {
    // Compare 2*FN with P rather than FN with P/2 to stay in integers.
    const bool few_fn = 2 * FN < s.P;
    const bool many_fp = 2 * FP > s.N;
    if (few_fn && many_fp) return nu_value(s, FP, FN);
    if (few_fn) return s.P * FP;
    if (many_fp) return s.N * (s.P - FN);
    return 0;
}

SplitEval eval_counts(NodeStats s, std::int64_t FP, std::int64_t FN) {
    if (FP < 0 || FP > s.N || FN < 0 || FN > s.P) throw std::invalid_argument("counts out of range");
    SplitEval e;
    e.FP = FP;
    e.FN = FN;
    e.TP = s.P - FN;
    e.TN = s.N - FP;
    e.z_sum = e.TP + e.FP;
    e.nu = nu_value(s, FP, FN);
    e.tau = tau_bound(s, FP, FN);
    return e;
}

RowBits ruleset_bits(const BinaryMatrix &B, const RuleSet &S) {
    RowBits z(B.n);
    for (auto k : S.indices) {
        if (k >= B.m()) throw std::out_of_range("question index out of range");
        z |= B.columns[k];
    }
    return z;
}

SplitEval eval_ruleset(const BinaryMatrix &B, const RuleSet &S) {
    const auto z = ruleset_bits(B, S);
    const auto s = NodeStats::of(B);
    const auto tp = static_cast<std::int64_t>(z.count_and(B.positive));
    const auto zs = static_cast<std::int64_t>(z.count());
    return eval_counts(s, zs - tp, s.P - tp);
}

double delta_gini(NodeStats parent, const SplitEval &e) {
    const std::int64_t left = e.TP + e.FP;
    const std::int64_t right = e.TN + e.FN;
    if (left == 0 || right == 0) throw std::invalid_argument("degenerate split");
    const double n = static_cast<double>(parent.n());
    const double wl = static_cast<double>(left) / n;
    const double wr = static_cast<double>(right) / n;
    return gini(parent) - wl * wl * gini({e.TP, e.FP}) - wr * wr * gini({e.FN, e.TN});
}

double delta_gini_closed(NodeStats parent, const SplitEval &e) {
    if (e.z_sum == 0 || e.z_sum == parent.n()) throw std::invalid_argument("degenerate split");
    const double n = static_cast<double>(parent.n());
    const double num = 2.0 * static_cast<double>(parent.P * parent.N - (e.TP * e.FP + e.TN * e.FN));
    return num / (n * n);
}

std::int64_t error_objective(const SplitEval &e) { return e.FP + e.FN; }

std::int64_t error_objective_raw(NodeStats s, const SplitEval &e) { return s.N * e.FN + s.P * e.FP; }

const char *to_string(Objective o) { return o == Objective::Gini ? "gini" : "error"; }

Objective objective_from_string(const std::string &s) {
    if (s == "gini") return Objective::Gini;
    if (s == "error") return Objective::Error;
    throw std::invalid_argument("unknown objective '" + s + "'");
}

std::int64_t objective_value(Objective o, NodeStats s, const SplitEval &e) {
    return o == Objective::Gini ? e.nu : error_objective_raw(s, e);
}

std::int64_t objective_bound(Objective o, NodeStats s, const SplitEval &e) {
    // Adding questions never lowers FP, and FN can fall to zero.
    return o == Objective::Gini ? e.tau : s.P * e.FP;
}

std::string describe(const BinaryMatrix &B, const RuleSet &S) {
    std::string out;
    for (std::size_t i = 0; i < S.indices.size(); ++i) {
        if (i) out += " OR ";
        out += B.questions.at(S.indices[i]).describe();
    }
    return out;
}

} // namespace ortree

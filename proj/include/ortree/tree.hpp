#pragma once

#include "ortree/enum_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ortree {

struct TreeConfig {
    SolverConfig solver;
    BinarizeConfig binarize;
    /// A node whose majority class reaches this fraction is not split.
    double stop_prob = 0.95;
    std::optional<std::size_t> max_depth;
    std::optional<std::size_t> max_leaves;

    void validate() const;
    bool operator==(const TreeConfig &) const = default;
};

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    bool operator==(const ColumnSchema &) const = default;
};

struct TreeNode {
    std::size_t id = 0;
    std::size_t depth = 0;
    NodeStats stats;
    /// Indices into Tree::questions; empty for a leaf.
    std::vector<std::size_t> rule;
    std::optional<std::size_t> yes;
    std::optional<std::size_t> no;
    std::string label;
    double prob_positive = 0.0;
    // how the split was found
    double delta_gini = 0.0;
    std::int64_t objective = 0;
    std::uint64_t evaluations = 0;
    bool separable = false;

    bool is_leaf() const { return rule.empty(); }
    bool operator==(const TreeNode &) const = default;
};

/// Nodes are stored in preorder; nodes[i].id == i and nodes[0] is the root.
struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<Question> questions;
    std::vector<ColumnSchema> columns;
    std::string target_name;
    std::string positive_label;
    std::string negative_label;
    TreeConfig config;

    const TreeNode &root() const { return nodes.front(); }
    std::size_t leaf_count() const;
    std::size_t depth() const;
    bool operator==(const Tree &) const = default;
};

/// Grows a tree for the 0/1 target `y`. The negative label is the other class
/// for two-class data and "other" otherwise.
Tree grow(const Dataset &d, const BinaryTarget &y, const TreeConfig &cfg);

/// Collapses bottom-most splits until at most `max_leaves` leaves remain.
Tree prune_to_max_leaves(Tree t, std::size_t max_leaves);

enum class EnsembleMode : std::uint8_t { OneVsRest, Vote };

const char *to_string(EnsembleMode m);
EnsembleMode ensemble_mode_from_string(const std::string &s);

struct Ensemble {
    EnsembleMode mode = EnsembleMode::OneVsRest;
    /// One-vs-rest: tree i scores classes[i]. Vote: {positive, negative}.
    std::vector<std::string> classes;
    std::vector<Tree> trees;
    bool operator==(const Ensemble &) const = default;
};

/// One tree per class, each with that class as positive.
Ensemble grow_multiclass(const Dataset &d, const TreeConfig &cfg);

/// Nine trees over max_rules {1,2,3} x node size {0,1,10}; everything else from `base`.
Ensemble grow_vote_ensemble(const Dataset &d, const BinaryTarget &y, const TreeConfig &base);

std::string negative_label_for(const Dataset &d, const std::string &positive_label);

/// Whether row `row` of `col` answers yes. Throws DataError on a missing value.
bool answers_yes(const Question &q, const Column &col, std::size_t row);

} // namespace ortree

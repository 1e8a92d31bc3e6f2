#include "ortree/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ortree {

namespace {

class Grower {
public:
    Grower(const Dataset &d, const BinaryTarget &y, const TreeConfig &cfg, Tree &t)
        : d_(d), y_(y), cfg_(cfg), t_(t) {}

    std::size_t node(const std::vector<std::size_t> &rows, std::size_t depth) {
        const std::size_t id = t_.nodes.size();
        t_.nodes.emplace_back();
        {
            auto &nd = t_.nodes[id];
            nd.id = id;
            nd.depth = depth;
            for (auto r : rows) nd.stats.P += y_.y[r];
            nd.stats.N = static_cast<std::int64_t>(rows.size()) - nd.stats.P;
            nd.prob_positive = static_cast<double>(nd.stats.P) / static_cast<double>(rows.size());
            nd.label = nd.stats.P > nd.stats.N ? t_.positive_label : t_.negative_label;
        }
        const NodeStats s = t_.nodes[id].stats;
        const std::size_t n = rows.size();
        const auto major = static_cast<double>(std::max(s.P, s.N));
        if (major >= cfg_.stop_prob * static_cast<double>(n)) return id;
        if (n < 2 * cfg_.solver.effective_min_node_size(n)) return id;
        if (cfg_.max_depth && depth >= *cfg_.max_depth) return id;

        auto B = try_build_matrix(d_, y_, cfg_.binarize, rows);
        if (!B) return id;

        std::vector<std::size_t> yes_rows, no_rows;
        std::vector<std::size_t> rule;
        SplitEval eval;
        bool separable = false;
        std::uint64_t evaluations = 0;
        std::int64_t objective = 0;
        if (B->separable) {
            const Question &q = *B->separable;
            const auto &col = d_.columns[q.column];
            for (auto r : rows) (answers_yes(q, col, r) ? yes_rows : no_rows).push_back(r);
            rule.push_back(add_question(q));
            eval = eval_counts(s, 0, 0);
            separable = true;
        } else {
            auto res = enum_solve(*B, s, cfg_.solver);
            if (!res.feasible) return id;
            eval = res.best_eval;
            if (eval.z_sum == 0 || eval.z_sum == s.n()) return id;
            if (!(delta_gini_closed(s, eval) > 0)) return id;
            const auto z = ruleset_bits(*B, res.best);
            for (std::size_t i = 0; i < n; ++i) (z.test(i) ? yes_rows : no_rows).push_back(rows[i]);
            for (auto k : res.best.indices) rule.push_back(add_question(B->questions[k]));
            evaluations = res.evaluations;
            objective = res.objective;
        }

        {
            auto &nd = t_.nodes[id];
            nd.rule = std::move(rule);
            nd.delta_gini = delta_gini(s, eval);
            nd.objective = objective;
            nd.evaluations = evaluations;
            nd.separable = separable;
        }
        const auto yes = node(yes_rows, depth + 1);
        const auto no = node(no_rows, depth + 1);
        t_.nodes[id].yes = yes;
        t_.nodes[id].no = no;
        return id;
    }

private:
    std::size_t add_question(const Question &q) {
        t_.questions.push_back(q);
        return t_.questions.size() - 1;
    }

    const Dataset &d_;
    const BinaryTarget &y_;
    const TreeConfig &cfg_;
    Tree &t_;
};

std::int64_t leaf_errors(const Tree &t, const TreeNode &nd) {
    return nd.label == t.positive_label ? nd.stats.N : nd.stats.P;
}

// Renumbers reachable nodes in preorder and drops unused questions.
Tree compact(const Tree &t) {
    Tree out = t;
    out.nodes.clear();
    out.questions.clear();
    std::vector<std::size_t> qmap(t.questions.size(), SIZE_MAX);
    auto rec = [&](auto &&self, std::size_t old) -> std::size_t {
        const std::size_t id = out.nodes.size();
        out.nodes.push_back(t.nodes[old]);
        out.nodes[id].id = id;
        for (auto &k : out.nodes[id].rule) {
            if (qmap[k] == SIZE_MAX) {
                qmap[k] = out.questions.size();
                out.questions.push_back(t.questions[k]);
            }
            k = qmap[k];
        }
        if (!t.nodes[old].is_leaf()) {
            const auto y = self(self, *t.nodes[old].yes);
            const auto n = self(self, *t.nodes[old].no);
            out.nodes[id].yes = y;
            out.nodes[id].no = n;
        }
        return id;
    };
    rec(rec, 0);
    return out;
}

} // namespace

void TreeConfig::validate() const {
    solver.validate();
    binarize.validate();
    if (!(stop_prob > 0.5 && stop_prob <= 1.0)) throw std::invalid_argument("stop_prob must be in (0.5, 1]");
    if (max_leaves && *max_leaves < 2) throw std::invalid_argument("max_leaves must be >= 2");
}

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
    std::size_t d = 0;
    for (const auto &n : nodes) d = std::max(d, n.depth);
    return d;
}

bool answers_yes(const Question &q, const Column &col, std::size_t row) {
    if (col.is_missing(row))
        throw DataError("missing value at row " + std::to_string(row + 1) + ", column " + col.name);
    if (q.op == QuestionOp::In) {
        if (col.kind != ColumnKind::Categorical)
            throw DataError("column '" + col.name + "' is numeric but the model expects categorical");
        return q.answers_yes(col.tokens[row]);
    }
    if (col.kind != ColumnKind::Numeric)
        throw DataError("column '" + col.name + "' is categorical but the model expects numeric");
    return q.answers_yes(col.numbers[row]);
}

std::string negative_label_for(const Dataset &d, const std::string &positive_label) {
    if (d.classes.size() == 2) return d.classes[0] == positive_label ? d.classes[1] : d.classes[0];
    return "other";
}

Tree grow(const Dataset &d, const BinaryTarget &y, const TreeConfig &cfg) {
    cfg.validate();
    if (y.size() != d.n) throw std::invalid_argument("target length does not match dataset");
    const auto P = y.positives();
    if (P == 0 || P == d.n) throw DataError("training data must contain both classes");

    Tree t;
    t.config = cfg;
    t.target_name = d.target_name;
    t.positive_label = y.positive_label;
    t.negative_label = negative_label_for(d, y.positive_label);
    for (const auto &c : d.columns) t.columns.push_back({c.name, c.kind});

    std::vector<std::size_t> rows(d.n);
    std::iota(rows.begin(), rows.end(), 0);
    Grower(d, y, cfg, t).node(rows, 0);
    if (cfg.max_leaves) t = prune_to_max_leaves(std::move(t), *cfg.max_leaves);
    return t;
}

Tree prune_to_max_leaves(Tree t, std::size_t max_leaves) {
    if (max_leaves < 2) throw std::invalid_argument("max_leaves must be >= 2");
    std::size_t leaves = t.leaf_count();
    while (leaves > max_leaves) {
        std::optional<std::size_t> victim;
        std::int64_t best_increase = 0;
        for (const auto &nd : t.nodes) {
            if (nd.is_leaf()) continue;
            const auto &a = t.nodes[*nd.yes];
            const auto &b = t.nodes[*nd.no];
            if (!a.is_leaf() || !b.is_leaf()) continue;
            const auto inc = leaf_errors(t, nd) - leaf_errors(t, a) - leaf_errors(t, b);
            if (!victim || inc < best_increase ||
                (inc == best_increase && nd.depth > t.nodes[*victim].depth)) {
                victim = nd.id;
                best_increase = inc;
            }
        }
        auto &v = t.nodes[*victim];
        v.rule.clear();
        v.yes.reset();
        v.no.reset();
        v.delta_gini = 0.0;
        v.objective = 0;
        v.evaluations = 0;
        v.separable = false;
        --leaves;
    }
    return compact(t);
}

const char *to_string(EnsembleMode m) { return m == EnsembleMode::OneVsRest ? "one-vs-rest" : "vote"; }

EnsembleMode ensemble_mode_from_string(const std::string &s) {
    if (s == "one-vs-rest") return EnsembleMode::OneVsRest;
    if (s == "vote") return EnsembleMode::Vote;
    throw std::invalid_argument("unknown ensemble mode '" + s + "'");
}

Ensemble grow_multiclass(const Dataset &d, const TreeConfig &cfg) {
    if (d.classes.size() < 3)
        throw DataError("one-vs-rest needs at least three classes; use a single tree for two");
    Ensemble e;
    e.mode = EnsembleMode::OneVsRest;
    e.classes = d.classes;
    for (const auto &c : d.classes) {
        auto y = binarize_target(d, c);
        if (y.positives() == 0) throw DataError("class '" + c + "' has no training rows");
        e.trees.push_back(grow(d, y, cfg));
    }
    return e;
}

Ensemble grow_vote_ensemble(const Dataset &d, const BinaryTarget &y, const TreeConfig &base) {
    Ensemble e;
    e.mode = EnsembleMode::Vote;
    e.classes = {y.positive_label, negative_label_for(d, y.positive_label)};
    for (std::size_t rules : {1, 2, 3})
        for (std::size_t size : {0, 1, 10}) {
            TreeConfig c = base;
            c.solver.max_rules = rules;
            c.solver.min_node_size = size;
            e.trees.push_back(grow(d, y, c));
        }
    return e;
}

} // namespace ortree

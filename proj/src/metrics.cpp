#include "ortree/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ortree {

BoundTree::BoundTree(const Tree &t, const Dataset &data) : t_(t) {
    for (const auto &q : t.questions) {
        auto idx = data.find_column(q.column_name);
        if (!idx) throw DataError("input is missing column '" + q.column_name + "'");
        cols_.push_back(&data.columns[*idx]);
    }
}

const TreeNode &BoundTree::leaf(std::size_t row) const {
    const TreeNode *nd = &t_.nodes.front();
    while (!nd->is_leaf()) {
        bool yes = false;
        for (auto k : nd->rule)
            if (answers_yes(t_.questions[k], *cols_[k], row)) {
                yes = true;
                break;
            }
        nd = &t_.nodes[yes ? *nd->yes : *nd->no];
    }
    return *nd;
}

Prediction BoundTree::predict(std::size_t row) const {
    const auto &nd = leaf(row);
    return {nd.label, nd.prob_positive, nd.id};
}

Prediction predict_case(const Tree &t, const Dataset &data, std::size_t row) {
    return BoundTree(t, data).predict(row);
}

std::vector<Prediction> predict_all(const Tree &t, const Dataset &data) {
    BoundTree b(t, data);
    std::vector<Prediction> out;
    out.reserve(data.n);
    for (std::size_t i = 0; i < data.n; ++i) out.push_back(b.predict(i));
    return out;
}

std::size_t argmax_class(std::span<const double> scores) {
    if (scores.empty()) throw std::invalid_argument("no scores");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

std::string predict_multiclass(const Ensemble &e, const Dataset &data, std::size_t row) {
    std::vector<double> scores;
    for (const auto &t : e.trees) scores.push_back(predict_case(t, data, row).score);
    return e.classes.at(argmax_class(scores));
}

namespace {

Prediction vote(const std::vector<Prediction> &members, const std::string &positive) {
    if (members.empty()) throw std::invalid_argument("vote needs at least one tree");
    std::size_t yes = 0;
    double sum = 0.0;
    for (const auto &p : members) {
        yes += p.label == positive;
        sum += p.score;
    }
    Prediction out;
    out.score = sum / static_cast<double>(members.size());
    out.label = 2 * yes > members.size() ? positive : std::string{};
    return out;
}

} // namespace

Prediction vote_ensemble(std::span<const Tree> trees, const Dataset &data, std::size_t row) {
    if (trees.empty()) throw std::invalid_argument("vote needs at least one tree");
    std::vector<Prediction> members;
    for (const auto &t : trees) members.push_back(predict_case(t, data, row));
    auto p = vote(members, trees.front().positive_label);
    if (p.label.empty()) p.label = trees.front().negative_label;
    return p;
}

std::vector<Prediction> predict_all(const Ensemble &e, const Dataset &data) {
    std::vector<BoundTree> bound;
    for (const auto &t : e.trees) bound.emplace_back(t, data);
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < data.n; ++i) {
        std::vector<Prediction> members;
        for (const auto &b : bound) members.push_back(b.predict(i));
        if (e.mode == EnsembleMode::Vote) {
            auto p = vote(members, e.trees.front().positive_label);
            if (p.label.empty()) p.label = e.trees.front().negative_label;
            out.push_back(std::move(p));
        } else {
            std::vector<double> scores;
            for (const auto &m : members) scores.push_back(m.score);
            const auto k = argmax_class(scores);
            out.push_back({e.classes.at(k), scores[k], members[k].leaf});
        }
    }
    return out;
}

RocResult roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels length mismatch");
    std::int64_t P = 0;
    for (auto l : labels) P += l != 0;
    const std::int64_t N = static_cast<std::int64_t>(labels.size()) - P;
    if (P == 0 || N == 0) throw std::invalid_argument("ROC needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult r;
    r.points.emplace_back(0.0, 0.0);
    // Twice the trapezoid area in units of one positive-negative pair.
    std::int64_t tp = 0, fp = 0, area2 = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::int64_t dtp = 0, dfp = 0;
        const double s = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] ? dtp : dfp)++;
        area2 += dfp * (2 * tp + dtp);
        tp += dtp;
        fp += dfp;
        r.points.emplace_back(static_cast<double>(fp) / static_cast<double>(N),
                              static_cast<double>(tp) / static_cast<double>(P));
    }
    r.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(P) * static_cast<double>(N));
    return r;
}

Confusion confusion_accuracy(const std::vector<std::string> &predicted,
                             const std::vector<std::string> &actual, std::vector<std::string> labels) {
    if (predicted.size() != actual.size()) throw std::invalid_argument("prediction/actual length mismatch");
    if (labels.empty()) {
        std::set<std::string> all(predicted.begin(), predicted.end());
        all.insert(actual.begin(), actual.end());
        labels.assign(all.begin(), all.end());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    Confusion c;
    c.labels = labels;
    c.counts.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
    std::size_t right = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        auto p = index.find(predicted[i]);
        auto a = index.find(actual[i]);
        if (p == index.end() || a == index.end()) throw std::invalid_argument("label outside the label set");
        ++c.counts[p->second][a->second];
        right += predicted[i] == actual[i];
    }
    c.total = predicted.size();
    c.accuracy = c.total ? static_cast<double>(right) / static_cast<double>(c.total) : 0.0;
    return c;
}

} // namespace ortree

#pragma once

#include "ortree/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ortree {

struct Prediction {
    std::string label;
    double score = 0.0; // probability of the positive class
    std::size_t leaf = 0;
};

/// A tree's columns resolved against a dataset by name.
class BoundTree {
public:
    /// Throws DataError naming the first referenced column that is absent.
    BoundTree(const Tree &t, const Dataset &data);

    const TreeNode &leaf(std::size_t row) const;
    Prediction predict(std::size_t row) const;

private:
    const Tree &t_;
    std::vector<const Column *> cols_; // per question
};

Prediction predict_case(const Tree &t, const Dataset &data, std::size_t row);
std::vector<Prediction> predict_all(const Tree &t, const Dataset &data);

/// Argmax of per-class scores; ties go to the earliest class.
std::size_t argmax_class(std::span<const double> scores);
std::string predict_multiclass(const Ensemble &e, const Dataset &data, std::size_t row);

/// Majority label (ties to the negative class) and mean score.
Prediction vote_ensemble(std::span<const Tree> trees, const Dataset &data, std::size_t row);

/// Labels and scores for every row; for one-vs-rest the score is the winning class's.
std::vector<Prediction> predict_all(const Ensemble &e, const Dataset &data);

struct RocResult {
    std::vector<std::pair<double, double>> points; // (fpr, tpr)
    double auc = 0.0;
};

RocResult roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct Confusion {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> counts; // [predicted][actual]
    double accuracy = 0.0;
    std::size_t total = 0;
};

/// Rows and columns follow `labels` when given, else the sorted union of both inputs.
Confusion confusion_accuracy(const std::vector<std::string> &predicted,
                             const std::vector<std::string> &actual,
                             std::vector<std::string> labels = {});

} // namespace ortree

#include "ortree/experiment.hpp"

#include "ortree/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace ortree {

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep) {
    std::uint64_t state = seed + static_cast<std::uint64_t>(rep) * 0x9E3779B97F4A7C15ULL;
    return splitmix64(state);
}

TrainTestSplit seeded_split(std::size_t n, double fraction, std::uint64_t seed, std::size_t rep) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must be in (0, 1)");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(repetition_seed(seed, rep));
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    TrainTestSplit s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

std::string default_positive_label(const Dataset &d) {
    if (d.classes.empty()) throw DataError("dataset has no classes");
    return d.classes.back();
}

Model train_model(const Dataset &d, const TreeConfig &cfg, const std::optional<std::string> &positive,
                  bool vote) {
    if (d.classes.size() > 2 && !positive) {
        if (vote) throw DataError("the vote ensemble needs a positive class for multi-class data");
        return grow_multiclass(d, cfg);
    }
    const auto y = binarize_target(d, positive.value_or(default_positive_label(d)));
    if (vote) return grow_vote_ensemble(d, y, cfg);
    return grow(d, y, cfg);
}

namespace {

std::size_t leaves_of(const Model &m) {
    if (const auto *t = std::get_if<Tree>(&m)) return t->leaf_count();
    std::size_t s = 0;
    for (const auto &t : std::get<Ensemble>(m).trees) s += t.leaf_count();
    return s;
}

std::vector<Prediction> predict_model(const Model &m, const Dataset &d) {
    if (const auto *t = std::get_if<Tree>(&m)) return predict_all(*t, d);
    return predict_all(std::get<Ensemble>(m), d);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

ExperimentReport run_experiment(const Dataset &d, const ExperimentConfig &cfg) {
    if (cfg.reps == 0) throw std::invalid_argument("reps must be >= 1");
    ExperimentReport report;
    report.timing = cfg.timing;
    const bool binary = d.classes.size() == 2 || cfg.positive_label.has_value();
    const std::string positive = cfg.positive_label.value_or(default_positive_label(d));
    double acc_sum = 0.0, auc_sum = 0.0;
    std::size_t auc_count = 0;
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        const auto split = seeded_split(d.n, cfg.fraction, cfg.seed, rep);
        const auto train = d.subset(split.train);
        const auto test = d.subset(split.test);
        const auto start = std::chrono::steady_clock::now();
        const auto model = train_model(train, cfg.tree, cfg.positive_label, cfg.vote);
        RepResult r;
        r.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.rep = rep + 1;
        r.n_train = split.train.size();
        r.n_test = split.test.size();
        r.leaves = leaves_of(model);

        const auto preds = predict_model(model, test);
        std::vector<std::string> labels;
        std::vector<std::string> actual;
        std::vector<double> scores;
        std::vector<std::uint8_t> y;
        for (std::size_t i = 0; i < test.n; ++i) {
            labels.push_back(preds[i].label);
            scores.push_back(preds[i].score);
            if (binary) {
                const bool pos = test.target[i] == positive;
                y.push_back(pos);
                actual.push_back(pos ? positive : negative_label_for(d, positive));
            } else {
                actual.push_back(test.target[i]);
            }
        }
        r.accuracy = confusion_accuracy(labels, actual).accuracy;
        const auto npos = std::count(y.begin(), y.end(), std::uint8_t{1});
        if (binary && npos > 0 && npos < static_cast<std::ptrdiff_t>(y.size())) {
            r.auc = roc_auc(scores, y).auc;
            auc_sum += *r.auc;
            ++auc_count;
        }
        acc_sum += r.accuracy;
        report.reps.push_back(r);
    }
    report.mean_accuracy = acc_sum / static_cast<double>(cfg.reps);
    if (auc_count) report.mean_auc = auc_sum / static_cast<double>(auc_count);
    return report;
}

void print_report(const ExperimentReport &r, std::ostream &out) {
    out << "rep,n_train,n_test,leaves,accuracy,auc" << (r.timing ? ",train_seconds" : "") << "\n";
    for (const auto &x : r.reps) {
        out << x.rep << "," << x.n_train << "," << x.n_test << "," << x.leaves << "," << fixed(x.accuracy, 4)
            << "," << (x.auc ? fixed(*x.auc, 4) : "NA");
        if (r.timing) out << "," << fixed(x.train_seconds, 2);
        out << "\n";
    }
    out << "mean,,,," << fixed(r.mean_accuracy, 4) << "," << (r.mean_auc ? fixed(*r.mean_auc, 4) : "NA");
    if (r.timing) {
        double t = 0;
        for (const auto &x : r.reps) t += x.train_seconds;
        out << "," << fixed(t / static_cast<double>(r.reps.size()), 2);
    }
    out << "\n";
}

} // namespace ortree

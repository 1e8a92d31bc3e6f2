#pragma once

#include "ortree/model_io.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ortree {

/// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64(std::uint64_t &state);

/// Seed of repetition `rep`: one SplitMix64 output from seed + rep * 0x9E3779B97F4A7C15.
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep);

/// Uniform integer in [0, bound) from a 64-bit generator by rejection.
template <class Rng> std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound; // 2^64 mod bound
    std::uint64_t x = rng();
    while (x < limit) x = rng();
    return x % bound;
}

struct TrainTestSplit {
    std::vector<std::size_t> train; // ascending
    std::vector<std::size_t> test;  // ascending
};

/// Fisher-Yates shuffle (i from n-1 down to 1, j uniform in [0, i]) driven by
/// std::mt19937_64 seeded with repetition_seed(seed, rep); the first
/// floor(fraction * n) positions form the training set.
TrainTestSplit seeded_split(std::size_t n, double fraction, std::uint64_t seed, std::size_t rep);

struct ExperimentConfig {
    TreeConfig tree;
    std::size_t reps = 20;
    std::uint64_t seed = 2021;
    double fraction = 0.7;
    std::optional<std::string> positive_label;
    bool vote = false;
    bool timing = false;
};

struct RepResult {
    std::size_t rep = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t leaves = 0;
    double accuracy = 0.0;
    std::optional<double> auc;
    double train_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<RepResult> reps;
    double mean_accuracy = 0.0;
    std::optional<double> mean_auc;
    bool timing = false;
};

/// Default positive class: the last of the sorted class labels.
std::string default_positive_label(const Dataset &d);

/// Trains a single tree (two classes), a vote ensemble, or a one-vs-rest ensemble.
Model train_model(const Dataset &d, const TreeConfig &cfg, const std::optional<std::string> &positive,
                  bool vote);

ExperimentReport run_experiment(const Dataset &d, const ExperimentConfig &cfg);
void print_report(const ExperimentReport &r, std::ostream &out);

} // namespace ortree

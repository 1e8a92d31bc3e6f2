#include "ortree/enum_solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ortree {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    std::vector<std::size_t> set;
    SplitEval eval;
};

// Counts for (z | column) without materializing the union.
SplitEval eval_union(const std::vector<std::uint64_t> &z, const RowBits &col, const RowBits &pos,
                     NodeStats s) {
    const std::uint64_t *c = col.data();
    const std::uint64_t *p = pos.data();
    std::int64_t tp = 0, zs = 0;
    for (std::size_t w = 0; w < z.size(); ++w) {
        const std::uint64_t u = z[w] | c[w];
        zs += std::popcount(u);
        tp += std::popcount(u & p[w]);
    }
    return eval_counts(s, zs - tp, s.P - tp);
}

class Search {
public:
    Search(const BinaryMatrix &B, NodeStats s, const SolverConfig &cfg)
        : B_(B), s_(s), cfg_(cfg), min_size_(cfg.effective_min_node_size(B.n)),
          levels_(std::min(cfg.max_rules, B.m())), start_(Clock::now()) {}

    SolveResult run() {
        std::vector<Node> frontier;
        const std::vector<std::uint64_t> empty(B_.positive.word_count(), 0);
        for (std::size_t k = 0; k < B_.m() && !stopped_; ++k) {
            if (out_of_budget()) break;
            consider({k}, eval_union(empty, B_.columns[k], B_.positive, s_), 1, frontier);
        }
        for (std::size_t level = 2; level <= levels_ && !stopped_ && !frontier.empty(); ++level)
            frontier = expand(frontier, level);

        res_.optimal = !stopped_;
        res_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        return res_;
    }

private:
    bool expandable(const Node &node, std::size_t level) const {
        if (level >= levels_) return false;
        const auto bound = objective_bound(cfg_.objective, s_, node.eval);
        if (res_.feasible && bound >= res_.objective) return false;
        if (is_feasible(node.eval, s_, cfg_) && bound == objective_value(cfg_.objective, s_, node.eval))
            return false;
        return true;
    }

    void consider(std::vector<std::size_t> set, const SplitEval &e, std::size_t level,
                  std::vector<Node> &next) {
        ++res_.evaluations;
        const auto obj = objective_value(cfg_.objective, s_, e);
        if (is_feasible(e, s_, cfg_) && (!res_.feasible || obj < res_.objective)) {
            res_.feasible = true;
            res_.objective = obj;
            res_.best = RuleSet{set};
            res_.best_eval = e;
        }
        // The no-side only shrinks as questions are added.
        if (s_.n() - e.z_sum < static_cast<std::int64_t>(min_size_)) return;
        Node node{std::move(set), e};
        if (expandable(node, level)) next.push_back(std::move(node));
    }

    bool out_of_budget() {
        if (cfg_.node_budget && res_.evaluations >= *cfg_.node_budget) stopped_ = true;
        if (cfg_.time_limit && (res_.evaluations & 255) == 0 &&
            std::chrono::duration<double>(Clock::now() - start_).count() > *cfg_.time_limit)
            stopped_ = true;
        return stopped_;
    }

    std::vector<SplitEval> children_of(const Node &parent) const {
        std::vector<std::uint64_t> z(B_.positive.word_count(), 0);
        for (auto k : parent.set) {
            const auto *c = B_.columns[k].data();
            for (std::size_t w = 0; w < z.size(); ++w) z[w] |= c[w];
        }
        std::vector<SplitEval> out;
        for (std::size_t k = parent.set.back() + 1; k < B_.m(); ++k)
            out.push_back(eval_union(z, B_.columns[k], B_.positive, s_));
        return out;
    }

    // Child counts are computed speculatively (possibly in parallel) for a block
    // of parents, then replayed in order so that pruning and counting match a
    // purely sequential search.
    std::vector<Node> expand(const std::vector<Node> &frontier, std::size_t level) {
        std::vector<Node> next;
        const unsigned threads = std::max(1u, cfg_.threads);
        const std::size_t block = threads == 1 ? 1 : std::size_t{threads} * 16;
        for (std::size_t b0 = 0; b0 < frontier.size() && !stopped_; b0 += block) {
            const std::size_t b1 = std::min(frontier.size(), b0 + block);
            std::vector<std::vector<SplitEval>> evals(b1 - b0);
            auto work = [&](std::size_t from, std::size_t step) {
                for (std::size_t i = from; i < b1 - b0; i += step)
                    if (expandable(frontier[b0 + i], level - 1)) evals[i] = children_of(frontier[b0 + i]);
            };
            if (threads == 1 || b1 - b0 == 1) {
                work(0, 1);
            } else {
                std::vector<std::thread> pool;
                for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
                for (auto &t : pool) t.join();
            }
            for (std::size_t i = 0; i < b1 - b0 && !stopped_; ++i) {
                const Node &parent = frontier[b0 + i];
                if (!expandable(parent, level - 1)) continue;
                std::size_t k = parent.set.back() + 1;
                for (const auto &e : evals[i]) {
                    if (out_of_budget()) break;
                    auto set = parent.set;
                    set.push_back(k++);
                    consider(std::move(set), e, level, next);
                }
            }
        }
        return next;
    }

    const BinaryMatrix &B_;
    NodeStats s_;
    const SolverConfig &cfg_;
    std::size_t min_size_;
    std::size_t levels_;
    Clock::time_point start_;
    SolveResult res_;
    bool stopped_ = false;
};

void check_inputs(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg) {
    cfg.validate();
    if (B.m() == 0) throw std::invalid_argument("empty question pool");
    if (stats.P < 1 || stats.N < 1) throw std::invalid_argument("solver needs both classes present");
    if (stats.n() != static_cast<std::int64_t>(B.n))
        throw std::invalid_argument("node statistics do not match the matrix");
}

} // namespace

const char *to_string(MinSizePolicy p) { return p == MinSizePolicy::Sqrt ? "sqrt" : "fourth-root"; }

MinSizePolicy min_size_policy_from_string(const std::string &s) {
    if (s == "sqrt") return MinSizePolicy::Sqrt;
    if (s == "fourth-root") return MinSizePolicy::FourthRoot;
    throw std::invalid_argument("unknown min-node-size policy '" + s + "'");
}

std::size_t SolverConfig::effective_min_node_size(std::size_t n) const {
    if (min_node_size > 0) return min_node_size;
    const double root = min_size_policy == MinSizePolicy::Sqrt ? std::sqrt(static_cast<double>(n))
                                                               : std::sqrt(std::sqrt(static_cast<double>(n)));
    // Guard against sqrt rounding just below an exact integer root.
    auto r = static_cast<std::size_t>(std::floor(root + 1e-9));
    return std::max<std::size_t>(1, r);
}

void SolverConfig::validate() const {
    if (max_rules < 1) throw std::invalid_argument("max_rules must be >= 1");
    if (time_limit && !(*time_limit > 0)) throw std::invalid_argument("time_limit must be positive");
}

bool is_feasible(const SplitEval &e, NodeStats stats, const SolverConfig &cfg) {
    const auto min = static_cast<std::int64_t>(cfg.effective_min_node_size(static_cast<std::size_t>(stats.n())));
    if (e.z_sum < min || stats.n() - e.z_sum < min) return false;
    if (cfg.no_same_gender_children && e.TP - e.FP < std::max<std::int64_t>(0, stats.P - stats.N))
        return false;
    return true;
}

SolveResult enum_solve(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg) {
    check_inputs(B, stats, cfg);
    return Search(B, stats, cfg).run();
}

SolveResult brute_force_solve(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                              std::uint64_t cap) {
    check_inputs(B, stats, cfg);
    const std::size_t levels = std::min(cfg.max_rules, B.m());
    const auto total = worst_case_evals(B.m(), levels);
    if (total > cap)
        throw std::invalid_argument("brute force would need " + std::to_string(total) +
                                    " evaluations (cap " + std::to_string(cap) + ")");
    const auto start = Clock::now();
    SolveResult res;
    for (std::size_t size = 1; size <= levels; ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            RuleSet S{idx};
            const auto e = eval_ruleset(B, S);
            ++res.evaluations;
            const auto obj = objective_value(cfg.objective, stats, e);
            if (is_feasible(e, stats, cfg) && (!res.feasible || obj < res.objective)) {
                res.feasible = true;
                res.objective = obj;
                res.best = std::move(S);
                res.best_eval = e;
            }
            // next combination in lexicographic order
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == B.m() - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

std::uint64_t worst_case_evals(std::size_t m, std::size_t max_rules) {
    __extension__ typedef unsigned __int128 u128;
    const std::size_t top = std::min(m, max_rules);
    u128 c = 1, sum = 0;
    for (std::size_t i = 1; i <= top; ++i) {
        c = c * (m - i + 1) / i;
        sum += c;
        if (sum >= kEvalSaturation) return kEvalSaturation;
    }
    return static_cast<std::uint64_t>(sum);
}

} // namespace ortree

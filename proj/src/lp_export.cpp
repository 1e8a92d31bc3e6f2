#include "ortree/lp_export.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ortree {

namespace {

// Accumulates "+ c name" terms and wraps long rows.
class Row {
public:
    explicit Row(std::ostream &out) : out_(out) {}

    void term(std::int64_t coef, const std::string &var) {
        if (coef == 0) return;
        if (terms_ > 0 && terms_ % 8 == 0) out_ << "\n  ";
        out_ << (coef < 0 ? " - " : (terms_ ? " + " : " "));
        const auto mag = coef < 0 ? -coef : coef;
        if (mag != 1) out_ << mag << ' ';
        out_ << var;
        ++terms_;
    }
    void constant(std::int64_t c) {
        if (c == 0) return;
        out_ << (c < 0 ? " - " : (terms_ ? " + " : " ")) << (c < 0 ? -c : c);
        ++terms_;
    }
    std::size_t terms() const { return terms_; }

private:
    std::ostream &out_;
    std::size_t terms_ = 0;
};

std::string w(std::size_t k) { return "w" + std::to_string(k + 1); }
std::string z(std::size_t i) { return "z" + std::to_string(i + 1); }
std::string t(std::size_t i, std::size_t j) {
    return "t" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

void check(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg) {
    cfg.validate();
    if (stats.P < 1 || stats.N < 1) throw std::invalid_argument("LP export needs both classes present");
    if (stats.n() != static_cast<std::int64_t>(B.n))
        throw std::invalid_argument("node statistics do not match the matrix");
    if (B.m() == 0) throw std::invalid_argument("empty question pool");
}

LpSummary write_model(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                      std::ostream &out, bool pairs) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < B.n; ++i) (B.y[i] ? pos : neg).push_back(i);
    LpSummary sum;
    sum.binaries = B.m();
    sum.vars = B.m() + B.n + (pairs ? pos.size() * neg.size() : 0);

    out << "\\ " << (pairs ? "Gini" : "error") << " split model: n=" << B.n << " m=" << B.m()
        << " P=" << stats.P << " N=" << stats.N << "\n";
    out << "Minimize\n obj:";
    {
        Row obj(out);
        for (auto i : pos) obj.term(-stats.N, z(i));
        for (auto j : neg) obj.term(stats.P, z(j));
        if (pairs)
            for (auto i : pos)
                for (auto j : neg) obj.term(-2, t(i, j));
        obj.constant(stats.P * stats.N);
    }
    out << "\nSubject To\n";

    for (std::size_t i = 0; i < B.n; ++i)
        for (std::size_t k = 0; k < B.m(); ++k)
            if (B.at(i, k)) {
                out << " c4_" << i + 1 << "_" << k + 1 << ": " << w(k) << " - " << z(i) << " <= 0\n";
                ++sum.constraints;
            }
    for (std::size_t i = 0; i < B.n; ++i) {
        out << " c5_" << i + 1 << ":";
        Row r(out);
        for (std::size_t k = 0; k < B.m(); ++k)
            if (B.at(i, k)) r.term(1, w(k));
        r.term(-1, z(i));
        out << " >= 0\n";
        ++sum.constraints;
    }
    if (pairs) {
        for (auto i : pos)
            for (auto j : neg) {
                out << " c6_" << i + 1 << "_" << j + 1 << ": " << t(i, j) << " + " << z(i) << " <= 1\n";
                out << " c7_" << i + 1 << "_" << j + 1 << ": " << t(i, j) << " - " << z(j) << " <= 0\n";
                sum.constraints += 2;
            }
    }
    out << " c14:";
    {
        Row r(out);
        for (std::size_t k = 0; k < B.m(); ++k) r.term(1, w(k));
    }
    out << " <= " << cfg.max_rules << "\n";
    ++sum.constraints;

    const auto min = static_cast<std::int64_t>(cfg.effective_min_node_size(B.n));
    for (int side = 0; side < 2; ++side) {
        out << (side == 0 ? " c15:" : " c16:");
        Row r(out);
        for (std::size_t i = 0; i < B.n; ++i) r.term(1, z(i));
        if (side == 0)
            out << " >= " << min << "\n";
        else
            out << " <= " << stats.n() - min << "\n";
        ++sum.constraints;
    }
    if (cfg.no_same_gender_children) {
        out << " c17:";
        Row r(out);
        for (auto i : pos) r.term(1, z(i));
        for (auto j : neg) r.term(-1, z(j));
        out << " >= " << std::max<std::int64_t>(0, stats.P - stats.N) << "\n";
        ++sum.constraints;
    }

    out << "Bounds\n";
    for (auto i : pos) out << " -inf <= " << z(i) << " <= 1\n";
    if (pairs)
        for (auto i : pos)
            for (auto j : neg) out << " " << t(i, j) << " free\n";
    out << "Binary\n";
    for (std::size_t k = 0; k < B.m(); ++k) out << " " << w(k) << "\n";
    out << "End\n";
    if (!out) throw std::runtime_error("failed writing LP output");
    return sum;
}

template <class Fn> LpSummary to_file(const std::string &path, Fn &&fn) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return fn(f);
}

} // namespace

LpSummary write_optg_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        std::ostream &out, const LpExportOptions &opt) {
    check(B, stats, cfg);
    const auto pairs = static_cast<std::uint64_t>(stats.P) * static_cast<std::uint64_t>(stats.N);
    if (pairs > opt.max_pair_vars)
        throw std::invalid_argument("Gini model needs " + std::to_string(pairs) +
                                    " pair variables, above the limit of " +
                                    std::to_string(opt.max_pair_vars));
    return write_model(B, stats, cfg, out, true);
}

LpSummary write_optg_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        const std::string &path, const LpExportOptions &opt) {
    check(B, stats, cfg);
    return to_file(path, [&](std::ostream &f) { return write_optg_lp(B, stats, cfg, f, opt); });
}

LpSummary write_opte_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        std::ostream &out) {
    check(B, stats, cfg);
    return write_model(B, stats, cfg, out, false);
}

LpSummary write_opte_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        const std::string &path) {
    check(B, stats, cfg);
    return to_file(path, [&](std::ostream &f) { return write_opte_lp(B, stats, cfg, f); });
}

} // namespace ortree

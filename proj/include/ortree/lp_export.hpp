#pragma once

#include "ortree/enum_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace ortree {

struct LpSummary {
    std::size_t vars = 0;
    std::size_t binaries = 0;
    std::size_t constraints = 0;
};

struct LpExportOptions {
    /// Refuse Gini models with more positive/negative pair variables than this.
    std::uint64_t max_pair_vars = 1'000'000;
};

/// CPLEX LP text for the Gini split model. The objective includes the |P||N|
/// constant, so its optimum equals nu. Variables: w<k> (binary), z<i>, and
/// t<i>_<j> for positive case i and negative case j (all 1-based).
LpSummary write_optg_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        std::ostream &out, const LpExportOptions &opt = {});
LpSummary write_optg_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        const std::string &path, const LpExportOptions &opt = {});

/// Same without pair variables; the optimum equals N*FN + P*FP.
LpSummary write_opte_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        std::ostream &out);
LpSummary write_opte_lp(const BinaryMatrix &B, NodeStats stats, const SolverConfig &cfg,
                        const std::string &path);

} // namespace ortree

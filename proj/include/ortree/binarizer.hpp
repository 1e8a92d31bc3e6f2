#pragma once

#include "ortree/bitset.hpp"
#include "ortree/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ortree {

enum class QuestionOp : std::uint8_t { GE, LE, In };

const char *to_string(QuestionOp op);
QuestionOp question_op_from_string(const std::string &s);

/// A yes/no predicate over one input column. GE/LE compare non-strictly
/// against `threshold`; In tests membership in `levels` (kept sorted).
struct Question {
    std::size_t column = 0;
    std::string column_name;
    QuestionOp op = QuestionOp::GE;
    double threshold = 0.0;
    std::vector<std::string> levels;
    std::size_t support = 0;

    bool is_numeric() const { return op != QuestionOp::In; }
    bool answers_yes(double value) const;
    bool answers_yes(const std::string &level) const;
    /// e.g. "age>=2.5", "colour in {red,blue}".
    std::string describe() const;

    bool operator==(const Question &) const = default;
};

struct BinarizeConfig {
    /// Minimum yes-support for a question to enter the pool; unset means
    /// max(1, floor(sqrt(n) / 4)) for the node's n.
    std::optional<std::size_t> bin_size;
    std::size_t nseg_numeric = 20;
    std::size_t categorical_dummy_threshold = 30;

    std::size_t effective_bin_size(std::size_t n) const;
    void validate() const;
    bool operator==(const BinarizeConfig &) const = default;
};

/// A numeric column whose classes do not overlap. The question's yes-side is
/// exactly the positive cases.
struct SeparableSplit {
    Question question;
};

using NumericCuts = std::variant<std::vector<Question>, SeparableSplit>;

/// Forward (GE) and reverse (LE) frontier scans over the sorted values. A
/// threshold is kept only when its yes-side positive fraction strictly beats
/// every kept threshold of larger support in the same direction. Returned
/// questions carry no column reference.
NumericCuts binarize_numeric(std::span<const double> values, std::span<const std::uint8_t> y,
                             const BinarizeConfig &cfg);

/// One In-question per level, or per merged level group when the level count
/// exceeds the dummy threshold. Fewer than two levels yields no questions.
std::vector<Question> binarize_categorical(std::span<const std::string> values,
                                           std::span<const std::uint8_t> y,
                                           const BinarizeConfig &cfg);

/// The n x m 0/1 feature matrix, stored column-wise as bitsets.
struct BinaryMatrix {
    std::size_t n = 0;
    std::vector<Question> questions;
    std::vector<RowBits> columns;
    RowBits positive; // y as bits
    std::vector<std::uint8_t> y;
    std::string positive_label;
    /// Set when some numeric column separates the classes (first such column).
    std::optional<Question> separable;

    std::size_t m() const { return columns.size(); }
    bool at(std::size_t row, std::size_t k) const { return columns[k].test(row); }
    std::size_t positives() const { return positive.count(); }
};

BinaryMatrix build_matrix(const Dataset &d, const BinaryTarget &y, const BinarizeConfig &cfg);

/// Binarizes only the listed rows (row i of the result is d's row rows[i]).
BinaryMatrix build_matrix(const Dataset &d, const BinaryTarget &y, const BinarizeConfig &cfg,
                          std::span<const std::size_t> rows);

/// Same as build_matrix but returns nullopt instead of throwing on an empty pool.
std::optional<BinaryMatrix> try_build_matrix(const Dataset &d, const BinaryTarget &y,
                                             const BinarizeConfig &cfg,
                                             std::span<const std::size_t> rows);

/// Wraps an explicit 0/1 matrix (row-major, one inner vector per case). Column
/// k becomes the question "<name_k> >= 0.5". No deduplication is applied.
BinaryMatrix matrix_from_dense(const std::vector<std::vector<std::uint8_t>> &rows,
                               const std::vector<std::uint8_t> &y,
                               std::vector<std::string> names = {});

/// Interprets every input column of `d` as a 0/1 feature.
BinaryMatrix matrix_from_dataset(const Dataset &d, const BinaryTarget &y);

/// DL8.5 text format: one case per line, "label f1 f2 ... fm", whitespace
/// separated, label 1 = positive.
BinaryMatrix load_dl85(const std::string &path);
BinaryMatrix read_dl85(std::istream &in);

/// CSV with columns "q<k>:<question>" and a trailing target column.
void write_matrix_csv(const BinaryMatrix &B, const std::vector<std::string> &labels,
                      const std::string &target_name, std::ostream &out);

} // namespace ortree

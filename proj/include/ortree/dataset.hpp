#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ortree {

/// Raised for malformed or inconsistent input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ColumnKind : std::uint8_t { Numeric, Categorical };

const char *to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string &s);

/// One input variable. Exactly one of `numbers` / `tokens` is populated,
/// according to `kind`. Rows loaded with `allow_missing` mark absent values as
/// NaN (numeric) or in `missing` (categorical).
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> numbers;
    std::vector<std::string> tokens;
    std::vector<std::uint8_t> missing; // empty unless loaded with allow_missing

    std::size_t size() const {
        return kind == ColumnKind::Numeric ? numbers.size() : tokens.size();
    }
    bool is_missing(std::size_t row) const { return !missing.empty() && missing[row] != 0; }
    /// Sorted distinct categorical levels.
    std::vector<std::string> levels() const;

    bool operator==(const Column &) const = default;
};

/// The learning sample: typed input columns plus a class label per row.
/// `classes` is the sorted distinct label set and may be a superset of the
/// labels present after `subset`.
struct Dataset {
    std::vector<Column> columns;
    std::vector<std::string> target;
    std::vector<std::string> classes;
    std::string target_name;
    std::size_t n = 0;

    bool has_target() const { return !target_name.empty(); }
    std::optional<std::size_t> find_column(const std::string &name) const;
    const Column &column(const std::string &name) const;

    /// Rows in the given order; classes are carried over unchanged.
    Dataset subset(std::span<const std::size_t> rows) const;

    bool operator==(const Dataset &) const = default;
};

struct LoadOptions {
    char delimiter = ',';
    bool drop_incomplete = false;
    /// Keep rows with missing cells (used for scoring new data); missing
    /// values only become an error when a model actually reads them.
    bool allow_missing = false;
    std::vector<std::string> missing_tokens{"", "NA", "?"};
    std::map<std::string, ColumnKind> kind_overrides;
};

/// Reads a header-first delimited file. Column kinds are inferred: numeric iff
/// every value parses as a finite number.
Dataset load_csv(const std::string &path, const std::string &target_column,
                 const LoadOptions &options = {});
Dataset read_csv(std::istream &in, const std::string &target_column,
                 const LoadOptions &options = {});

/// Same as load_csv but without a class column (prediction inputs).
Dataset load_features(const std::string &path, const LoadOptions &options = {});
Dataset read_features(std::istream &in, const LoadOptions &options = {});

/// Writes the dataset (target last) so that read_csv reproduces it.
void write_csv(const Dataset &d, std::ostream &out, char delimiter = ',');

/// Splits one delimited line honouring double-quoted fields.
std::vector<std::string> split_delimited(const std::string &line, char delimiter);

std::optional<double> parse_number(const std::string &token);
std::string format_number(double value);

/// 0/1 response vector for one positive class (one-vs-rest when |classes| > 2).
struct BinaryTarget {
    std::vector<std::uint8_t> y;
    std::string positive_label;

    std::size_t positives() const;
    std::size_t size() const { return y.size(); }
};

BinaryTarget binarize_target(const Dataset &d, const std::string &positive_label);

} // namespace ortree

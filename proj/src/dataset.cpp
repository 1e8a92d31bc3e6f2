#include "ortree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ortree {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::vector<bool>> quoted;
};

// Fields are trimmed unless quoted; `quoted` records which fields were quoted
// so that a quoted empty string is not mistaken for a missing cell.
std::vector<std::string> split_fields(const std::string &line, char delim,
                                      std::vector<bool> *quoted) {
    std::vector<std::string> out;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    auto flush = [&] {
        out.push_back(was_quoted ? field : trim(field));
        if (quoted) quoted->push_back(was_quoted);
        field.clear();
        was_quoted = false;
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            in_quotes = true;
            was_quoted = true;
        } else if (c == delim) {
            flush();
        } else if (!was_quoted) {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field");
    flush();
    return out;
}

RawTable read_table(std::istream &in, char delim) {
    RawTable t;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (trim(line).empty()) continue;
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
            t.header = split_fields(line, delim, nullptr);
            have_header = true;
            continue;
        }
        if (trim(line).empty()) continue;
        std::vector<bool> q;
        auto fields = split_fields(line, delim, &q);
        if (fields.size() != t.header.size()) {
            std::ostringstream msg;
            msg << "unparseable row " << t.rows.size() + 1 << " (line " << line_no << "): expected "
                << t.header.size() << " fields, found " << fields.size();
            throw DataError(msg.str());
        }
        t.rows.push_back(std::move(fields));
        t.quoted.push_back(std::move(q));
    }
    if (!have_header) throw DataError("empty input: no header row");
    return t;
}

bool is_missing_cell(const RawTable &t, std::size_t r, std::size_t c, const LoadOptions &opt) {
    if (t.quoted[r][c]) return false;
    const auto &v = t.rows[r][c];
    return std::find(opt.missing_tokens.begin(), opt.missing_tokens.end(), v) !=
           opt.missing_tokens.end();
}

Dataset build_dataset(RawTable t, const std::string &target_column, const LoadOptions &opt) {
    std::optional<std::size_t> target_idx;
    if (!target_column.empty()) {
        auto it = std::find(t.header.begin(), t.header.end(), target_column);
        if (it == t.header.end())
            throw DataError("target column '" + target_column + "' not found");
        target_idx = static_cast<std::size_t>(it - t.header.begin());
    }
    {
        std::set<std::string> seen;
        for (const auto &h : t.header)
            if (!seen.insert(h).second) throw DataError("duplicate column name '" + h + "'");
    }
    const std::size_t ncol = t.header.size();
    if (ncol - (target_idx ? 1 : 0) == 0) throw DataError("no input columns");

    // Missing-value policy.
    std::vector<std::size_t> keep;
    keep.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        bool complete = true;
        for (std::size_t c = 0; c < ncol && complete; ++c) {
            if (!is_missing_cell(t, r, c, opt)) continue;
            if (target_idx && c == *target_idx) {
                if (!opt.drop_incomplete)
                    throw DataError("missing value at row " + std::to_string(r + 1) + ", column " +
                                    t.header[c]);
                complete = false;
            } else if (!opt.allow_missing) {
                if (!opt.drop_incomplete)
                    throw DataError("missing value at row " + std::to_string(r + 1) + ", column " +
                                    t.header[c]);
                complete = false;
            }
        }
        if (complete) keep.push_back(r);
    }
    if (keep.empty()) throw DataError("no data rows");

    Dataset d;
    d.n = keep.size();
    if (target_idx) d.target_name = t.header[*target_idx];
    for (std::size_t c = 0; c < ncol; ++c) {
        if (target_idx && c == *target_idx) continue;
        Column col;
        col.name = t.header[c];
        std::vector<std::uint8_t> miss(keep.size(), 0);
        bool any_missing = false;
        bool all_numeric = true;
        std::vector<double> nums(keep.size(), std::nan(""));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            const std::size_t r = keep[i];
            if (is_missing_cell(t, r, c, opt)) {
                miss[i] = 1;
                any_missing = true;
                continue;
            }
            if (all_numeric) {
                if (auto v = parse_number(t.rows[r][c]))
                    nums[i] = *v;
                else
                    all_numeric = false;
            }
        }
        if (auto ov = opt.kind_overrides.find(col.name); ov != opt.kind_overrides.end()) {
            if (ov->second == ColumnKind::Numeric && !all_numeric)
                throw DataError("column '" + col.name + "' declared numeric but has non-numeric values");
            col.kind = ov->second;
        } else {
            col.kind = all_numeric ? ColumnKind::Numeric : ColumnKind::Categorical;
        }
        if (col.kind == ColumnKind::Numeric) {
            col.numbers = std::move(nums);
        } else {
            col.tokens.resize(keep.size());
            for (std::size_t i = 0; i < keep.size(); ++i)
                if (!miss[i]) col.tokens[i] = t.rows[keep[i]][c];
        }
        if (any_missing) col.missing = std::move(miss);
        d.columns.push_back(std::move(col));
    }
    if (target_idx) {
        d.target.reserve(keep.size());
        std::set<std::string> cls;
        for (std::size_t r : keep) {
            d.target.push_back(t.rows[r][*target_idx]);
            cls.insert(d.target.back());
        }
        d.classes.assign(cls.begin(), cls.end());
        if (d.classes.size() < 2)
            throw DataError("target column '" + target_column + "' has fewer than two classes");
    }
    return d;
}

bool needs_quotes(const std::string &s, char delim) {
    if (s.empty() || s == "NA" || s == "?") return true;
    if (s.front() == ' ' || s.back() == ' ' || s.front() == '\t' || s.back() == '\t') return true;
    return s.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string::npos;
}

void write_field(std::ostream &out, const std::string &s, char delim) {
    if (!needs_quotes(s, delim)) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

} // namespace

const char *to_string(ColumnKind kind) {
    return kind == ColumnKind::Numeric ? "numeric" : "categorical";
}

ColumnKind column_kind_from_string(const std::string &s) {
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    throw DataError("unknown column kind '" + s + "'");
}

std::vector<std::string> Column::levels() const {
    std::set<std::string> s;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (!is_missing(i)) s.insert(tokens[i]);
    return {s.begin(), s.end()};
}

std::optional<std::size_t> Dataset::find_column(const std::string &name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    return std::nullopt;
}

const Column &Dataset::column(const std::string &name) const {
    auto idx = find_column(name);
    if (!idx) throw DataError("column '" + name + "' not found");
    return columns[*idx];
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.classes = classes;
    out.target_name = target_name;
    out.n = rows.size();
    out.columns.reserve(columns.size());
    for (const auto &c : columns) {
        Column nc;
        nc.name = c.name;
        nc.kind = c.kind;
        if (c.kind == ColumnKind::Numeric) {
            nc.numbers.reserve(rows.size());
            for (auto r : rows) nc.numbers.push_back(c.numbers.at(r));
        } else {
            nc.tokens.reserve(rows.size());
            for (auto r : rows) nc.tokens.push_back(c.tokens.at(r));
        }
        if (!c.missing.empty()) {
            nc.missing.reserve(rows.size());
            for (auto r : rows) nc.missing.push_back(c.missing[r]);
        }
        out.columns.push_back(std::move(nc));
    }
    if (!target.empty()) {
        out.target.reserve(rows.size());
        for (auto r : rows) out.target.push_back(target.at(r));
    }
    return out;
}

std::vector<std::string> split_delimited(const std::string &line, char delimiter) {
    return split_fields(line, delimiter, nullptr);
}

std::optional<double> parse_number(const std::string &token) {
    std::string_view s = token;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

Dataset read_csv(std::istream &in, const std::string &target_column, const LoadOptions &options) {
    if (target_column.empty()) throw DataError("target column name is empty");
    return build_dataset(read_table(in, options.delimiter), target_column, options);
}

Dataset load_csv(const std::string &path, const std::string &target_column,
                 const LoadOptions &options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_csv(in, target_column, options);
}

Dataset read_features(std::istream &in, const LoadOptions &options) {
    return build_dataset(read_table(in, options.delimiter), {}, options);
}

Dataset load_features(const std::string &path, const LoadOptions &options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_features(in, options);
}

void write_csv(const Dataset &d, std::ostream &out, char delimiter) {
    bool first = true;
    auto sep = [&] {
        if (!first) out << delimiter;
        first = false;
    };
    for (const auto &c : d.columns) {
        sep();
        write_field(out, c.name, delimiter);
    }
    if (d.has_target()) {
        sep();
        write_field(out, d.target_name, delimiter);
    }
    out << '\n';
    for (std::size_t r = 0; r < d.n; ++r) {
        first = true;
        for (const auto &c : d.columns) {
            sep();
            if (c.is_missing(r)) continue;
            if (c.kind == ColumnKind::Numeric)
                out << format_number(c.numbers[r]);
            else
                write_field(out, c.tokens[r], delimiter);
        }
        if (d.has_target()) {
            sep();
            write_field(out, d.target[r], delimiter);
        }
        out << '\n';
    }
}

std::size_t BinaryTarget::positives() const {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
}

BinaryTarget binarize_target(const Dataset &d, const std::string &positive_label) {
    if (std::find(d.classes.begin(), d.classes.end(), positive_label) == d.classes.end())
        throw DataError("positive label '" + positive_label + "' is not a class of '" +
                        d.target_name + "'");
    BinaryTarget t;
    t.positive_label = positive_label;
    t.y.reserve(d.n);
    for (const auto &label : d.target) t.y.push_back(label == positive_label ? 1 : 0);
    return t;
}

} // namespace ortree

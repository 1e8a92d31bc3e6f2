#include "ortree/binarizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ortree {

namespace {

__extension__ typedef __int128 i128;

void require_both_classes(std::span<const std::uint8_t> y) {
    const auto pos = std::count(y.begin(), y.end(), std::uint8_t{1});
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size()))
        throw std::invalid_argument("binarization needs both classes present");
}

// Threshold strictly between two adjacent distinct values; falls back to the
// relevant endpoint when the values are a single ulp apart.
double midpoint(double lo, double hi, QuestionOp op) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid > lo && mid < hi) return mid;
    return op == QuestionOp::GE ? hi : lo;
}

struct Group {
    double value;
    std::size_t count = 0;
    std::size_t pos = 0;
};

struct Cut {
    double threshold;
    std::size_t support;
    std::size_t pos;
    std::int64_t nu; // single-question split objective, used to trim long frontiers
};

std::int64_t single_nu(std::size_t support, std::size_t pos, std::size_t P, std::size_t N) {
    const auto tp = static_cast<std::int64_t>(pos);
    const auto fp = static_cast<std::int64_t>(support - pos);
    const auto fn = static_cast<std::int64_t>(P) - tp;
    const auto tn = static_cast<std::int64_t>(N) - fp;
    return tp * fp + tn * fn;
}

// Frontier candidates arrive in decreasing-support order.
std::vector<Cut> frontier(const std::vector<Cut> &scan, std::size_t bin_size) {
    std::vector<Cut> kept;
    for (const auto &c : scan) {
        if (c.support < bin_size) break;
        if (!kept.empty()) {
            const auto &best = kept.back();
            // c.pos / c.support > best.pos / best.support
            if (static_cast<i128>(c.pos) * best.support <= static_cast<i128>(best.pos) * c.support)
                continue;
        }
        kept.push_back(c);
    }
    return kept;
}

std::vector<Cut> trim_to(std::vector<Cut> cuts, std::size_t limit) {
    if (cuts.size() <= limit) return cuts;
    std::vector<std::size_t> order(cuts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cuts[a].nu != cuts[b].nu) return cuts[a].nu < cuts[b].nu;
        return cuts[a].support > cuts[b].support;
    });
    order.resize(limit);
    std::sort(order.begin(), order.end());
    std::vector<Cut> out;
    out.reserve(limit);
    for (auto i : order) out.push_back(cuts[i]);
    return out;
}

Question make_threshold_question(QuestionOp op, const Cut &c) {
    Question q;
    q.op = op;
    q.threshold = c.threshold;
    q.support = c.support;
    return q;
}

} // namespace

const char *to_string(QuestionOp op) {
    switch (op) {
    case QuestionOp::GE: return ">=";
    case QuestionOp::LE: return "<=";
    case QuestionOp::In: return "in";
    }
    return "?";
}

QuestionOp question_op_from_string(const std::string &s) {
    if (s == ">=") return QuestionOp::GE;
    if (s == "<=") return QuestionOp::LE;
    if (s == "in") return QuestionOp::In;
    throw std::invalid_argument("unknown question operator '" + s + "'");
}

bool Question::answers_yes(double value) const {
    switch (op) {
    case QuestionOp::GE: return value >= threshold;
    case QuestionOp::LE: return value <= threshold;
    case QuestionOp::In: break;
    }
    throw std::logic_error("numeric value passed to a categorical question");
}

bool Question::answers_yes(const std::string &level) const {
    if (op != QuestionOp::In) throw std::logic_error("level passed to a numeric question");
    return std::binary_search(levels.begin(), levels.end(), level);
}

std::string Question::describe() const {
    if (op == QuestionOp::In) {
        std::string s = column_name + " in {";
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (i) s += ',';
            s += levels[i];
        }
        return s + '}';
    }
    return column_name + to_string(op) + format_number(threshold);
}

std::size_t BinarizeConfig::effective_bin_size(std::size_t n) const {
    if (bin_size) return *bin_size;
    const auto b = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)) / 4.0));
    return std::max<std::size_t>(1, b);
}

void BinarizeConfig::validate() const {
    if (bin_size && *bin_size == 0) throw std::invalid_argument("bin_size must be >= 1");
    if (nseg_numeric == 0) throw std::invalid_argument("nseg_numeric must be >= 1");
    if (categorical_dummy_threshold == 0)
        throw std::invalid_argument("categorical_dummy_threshold must be >= 1");
}

NumericCuts binarize_numeric(std::span<const double> values, std::span<const std::uint8_t> y,
                             const BinarizeConfig &cfg) {
    if (values.size() != y.size()) throw std::invalid_argument("values/y length mismatch");
    if (values.size() < 2) throw std::invalid_argument("binarize_numeric needs n >= 2");
    require_both_classes(y);
    const std::size_t n = values.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<Group> groups;
    for (auto i : order) {
        if (groups.empty() || values[i] != groups.back().value) groups.push_back({values[i]});
        ++groups.back().count;
        groups.back().pos += y[i];
    }
    if (groups.size() < 2) return std::vector<Question>{};

    std::size_t P = 0;
    for (const auto &g : groups) P += g.pos;
    const std::size_t N = n - P;

    // Perfect separability: all of one class strictly above the other.
    double min_pos = INFINITY, max_pos = -INFINITY, min_neg = INFINITY, max_neg = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i]) {
            min_pos = std::min(min_pos, values[i]);
            max_pos = std::max(max_pos, values[i]);
        } else {
            min_neg = std::min(min_neg, values[i]);
            max_neg = std::max(max_neg, values[i]);
        }
    }
    if (min_pos > max_neg) {
        Question q;
        q.op = QuestionOp::GE;
        q.threshold = midpoint(max_neg, min_pos, QuestionOp::GE);
        q.support = P;
        return SeparableSplit{q};
    }
    if (min_neg > max_pos) {
        Question q;
        q.op = QuestionOp::LE;
        q.threshold = midpoint(max_pos, min_neg, QuestionOp::LE);
        q.support = P;
        return SeparableSplit{q};
    }

    const std::size_t bin = cfg.effective_bin_size(n);
    const std::size_t d = groups.size();

    // Cut j sits between groups j and j+1.
    std::vector<std::size_t> cum_n(d), cum_p(d);
    for (std::size_t j = 0; j < d; ++j) {
        cum_n[j] = groups[j].count + (j ? cum_n[j - 1] : 0);
        cum_p[j] = groups[j].pos + (j ? cum_p[j - 1] : 0);
    }

    std::vector<Cut> ge_scan, le_scan;
    for (std::size_t j = 0; j + 1 < d; ++j) {
        const std::size_t s = n - cum_n[j], p = P - cum_p[j];
        ge_scan.push_back({midpoint(groups[j].value, groups[j + 1].value, QuestionOp::GE), s, p,
                           single_nu(s, p, P, N)});
    }
    for (std::size_t j = d - 1; j-- > 0;) {
        const std::size_t s = cum_n[j], p = cum_p[j];
        le_scan.push_back({midpoint(groups[j].value, groups[j + 1].value, QuestionOp::LE), s, p,
                           single_nu(s, p, P, N)});
    }

    std::vector<Question> out;
    for (const auto &c : trim_to(frontier(ge_scan, bin), cfg.nseg_numeric))
        out.push_back(make_threshold_question(QuestionOp::GE, c));
    for (const auto &c : trim_to(frontier(le_scan, bin), cfg.nseg_numeric))
        out.push_back(make_threshold_question(QuestionOp::LE, c));
    return out;
}

std::vector<Question> binarize_categorical(std::span<const std::string> values,
                                           std::span<const std::uint8_t> y,
                                           const BinarizeConfig &cfg) {
    if (values.size() != y.size()) throw std::invalid_argument("values/y length mismatch");
    std::map<std::string, std::pair<std::size_t, std::size_t>> stats; // level -> (count, pos)
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto &s = stats[values[i]];
        ++s.first;
        s.second += y[i];
    }
    if (stats.size() < 2) return {};

    struct LevelGroup {
        std::vector<std::string> levels;
        std::size_t count = 0;
        std::size_t pos = 0;
    };
    std::vector<LevelGroup> groups;
    for (const auto &[level, s] : stats) groups.push_back({{level}, s.first, s.second});

    if (groups.size() > cfg.categorical_dummy_threshold) {
        // Order by positive rate (ties keep level order), then merge the
        // closest adjacent pair until the group budget is met.
        std::stable_sort(groups.begin(), groups.end(), [](const LevelGroup &a, const LevelGroup &b) {
            return static_cast<i128>(a.pos) * b.count < static_cast<i128>(b.pos) * a.count;
        });
        auto gap = [&](std::size_t i) {
            const auto &a = groups[i];
            const auto &b = groups[i + 1];
            const i128 num = static_cast<i128>(b.pos) * a.count - static_cast<i128>(a.pos) * b.count;
            return std::pair<i128, i128>{num < 0 ? -num : num, static_cast<i128>(a.count) * b.count};
        };
        while (groups.size() > cfg.categorical_dummy_threshold) {
            std::size_t best = 0;
            auto best_gap = gap(0);
            for (std::size_t i = 1; i + 1 < groups.size(); ++i) {
                auto g = gap(i);
                // g.first/g.second < best_gap.first/best_gap.second
                if (g.first * best_gap.second < best_gap.first * g.second) {
                    best = i;
                    best_gap = g;
                }
            }
            auto &a = groups[best];
            auto &b = groups[best + 1];
            a.levels.insert(a.levels.end(), b.levels.begin(), b.levels.end());
            std::sort(a.levels.begin(), a.levels.end());
            a.count += b.count;
            a.pos += b.pos;
            groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        }
    }

    const std::size_t bin = cfg.effective_bin_size(values.size());
    std::vector<Question> out;
    for (auto &g : groups) {
        if (g.count < bin || g.count >= values.size()) continue;
        Question q;
        q.op = QuestionOp::In;
        q.levels = std::move(g.levels);
        q.support = g.count;
        out.push_back(std::move(q));
    }
    return out;
}

std::optional<BinaryMatrix> try_build_matrix(const Dataset &d, const BinaryTarget &y,
                                             const BinarizeConfig &cfg,
                                             std::span<const std::size_t> rows) {
    cfg.validate();
    if (y.size() != d.n) throw std::invalid_argument("target length does not match dataset");
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("build_matrix on an empty row set");

    BinaryMatrix B;
    B.n = n;
    B.positive_label = y.positive_label;
    B.positive = RowBits(n);
    B.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        B.y[i] = y.y.at(rows[i]);
        if (B.y[i]) B.positive.set(i);
    }
    require_both_classes(B.y);

    std::vector<Question> pool;
    const std::size_t bin = cfg.effective_bin_size(n);
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
        const auto &col = d.columns[c];
        std::vector<Question> qs;
        if (col.kind == ColumnKind::Numeric) {
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = col.numbers[rows[i]];
            auto cuts = binarize_numeric(vals, B.y, cfg);
            if (auto *sep = std::get_if<SeparableSplit>(&cuts)) {
                Question q = sep->question;
                q.column = c;
                q.column_name = col.name;
                if (!B.separable) B.separable = q;
                if (q.support >= bin) qs.push_back(std::move(q));
            } else {
                qs = std::move(std::get<std::vector<Question>>(cuts));
            }
        } else {
            std::vector<std::string> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = col.tokens[rows[i]];
            qs = binarize_categorical(vals, B.y, cfg);
        }
        for (auto &q : qs) {
            q.column = c;
            q.column_name = col.name;
            pool.push_back(std::move(q));
        }
    }

    std::map<std::vector<std::uint64_t>, std::size_t> seen;
    for (auto &q : pool) {
        RowBits bits(n);
        const auto &col = d.columns[q.column];
        for (std::size_t i = 0; i < n; ++i) {
            const bool yes = col.kind == ColumnKind::Numeric ? q.answers_yes(col.numbers[rows[i]])
                                                             : q.answers_yes(col.tokens[rows[i]]);
            if (yes) bits.set(i);
        }
        std::vector<std::uint64_t> key(bits.data(), bits.data() + bits.word_count());
        if (!seen.emplace(std::move(key), B.columns.size()).second) continue;
        q.support = bits.count();
        B.questions.push_back(std::move(q));
        B.columns.push_back(std::move(bits));
    }
    if (B.columns.empty()) return std::nullopt;
    return B;
}

BinaryMatrix build_matrix(const Dataset &d, const BinaryTarget &y, const BinarizeConfig &cfg,
                          std::span<const std::size_t> rows) {
    auto B = try_build_matrix(d, y, cfg, rows);
    if (!B) throw DataError("no candidate questions");
    return std::move(*B);
}

BinaryMatrix build_matrix(const Dataset &d, const BinaryTarget &y, const BinarizeConfig &cfg) {
    std::vector<std::size_t> rows(d.n);
    std::iota(rows.begin(), rows.end(), 0);
    return build_matrix(d, y, cfg, rows);
}

BinaryMatrix matrix_from_dense(const std::vector<std::vector<std::uint8_t>> &rows,
                               const std::vector<std::uint8_t> &y, std::vector<std::string> names) {
    if (rows.size() != y.size()) throw std::invalid_argument("matrix/y row count mismatch");
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    const std::size_t n = rows.size();
    const std::size_t m = rows.front().size();
    if (names.empty())
        for (std::size_t k = 0; k < m; ++k) names.push_back("f" + std::to_string(k + 1));
    if (names.size() != m) throw std::invalid_argument("column name count mismatch");

    BinaryMatrix B;
    B.n = n;
    B.y = y;
    B.positive_label = "1";
    B.positive = RowBits(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > 1) throw DataError("labels must be 0/1");
        if (y[i]) B.positive.set(i);
    }
    B.columns.assign(m, RowBits(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw DataError("ragged matrix at row " + std::to_string(i + 1));
        for (std::size_t k = 0; k < m; ++k) {
            if (rows[i][k] > 1) throw DataError("matrix entries must be 0/1");
            if (rows[i][k]) B.columns[k].set(i);
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        Question q;
        q.column = k;
        q.column_name = names[k];
        q.op = QuestionOp::GE;
        q.threshold = 0.5;
        q.support = B.columns[k].count();
        B.questions.push_back(std::move(q));
    }
    return B;
}

BinaryMatrix matrix_from_dataset(const Dataset &d, const BinaryTarget &y) {
    std::vector<std::vector<std::uint8_t>> rows(d.n, std::vector<std::uint8_t>(d.columns.size()));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < d.columns.size(); ++k) {
        const auto &col = d.columns[k];
        names.push_back(col.name);
        if (col.kind != ColumnKind::Numeric)
            throw DataError("column '" + col.name + "' is not a 0/1 column");
        for (std::size_t i = 0; i < d.n; ++i) {
            const double v = col.numbers[i];
            if (v != 0.0 && v != 1.0) throw DataError("column '" + col.name + "' is not a 0/1 column");
            rows[i][k] = v == 1.0;
        }
    }
    auto B = matrix_from_dense(rows, y.y, std::move(names));
    B.positive_label = y.positive_label;
    return B;
}

BinaryMatrix read_dl85(std::istream &in) {
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<std::uint8_t> y;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        int label = 0;
        if (!(ss >> label)) continue;
        if (label != 0 && label != 1) throw DataError("dl85 labels must be 0/1");
        std::vector<std::uint8_t> row;
        int v = 0;
        while (ss >> v) {
            if (v != 0 && v != 1) throw DataError("dl85 features must be 0/1");
            row.push_back(static_cast<std::uint8_t>(v));
        }
        y.push_back(static_cast<std::uint8_t>(label));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("empty dl85 file");
    return matrix_from_dense(rows, y);
}

BinaryMatrix load_dl85(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_dl85(in);
}

void write_matrix_csv(const BinaryMatrix &B, const std::vector<std::string> &labels,
                      const std::string &target_name, std::ostream &out) {
    if (labels.size() != B.n) throw std::invalid_argument("label count mismatch");
    Dataset d;
    d.n = B.n;
    d.target = labels;
    d.target_name = target_name;
    for (std::size_t k = 0; k < B.m(); ++k) {
        Column c;
        c.name = "q" + std::to_string(k) + ":" + B.questions[k].describe();
        c.kind = ColumnKind::Numeric;
        c.numbers.resize(B.n);
        for (std::size_t i = 0; i < B.n; ++i) c.numbers[i] = B.at(i, k) ? 1.0 : 0.0;
        d.columns.push_back(std::move(c));
    }
    write_csv(d, out);
}

} // namespace ortree

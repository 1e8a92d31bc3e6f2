#include "ortree/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace ortree {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string rule_text(const Tree &t, const TreeNode &n) {
    std::string s;
    for (std::size_t i = 0; i < n.rule.size(); ++i) {
        if (i) s += " OR ";
        s += t.questions.at(n.rule[i]).describe();
    }
    return s;
}

void print_summary(const Tree &t, std::ostream &out) {
    const auto total = static_cast<double>(t.root().stats.n());
    out << "Tree for " << (t.target_name.empty() ? "target" : t.target_name) << ": positive '"
        << t.positive_label << "', negative '" << t.negative_label << "'\n";
    out << t.nodes.size() << " nodes, " << t.leaf_count() << " leaves, depth " << t.depth() << "\n\n";
    for (const auto &n : t.nodes) {
        const std::string pad(2 * n.depth, ' ');
        out << pad << "Node " << n.id << (n.is_leaf() ? " (leaf)" : "") << " [" << n.label << "] p="
            << fixed(n.prob_positive, 4) << " cover=" << fixed(100.0 * static_cast<double>(n.stats.n()) / total, 2)
            << "% (" << n.stats.P << " " << t.positive_label << ", " << n.stats.N << " " << t.negative_label
            << ")\n";
        if (!n.is_leaf())
            out << pad << "  if " << rule_text(t, n) << " -> node " << *n.yes << ", else node " << *n.no << "\n";
    }
}

void print_confusion(const Confusion &c, std::ostream &out) {
    std::size_t w = 9;
    for (const auto &l : c.labels) w = std::max(w, l.size() + 2);
    auto cell = [&](const std::string &s) { out << std::string(w - std::min(w, s.size()), ' ') << s; };
    out << "Confusion matrix (rows predicted, columns actual):\n";
    cell("");
    for (const auto &l : c.labels) cell(l);
    out << "\n";
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        cell(c.labels[i]);
        for (std::size_t j = 0; j < c.labels.size(); ++j) cell(std::to_string(c.counts[i][j]));
        out << "\n";
    }
    out << "Accuracy: " << fixed(c.accuracy, 4) << " (" << c.total << " cases)\n";
}

void write_dot(const Tree &t, std::ostream &out) {
    out << "digraph tree {\n  node [shape=box];\n";
    for (const auto &n : t.nodes) {
        out << "  n" << n.id << " [label=\"" << n.id << ": " << dot_escape(n.label) << "\\np="
            << fixed(n.prob_positive, 3) << " n=" << n.stats.n();
        if (!n.is_leaf()) out << "\\n" << dot_escape(rule_text(t, n));
        out << "\"" << (n.is_leaf() ? ", style=rounded" : "") << "];\n";
    }
    for (const auto &n : t.nodes) {
        if (n.is_leaf()) continue;
        out << "  n" << n.id << " -> n" << *n.yes << " [label=\"yes\"];\n";
        out << "  n" << n.id << " -> n" << *n.no << " [label=\"no\", style=dashed];\n";
    }
    out << "}\n";
}

} // namespace ortree

#pragma once

#include "ortree/metrics.hpp"

#include <iosfwd>

namespace ortree {

/// Indented node listing: label, positive probability, coverage, class
/// counts and the split rule of each internal node.
void print_summary(const Tree &t, std::ostream &out);

void print_confusion(const Confusion &c, std::ostream &out);

/// Graphviz rendering; yes edges are solid, no edges dashed.
void write_dot(const Tree &t, std::ostream &out);

std::string rule_text(const Tree &t, const TreeNode &n);

} // namespace ortree

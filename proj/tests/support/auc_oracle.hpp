#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace testsupport {

// (wins + ties/2) / (P*N) over every positive-negative pair.
inline double pairwise_auc(const std::vector<double> &s, const std::vector<std::uint8_t> &y) {
    double credit = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (!y[i] || y[j]) continue;
            pairs += 1;
            credit += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    return credit / pairs;
}

inline double trapezoid(const std::vector<std::pair<double, double>> &pts) {
    double a = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        a += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2;
    return a;
}

} // namespace testsupport

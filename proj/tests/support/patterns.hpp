#pragma once

#include "ortree/dataset.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline double unit(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline const std::vector<std::string> &pattern_names() {
    static const std::vector<std::string> names{"obli", "grid", "diam", "circ", "ring", "sh88"};
    return names;
}

inline bool pattern_label(const std::string &name, double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    if (name == "obli") return y > 0.2 + 0.6 * x;
    if (name == "grid") return (x < 0.5) != (y < 0.5);
    if (name == "diam") return std::abs(dx) + std::abs(dy) < 0.5;
    if (name == "circ") return dx * dx + dy * dy < 0.4 * 0.4;
    if (name == "ring") {
        const double r2 = dx * dx + dy * dy;
        return r2 > 0.2 * 0.2 && r2 < 0.45 * 0.45;
    }
    if (name == "sh88") {
        const double a = (x - 0.3) * (x - 0.3) + dy * dy;
        const double b = (x - 0.7) * (x - 0.7) + dy * dy;
        return a < 0.27 * 0.27 || b < 0.27 * 0.27;
    }
    throw std::invalid_argument("unknown pattern " + name);
}

// Two numeric inputs uniform on the unit square, labelled by a 2D shape.
inline ortree::Dataset pattern_dataset(const std::string &name, std::size_t n = 600, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    ortree::Dataset d;
    d.columns = {{"x1", ortree::ColumnKind::Numeric, {}, {}, {}}, {"x2", ortree::ColumnKind::Numeric, {}, {}, {}}};
    d.target_name = "class";
    for (std::size_t i = 0; i < n; ++i) {
        const double x = unit(rng), y = unit(rng);
        d.columns[0].numbers.push_back(x);
        d.columns[1].numbers.push_back(y);
        d.target.push_back(pattern_label(name, x, y) ? "pos" : "neg");
    }
    d.n = n;
    d.classes = {"neg", "pos"};
    return d;
}

// Mixed numeric/categorical inputs with a noisy label depending on a few of them.
inline ortree::Dataset random_dataset(std::mt19937_64 &rng, std::size_t classes = 2) {
    const std::size_t n = 30 + rng() % 170;
    const std::size_t p = 1 + rng() % 5;
    ortree::Dataset d;
    d.target_name = "y";
    std::vector<double> signal(n, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        ortree::Column col;
        col.name = "v" + std::to_string(c + 1);
        const bool categorical = rng() % 3 == 0;
        const double weight = unit(rng) * 2 - 1;
        if (categorical) {
            col.kind = ortree::ColumnKind::Categorical;
            const std::size_t levels = 2 + rng() % 6;
            for (std::size_t i = 0; i < n; ++i) {
                const auto l = rng() % levels;
                col.tokens.push_back("L" + std::to_string(l));
                signal[i] += weight * (l % 2 ? 1.0 : -1.0);
            }
        } else {
            col.kind = ortree::ColumnKind::Numeric;
            const bool discrete = rng() % 2 == 0;
            for (std::size_t i = 0; i < n; ++i) {
                double v = unit(rng);
                if (discrete) v = std::floor(v * 6);
                col.numbers.push_back(v);
                signal[i] += weight * (discrete ? v / 6 : v);
            }
        }
        d.columns.push_back(std::move(col));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double z = signal[i] + 0.3 * (unit(rng) - 0.5);
        std::size_t k = 0;
        if (classes == 2)
            k = z > 0 ? 1 : 0;
        else
            k = static_cast<std::size_t>(std::floor((std::tanh(z) + 1) / 2 * static_cast<double>(classes)));
        k = std::min(k, classes - 1);
        d.target.push_back("c" + std::to_string(k));
    }
    // guarantee every class appears
    for (std::size_t k = 0; k < classes; ++k) d.target[k] = "c" + std::to_string(k);
    d.n = n;
    for (std::size_t k = 0; k < classes; ++k) d.classes.push_back("c" + std::to_string(k));
    return d;
}

} // namespace testsupport

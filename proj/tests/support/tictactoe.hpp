#pragma once

#include "ortree/binarizer.hpp"

#include <array>
#include <set>
#include <vector>

namespace testsupport {

// All distinct final positions of tic-tac-toe with x moving first, one-hot
// encoded per square as (x, o, blank). Label 1 = x has three in a row.
inline ortree::BinaryMatrix tictactoe_matrix() {
    using Board = std::array<char, 9>;
    static constexpr int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                        {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
    auto wins = [](const Board &b, char p) {
        for (const auto &l : lines)
            if (b[l[0]] == p && b[l[1]] == p && b[l[2]] == p) return true;
        return false;
    };
    std::set<Board> ends;
    auto rec = [&](auto &&self, Board &b, char turn) -> void {
        bool full = true;
        for (char c : b) full = full && c != 'b';
        if (wins(b, 'x') || wins(b, 'o') || full) {
            ends.insert(b);
            return;
        }
        for (int i = 0; i < 9; ++i) {
            if (b[i] != 'b') continue;
            b[i] = turn;
            self(self, b, turn == 'x' ? 'o' : 'x');
            b[i] = 'b';
        }
    };
    Board start;
    start.fill('b');
    rec(rec, start, 'x');

    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<std::uint8_t> y;
    for (const auto &b : ends) {
        std::vector<std::uint8_t> row;
        for (int s = 0; s < 9; ++s)
            for (char v : {'x', 'o', 'b'}) row.push_back(b[s] == v);
        rows.push_back(std::move(row));
        y.push_back(wins(b, 'x'));
    }
    return ortree::matrix_from_dense(rows, y);
}

} // namespace testsupport

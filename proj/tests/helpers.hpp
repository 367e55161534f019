#pragma once

#include <initializer_list>

#include "chipfire/chipfire.hpp"

namespace tt {

using namespace chipfire;

inline Vec vec(std::initializer_list<long long> xs) {
    Vec v;
    v.reserve(xs.size());
    for (long long x : xs) v.emplace_back(x);
    return v;
}

inline Mat mat(std::initializer_list<std::initializer_list<long long>> rows) {
    Mat m;
    m.reserve(rows.size());
    for (const auto& row : rows) m.push_back(vec(row));
    return m;
}

// The running example: det 5, adj [[4,1],[3,2]], d = (1,3).
inline ToppleMatrix example_matrix() {
    return ToppleMatrix::from_rows(mat({{2, -1}, {-3, 4}}));
}

inline RateVector example_rate() {
    return make_rate_vector(example_matrix(), vec({2, 1}));
}

// Replays a toppling sequence step by step, checking that every toppled
// vertex was critical, and that the representation matches the sequence.
// Independent of the stabilize loop: uses only row subtraction.
inline Vec replay(const ToppleMatrix& m, Vec u, const ToppleRecord& record) {
    Vec counts(m.rows().size(), 0);
    for (int v : record.sequence) {
        REQUIRE(v >= 1);
        REQUIRE(v <= m.size());
        REQUIRE(u[v - 1] >= m.rows()[v - 1][v - 1]);
        for (std::size_t j = 0; j < u.size(); ++j) u[j] -= m.rows()[v - 1][j];
        counts[v - 1] += 1;
    }
    REQUIRE(counts == record.representation);
    return u;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.size(), Vec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
    }
    return t;
}

}  // namespace tt

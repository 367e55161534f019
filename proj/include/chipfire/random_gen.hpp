#pragma once

#include <random>

#include "chipfire/matrix.hpp"

namespace chipfire {

/// Random integer matrix with nonpositive off-diagonal entries and
/// nonnegative row sums: diagonal in [1, max_diag], then a per-row budget of
/// unit decrements spread over the off-diagonal. Regenerates until the
/// determinant is nonzero, which makes the result a toppling matrix.
inline Mat random_toppling_rows(std::mt19937_64& rng, int n, int max_diag = 5) {
    std::uniform_int_distribution<int> diag(1, max_diag);
    for (;;) {
        Mat m(n, Vec(n, 0));
        for (int i = 0; i < n; ++i) {
            const int dii = diag(rng);
            m[i][i] = dii;
            if (n == 1) continue;
            std::uniform_int_distribution<int> budget_dist(0, dii);
            std::uniform_int_distribution<int> col(0, n - 2);
            for (int b = budget_dist(rng); b > 0; --b) {
                int j = col(rng);
                if (j >= i) ++j;
                m[i][j] -= 1;
            }
        }
        if (determinant(m) != 0) return m;
    }
}

inline ToppleMatrix random_toppling_matrix(std::mt19937_64& rng, int n, int max_diag = 5) {
    return ToppleMatrix::from_rows(random_toppling_rows(rng, n, max_diag));
}

/// Uniform stable configuration, entries in [0, Delta_ii - 1].
inline Vec random_stable(std::mt19937_64& rng, const ToppleMatrix& m) {
    Vec u(m.rows().size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::uniform_int_distribution<long long> entry(
            0, m.rows()[i][i].convert_to<long long>() - 1);
        u[i] = entry(rng);
    }
    return u;
}

/// Random configuration that is usually unstable: entries in [0, 3*Delta_ii].
inline Vec random_configuration(std::mt19937_64& rng, const ToppleMatrix& m) {
    Vec u(m.rows().size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::uniform_int_distribution<long long> entry(
            0, 3 * m.rows()[i][i].convert_to<long long>());
        u[i] = entry(rng);
    }
    return u;
}

}  // namespace chipfire

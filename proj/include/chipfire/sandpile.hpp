#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>

#include "chipfire/matrix.hpp"

namespace chipfire {

constexpr std::uint64_t kDefaultStepCap = 1'000'000;

/// An ordered toppling sequence (1-based vertex ids) with its representation
/// vector r_s = number of occurrences of s.
struct ToppleRecord {
    std::vector<int> sequence;
    Vec representation;
};

struct StabilizeResult {
    Vec configuration;
    ToppleRecord record;
};

inline void check_configuration(const ToppleMatrix& m, const Vec& u) {
    if (static_cast<int>(u.size()) != m.size()) {
        throw UsageError("configuration length does not match matrix dimension");
    }
    if (!all_nonneg(u)) {
        throw UsageError("not a configuration, negative entry in " + to_string(u));
    }
}

/// True iff no vertex is critical: u_i < Delta_ii for all i.
inline bool is_stable(const ToppleMatrix& m, const Vec& u) {
    check_configuration(m, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] >= m.rows()[i][i]) return false;
    }
    return true;
}

/// Topples critical vertex i: subtracts row Delta_i from u. Nonnegativity is
/// preserved because u_i >= Delta_ii and the off-diagonal entries are <= 0.
inline Vec topple(const ToppleMatrix& m, const Vec& u, int i) {
    check_configuration(m, u);
    m.check_vertex(i);
    if (u[i - 1] < m.rows()[i - 1][i - 1]) {
        throw UsageError("vertex " + std::to_string(i) + " is not critical in " + to_string(u));
    }
    return vec_sub(u, m.rows()[i - 1]);
}

/// Topples until stable. The resulting configuration and representation
/// vector do not depend on the policy; only the recorded sequence does.
/// The step cap guards against a non-toppling matrix smuggled past
/// validation and throws StepCapError when exceeded.
inline StabilizeResult stabilize(const ToppleMatrix& m, Vec u, const ChoicePolicy& policy = {},
                                 std::uint64_t step_cap = kDefaultStepCap) {
    check_configuration(m, u);
    const ChoicePolicy& pick = policy ? policy : lowest_choice();
    const int n = m.size();
    StabilizeResult out;
    out.record.representation.assign(n, 0);
    std::vector<int> critical;
    std::uint64_t steps = 0;
    for (;;) {
        critical.clear();
        for (int i = 1; i <= n; ++i) {
            if (u[i - 1] >= m.rows()[i - 1][i - 1]) critical.push_back(i);
        }
        if (critical.empty()) break;
        if (steps++ >= step_cap) {
            throw StepCapError("stabilize exceeded " + std::to_string(step_cap) +
                               " topplings; matrix is not avalanche-finite");
        }
        const int v = pick(critical);
        if (!std::binary_search(critical.begin(), critical.end(), v)) {
            throw UsageError("toppling policy chose a non-critical vertex " + std::to_string(v));
        }
        for (int j = 0; j < n; ++j) u[j] -= m.rows()[v - 1][j];
        out.record.sequence.push_back(v);
        out.record.representation[v - 1] += 1;
    }
    out.configuration = std::move(u);
    return out;
}

/// Avalanche operator A_i: adds one chip at vertex i and stabilizes.
inline Vec avalanche_op(const ToppleMatrix& m, const Vec& u, int i, const ChoicePolicy& policy = {},
                        std::uint64_t step_cap = kDefaultStepCap) {
    if (!is_stable(m, u)) {
        throw UsageError("avalanche_op requires a stable configuration, got " + to_string(u));
    }
    m.check_vertex(i);
    Vec v = u;
    v[i - 1] += 1;
    return stabilize(m, std::move(v), policy, step_cap).configuration;
}

/// (Delta,r)-recurrence: u is stable and u + r*Delta stabilizes back to u.
/// The sum u + r*Delta is formed exactly before any toppling.
inline bool is_recurrent(const ToppleMatrix& m, const RateVector& rate, const Vec& u,
                         std::uint64_t step_cap = kDefaultStepCap) {
    check_configuration(m, u);
    if (!is_stable(m, u)) return false;
    const Vec loaded = vec_add(u, rate.c);
    return stabilize(m, loaded, {}, step_cap).configuration == u;
}

/// Exact number of stable configurations, the product of the diagonal.
inline Int stable_box_size(const ToppleMatrix& m) {
    Int size = 1;
    for (std::size_t i = 0; i < m.rows().size(); ++i) size *= m.rows()[i][i];
    return size;
}

/// Visits every stable configuration in ascending lexicographic order.
template <class F>
inline void for_each_stable(const ToppleMatrix& m, F&& visit) {
    const std::size_t n = m.rows().size();
    Vec u(n, 0);
    for (;;) {
        visit(static_cast<const Vec&>(u));
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            u[pos] += 1;
            if (u[pos] < m.rows()[pos][pos]) break;
            u[pos] = 0;
            if (pos == 0) return;
        }
    }
}

constexpr std::uint64_t kDefaultBoxBudget = 10'000'000;

inline void check_box_budget(const ToppleMatrix& m, std::uint64_t budget) {
    const Int size = stable_box_size(m);
    if (size > budget) {
        throw BudgetError("stable box has " + size.str() + " configurations, budget is " +
                          std::to_string(budget));
    }
}

/// All (Delta,r)-recurrent configurations, ascending lexicographic. Iterates
/// the stable box and filters with is_recurrent.
inline std::vector<Vec> enumerate_recurrent(const ToppleMatrix& m, const RateVector& rate,
                                            std::uint64_t box_budget = kDefaultBoxBudget) {
    check_box_budget(m, box_budget);
    std::vector<Vec> out;
    for_each_stable(m, [&](const Vec& u) {
        if (is_recurrent(m, rate, u)) out.push_back(u);
    });
    return out;
}

}  // namespace chipfire

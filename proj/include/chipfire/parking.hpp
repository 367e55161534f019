#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "chipfire/sandpile.hpp"

namespace chipfire {

constexpr std::uint64_t kDefaultOmegaBudget = 10'000'000;
constexpr int kDefaultSubsetBudget = 20;

/// <chi, Delta^j>, the pairing of a multiplicity vector with the j-th column.
inline Int column_pairing(const ToppleMatrix& m, const Vec& chi, int j) {
    if (chi.size() != m.rows().size()) {
        throw UsageError("column_pairing: vector length does not match matrix dimension");
    }
    m.check_vertex(j);
    Int s = 0;
    for (std::size_t i = 0; i < chi.size(); ++i) s += chi[i] * m.rows()[i][j - 1];
    return s;
}

/// Number of candidate vectors the Omega(r) scan would visit, prod(r_i + 1).
inline Int omega_scan_size(const RateVector& rate) {
    Int size = 1;
    for (const Int& ri : rate.r) size *= ri + 1;
    return size;
}

/// Visits every chi with 0 <= chi(i) <= r_i and chi != 0 in ascending
/// lexicographic order. The visitor returns false to stop early.
template <class F>
inline void for_each_omega(const RateVector& rate, F&& visit) {
    const std::size_t n = rate.r.size();
    Vec chi(n, 0);
    for (;;) {
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            chi[pos] += 1;
            if (chi[pos] <= rate.r[pos]) break;
            chi[pos] = 0;
            if (pos == 0) return;
        }
        if (!visit(static_cast<const Vec&>(chi))) return;
    }
}

struct OmegaScanResult {
    bool holds = false;
    /// First chi (in scan order) with no admissible vertex; empty when holds.
    std::optional<Vec> witness;
};

namespace detail {

/// Shared Omega(r) scan: requires for every chi some j with chi(j) >= 1 and
/// threshold(j) < <chi, Delta^j>. Parking uses threshold = f; the r-allowed
/// test uses threshold = d - u, which may have negative entries.
inline OmegaScanResult omega_scan(const ToppleMatrix& m, const RateVector& rate,
                                  const Vec& threshold, std::uint64_t budget) {
    const Int scan = omega_scan_size(rate);
    if (scan > budget) {
        throw BudgetError("Omega(r) scan would visit " + scan.str() +
                          " vectors, budget is " + std::to_string(budget));
    }
    const std::size_t n = threshold.size();
    OmegaScanResult out;
    out.holds = true;
    for_each_omega(rate, [&](const Vec& chi) {
        for (std::size_t j = 0; j < n; ++j) {
            if (chi[j] >= 1 && threshold[j] < column_pairing(m, chi, static_cast<int>(j) + 1)) {
                return true;
            }
        }
        out.holds = false;
        out.witness = chi;
        return false;
    });
    return out;
}

/// One maximal run of Algorithm A. The thresholds may be negative (r-allowed
/// path); the parking wrapper rejects negative f before calling. Any
/// tie-break decides membership identically; only the sequence differs.
struct GreedyRun {
    bool completed = false;
    std::vector<int> sequence;
    std::uint64_t stall_step = 0;  // 1-based step whose candidate set was empty
};

inline GreedyRun greedy_run(const ToppleMatrix& m, const RateVector& rate, const Vec& threshold,
                            const ChoicePolicy& tie_break) {
    const ChoicePolicy& pick = tie_break ? tie_break : lowest_choice();
    const int n = m.size();
    Vec chi = rate.r;
    Vec pairing = rate.c;  // <chi, Delta^j> starts at (r*Delta)_j
    GreedyRun run;
    std::vector<int> candidates;
    for (Int remaining = rate.m; remaining > 0; --remaining) {
        candidates.clear();
        for (int j = 1; j <= n; ++j) {
            if (chi[j - 1] > 0 && threshold[j - 1] < pairing[j - 1]) candidates.push_back(j);
        }
        if (candidates.empty()) {
            run.stall_step = run.sequence.size() + 1;
            return run;
        }
        const int v = pick(candidates);
        if (!std::binary_search(candidates.begin(), candidates.end(), v)) {
            throw UsageError("tie-break policy chose an inadmissible vertex " +
                             std::to_string(v));
        }
        chi[v - 1] -= 1;
        for (int j = 0; j < n; ++j) pairing[j] -= m.rows()[v - 1][j];
        run.sequence.push_back(v);
    }
    run.completed = true;
    return run;
}

}  // namespace detail

struct ParkingScanResult {
    bool parking = false;
    std::optional<Vec> witness_chi;
};

inline void check_candidate(const ToppleMatrix& m, const Vec& f) {
    if (static_cast<int>(f.size()) != m.size()) {
        throw UsageError("candidate length does not match matrix dimension");
    }
    if (!all_nonneg(f)) {
        throw UsageError("parking candidate has a negative entry: " + to_string(f));
    }
}

/// Definition test: f is (Delta,r)-parking iff every chi in Omega(r) admits a
/// vertex j with chi(j) >= 1 and f(j) < <chi, Delta^j>. Full scan; this is
/// the oracle, not the fast path. Refuses when prod(r_i + 1) exceeds budget.
inline ParkingScanResult is_parking_bruteforce(const ToppleMatrix& m, const RateVector& rate,
                                               const Vec& f,
                                               std::uint64_t budget = kDefaultOmegaBudget) {
    check_candidate(m, f);
    OmegaScanResult scan = detail::omega_scan(m, rate, f, budget);
    return ParkingScanResult{scan.holds, std::move(scan.witness)};
}

struct ParkingSequenceResult {
    bool parking = false;
    /// The certificate sequence pi(1..m), filled when f parks.
    std::vector<int> sequence;
    /// 1-based step whose candidate set U was empty; 0 when parking.
    std::uint64_t stall_step = 0;
};

/// Algorithm A: repeatedly remove from the residual multiset a vertex j with
/// f(j) < <chi, Delta^j>. Completes all m steps iff f is parking; the
/// tie-break only changes the reported sequence.
inline ParkingSequenceResult is_parking_greedy(const ToppleMatrix& m, const RateVector& rate,
                                               const Vec& f, const ChoicePolicy& tie_break = {}) {
    check_candidate(m, f);
    detail::GreedyRun run = detail::greedy_run(m, rate, f, tie_break);
    return ParkingSequenceResult{run.completed, std::move(run.sequence), run.stall_step};
}

/// All Delta-parking functions, ascending lexicographic. Iterates the stable
/// box (outside it the chi = e_j case already fails) and tests each candidate
/// with Algorithm A under the canonical rate unless another rate is given.
inline std::vector<Vec> enumerate_parking(const ToppleMatrix& m, const RateVector& rate,
                                          std::uint64_t box_budget = kDefaultBoxBudget) {
    check_box_budget(m, box_budget);
    std::vector<Vec> out;
    for_each_stable(m, [&](const Vec& f) {
        if (detail::greedy_run(m, rate, f, {}).completed) out.push_back(f);
    });
    return out;
}

inline std::vector<Vec> enumerate_parking(const ToppleMatrix& m,
                                          std::uint64_t box_budget = kDefaultBoxBudget) {
    return enumerate_parking(m, canonical_rate(m), box_budget);
}

inline void check_in_stable_box(const ToppleMatrix& m, const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != m.size()) {
        throw UsageError(std::string(what) + ": length does not match matrix dimension");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] >= m.rows()[i][i]) {
            throw UsageError(std::string(what) + ": " + to_string(v) +
                             " is outside the stable box");
        }
    }
}

/// The bijection u = d - f from parking functions to recurrent
/// configurations; an involution on the stable box.
inline Vec parking_to_recurrent(const ToppleMatrix& m, const Vec& f) {
    check_in_stable_box(m, f, "parking_to_recurrent");
    return vec_sub(d_cap(m), f);
}

inline Vec recurrent_to_parking(const ToppleMatrix& m, const Vec& u) {
    check_in_stable_box(m, u, "recurrent_to_parking");
    return vec_sub(d_cap(m), u);
}

/// r-allowed test: every chi in Omega(r) admits j with chi(j) >= 1 and
/// u_j >= Delta_jj - <chi, Delta^j>. Delegates to the Algorithm A core on
/// d - u, whose entries may be negative when u is unstable; the comparison
/// (d - u)_j < <chi, Delta^j> is the same inequality rearranged.
inline bool is_r_allowed(const ToppleMatrix& m, const RateVector& rate, const Vec& u) {
    check_configuration(m, u);
    return detail::greedy_run(m, rate, vec_sub(d_cap(m), u), {}).completed;
}

/// Direct Omega(r)-scan variant of the r-allowed test; the oracle.
inline bool is_r_allowed_bruteforce(const ToppleMatrix& m, const RateVector& rate, const Vec& u,
                                    std::uint64_t budget = kDefaultOmegaBudget) {
    check_configuration(m, u);
    return detail::omega_scan(m, rate, vec_sub(d_cap(m), u), budget).holds;
}

/// Dhar's subset-based allowed test: every nonempty I admits j in I with
/// u_j >= sum_{i in I, i != j} (-Delta_ij). Kept for comparison only; it is
/// not equivalent to recurrence for general toppling matrices.
inline bool is_dhar_allowed(const ToppleMatrix& m, const Vec& u,
                            int subset_budget = kDefaultSubsetBudget) {
    check_configuration(m, u);
    const int n = m.size();
    if (n > subset_budget || n > 31) {
        throw BudgetError("Dhar subset scan over 2^" + std::to_string(n) +
                          " - 1 subsets exceeds budget n <= " + std::to_string(subset_budget));
    }
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool admits = false;
        for (int j = 0; j < n && !admits; ++j) {
            if (!(mask & (1u << j))) continue;
            Int bound = 0;
            for (int i = 0; i < n; ++i) {
                if (i != j && (mask & (1u << i))) bound -= m.rows()[i][j];
            }
            admits = u[j] >= bound;
        }
        if (!admits) return false;
    }
    return true;
}

}  // namespace chipfire

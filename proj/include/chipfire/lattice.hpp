#pragma once

#include <cassert>
#include <optional>
#include <set>
#include <utility>

#include "chipfire/parking.hpp"

namespace chipfire {

struct SameClassResult {
    bool same = false;
    /// Integer x with v - w = x*Delta, present when same.
    std::optional<Vec> witness;
};

/// Equivalence modulo the row lattice <Delta>: v ~ w iff v - w = x*Delta for
/// an integer vector x. Decided exactly via x = (v - w)*adj / det with a
/// componentwise divisibility check; det != 0 makes the solution unique.
inline SameClassResult same_class(const ToppleMatrix& m, const Vec& v, const Vec& w) {
    if (static_cast<int>(v.size()) != m.size() || static_cast<int>(w.size()) != m.size()) {
        throw UsageError("same_class: vector length does not match matrix dimension");
    }
    const Vec g = vec_sub(v, w);
    const Vec y = row_times_matrix(g, m.adj());
    Vec x(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] % m.det() != 0) return {};
        x[j] = y[j] / m.det();
    }
    return SameClassResult{true, std::move(x)};
}

/// Order of Z^n / <Delta>, which is det Delta.
inline Int group_order(const ToppleMatrix& m) { return m.det(); }

/// The unique recurrent configuration equivalent to v: shift by multiples of
/// det*1 (a lattice element, det*1 = (1*adj)*Delta) until nonnegative,
/// stabilize, then iterate u <- stabilize(u + r*Delta) to its fixed point.
/// Every cycle of that map has length one, so successive-iterate comparison
/// terminates within the stable-box count; exceeding the cap is an engine
/// bug, not bad input.
inline Vec recurrent_representative(const ToppleMatrix& m, const RateVector& rate, const Vec& v,
                                    std::uint64_t step_cap = kDefaultStepCap) {
    if (static_cast<int>(v.size()) != m.size()) {
        throw UsageError("recurrent_representative: vector length does not match matrix dimension");
    }
    Int k = 0;
    for (const Int& x : v) {
        if (x < 0) {
            const Int need = (-x + m.det() - 1) / m.det();
            if (need > k) k = need;
        }
    }
    Vec u = v;
    if (k > 0) {
        const Int shift = k * m.det();
        for (Int& x : u) x += shift;
    }
    u = stabilize(m, std::move(u), {}, step_cap).configuration;
    const Int iteration_cap = stable_box_size(m) + 1;
#ifndef NDEBUG
    std::set<Vec> history;  // every cycle of the map must have length one
#endif
    for (Int i = 0; i < iteration_cap; ++i) {
        Vec next = stabilize(m, vec_add(u, rate.c), {}, step_cap).configuration;
        if (next == u) return u;
#ifndef NDEBUG
        assert(history.insert(u).second && "revisited a non-fixed-point state");
#endif
        u = std::move(next);
    }
    throw Error("recurrent_representative: no fixed point within the stable-box bound");
}

/// Outcome of the exhaustive class audit; violations carry witnesses.
struct AuditReport {
    Int det = 0;
    std::size_t parking_count = 0;
    std::size_t recurrent_count = 0;
    std::vector<std::string> violations;

    bool passed() const { return violations.empty(); }
};

/// Enumerates both sets under the canonical rate and checks: distinct parking
/// functions never share a lattice class, d - u maps the recurrent set
/// bijectively onto the parking set, and both counts equal det.
inline AuditReport class_audit(const ToppleMatrix& m,
                               std::uint64_t box_budget = kDefaultBoxBudget) {
    AuditReport report;
    report.det = m.det();
    const RateVector rate = canonical_rate(m);
    const std::vector<Vec> parking = enumerate_parking(m, rate, box_budget);
    const std::vector<Vec> recurrent = enumerate_recurrent(m, rate, box_budget);
    report.parking_count = parking.size();
    report.recurrent_count = recurrent.size();

    for (std::size_t a = 0; a < parking.size(); ++a) {
        for (std::size_t b = a + 1; b < parking.size(); ++b) {
            const SameClassResult res = same_class(m, parking[a], parking[b]);
            if (res.same) {
                report.violations.push_back("distinct parking functions " + to_string(parking[a]) +
                                            " and " + to_string(parking[b]) +
                                            " are equivalent, x = " + to_string(*res.witness));
            }
        }
    }

    const std::set<Vec> parking_set(parking.begin(), parking.end());
    std::set<Vec> images;
    for (const Vec& u : recurrent) {
        const Vec f = recurrent_to_parking(m, u);
        if (!parking_set.count(f)) {
            report.violations.push_back("recurrent " + to_string(u) + " maps to " + to_string(f) +
                                        " which is not a parking function");
        }
        if (!images.insert(f).second) {
            report.violations.push_back("parking image " + to_string(f) +
                                        " hit twice by the recurrent set");
        }
    }
    if (images.size() != parking_set.size()) {
        report.violations.push_back("d - u image covers " + std::to_string(images.size()) +
                                    " of " + std::to_string(parking_set.size()) +
                                    " parking functions");
    }

    if (Int(parking.size()) != m.det()) {
        report.violations.push_back("parking count " + std::to_string(parking.size()) +
                                    " != det " + m.det().str());
    }
    if (Int(recurrent.size()) != m.det()) {
        report.violations.push_back("recurrent count " + std::to_string(recurrent.size()) +
                                    " != det " + m.det().str());
    }
    return report;
}

}  // namespace chipfire

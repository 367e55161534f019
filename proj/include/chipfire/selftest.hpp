#pragma once

#include <chrono>
#include <set>
#include <utility>

#include "chipfire/chipfire.hpp"

namespace chipfire {

/// One acceptance check: exact pass/fail plus a short human-readable detail.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SelftestConfig {
    std::uint64_t seed = 20250811;
    int pool_size = 200;              // random toppling matrices, n cycling 1..4
    int confluence_pairs = 100;       // (matrix, configuration) samples
    int confluence_orders = 20;       // randomized toppling orders per pair
    int abelian_samples = 50;         // stable configurations for commutation
    int digraph_samples = 20;         // arborescence identity samples
    int law_samples = 20;             // scaling/monotonicity/intersection samples
    int representative_samples = 100; // random vectors for representatives
};

namespace selftest_detail {

struct PoolEntry {
    ToppleMatrix matrix;
    std::vector<Vec> parking;    // filled by the counting criterion
    std::vector<Vec> recurrent;
};

inline ToppleMatrix golden_matrix() {
    return ToppleMatrix::from_rows({{Int(2), Int(-1)}, {Int(-3), Int(4)}});
}

inline std::vector<Vec> golden_parking() {
    return {{Int(0), Int(0)}, {Int(0), Int(1)}, {Int(0), Int(2)}, {Int(1), Int(0)},
            {Int(1), Int(1)}};
}

inline std::vector<Vec> golden_recurrent() {
    return {{Int(0), Int(2)}, {Int(0), Int(3)}, {Int(1), Int(1)}, {Int(1), Int(2)},
            {Int(1), Int(3)}};
}

/// A rate vector distinct from canonical and 2*canonical: canonical + det*1
/// when that is a rate vector, else a strictly positive adjugate row, else
/// 3*canonical (always valid).
inline RateVector alternative_rate(const ToppleMatrix& m, const RateVector& canonical) {
    std::vector<Vec> candidates;
    Vec shifted = canonical.r;
    for (Int& x : shifted) x += m.det();
    candidates.push_back(std::move(shifted));
    for (std::size_t i = 0; i < m.rows().size(); ++i) {
        if (all_positive(m.adj()[i])) candidates.push_back(m.adj()[i]);
    }
    candidates.push_back(vec_scale(3, canonical.r));
    const Vec doubled = vec_scale(2, canonical.r);
    for (Vec& r : candidates) {
        if (r != canonical.r && r != doubled && is_rate_vector(m, r)) {
            return make_rate_vector(m, std::move(r));
        }
    }
    return make_rate_vector(m, vec_scale(3, canonical.r));
}

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
    CriterionResult result;
    result.id = id;
    result.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
        result.passed = body(result.detail);
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

inline bool within(CriterionResult& r, double limit) {
    if (r.seconds <= limit) return true;
    r.passed = false;
    r.detail += " [exceeded " + std::to_string(limit) + "s limit]";
    return false;
}

}  // namespace selftest_detail

/// Runs the whole battery and returns one result per criterion. Deterministic
/// for a fixed config, including every randomized choice.
inline std::vector<CriterionResult> run_acceptance(const SelftestConfig& config = {}) {
    using namespace selftest_detail;
    if (config.pool_size < 4) {
        throw UsageError("selftest needs at least 4 matrices to cover n in 1..4");
    }
    std::vector<CriterionResult> results;

    const ToppleMatrix golden = golden_matrix();
    const RateVector golden_r = make_rate_vector(golden, {Int(2), Int(1)});

    results.push_back(timed(1, "golden parking set", [&](std::string& detail) {
        const std::vector<Vec> p = enumerate_parking(golden, golden_r);
        detail = std::to_string(p.size()) + " functions";
        return p == golden_parking();
    }));
    within(results.back(), 1.0);

    results.push_back(timed(2, "golden recurrent set", [&](std::string& detail) {
        const std::vector<Vec> r = enumerate_recurrent(golden, golden_r);
        detail = std::to_string(r.size()) + " configurations";
        return r == golden_recurrent();
    }));
    within(results.back(), 1.0);

    // Shared pool for the counting criterion and everything that reuses it.
    std::mt19937_64 pool_rng(config.seed);
    std::vector<PoolEntry> pool;
    pool.reserve(config.pool_size);
    for (int i = 0; i < config.pool_size; ++i) {
        const int n = 1 + i % 4;
        pool.push_back(PoolEntry{random_toppling_matrix(pool_rng, n, 5), {}, {}});
    }

    results.push_back(timed(3, "parking and recurrent counts equal det", [&](std::string& detail) {
        Int max_det = 0;
        for (PoolEntry& entry : pool) {
            const RateVector rate = canonical_rate(entry.matrix);
            entry.parking = enumerate_parking(entry.matrix, rate);
            entry.recurrent = enumerate_recurrent(entry.matrix, rate);
            if (entry.matrix.det() > max_det) max_det = entry.matrix.det();
            if (Int(entry.parking.size()) != entry.matrix.det() ||
                Int(entry.recurrent.size()) != entry.matrix.det()) {
                detail = "count mismatch, det " + entry.matrix.det().str() + ", |P| " +
                         std::to_string(entry.parking.size()) + ", |R| " +
                         std::to_string(entry.recurrent.size());
                return false;
            }
        }
        detail = std::to_string(pool.size()) + " matrices, max det " + max_det.str();
        return true;
    }));
    within(results.back(), 60.0);

    results.push_back(timed(4, "d - f is a bijection onto the recurrent set",
                            [&](std::string& detail) {
        std::size_t pairs = 0;
        for (const PoolEntry& entry : pool) {
            std::vector<Vec> image;
            image.reserve(entry.parking.size());
            for (const Vec& f : entry.parking) {
                image.push_back(parking_to_recurrent(entry.matrix, f));
            }
            std::sort(image.begin(), image.end());
            if (image != entry.recurrent) {
                detail = "image mismatch on a det " + entry.matrix.det().str() + " matrix";
                return false;
            }
            pairs += image.size();
        }
        detail = std::to_string(pairs) + " pairs across " + std::to_string(pool.size()) +
                 " matrices";
        return true;
    }));

    results.push_back(timed(5, "greedy test equals brute-force scan", [&](std::string& detail) {
        int exercised = 0;
        long long candidates = 0;
        bool ok = true;
        for (std::size_t k = 0; k < pool.size() && ok; ++k) {
            const ToppleMatrix& m = pool[k].matrix;
            if (m.size() > 3) continue;
            const RateVector rate = canonical_rate(m);
            if (omega_scan_size(rate) > 100000) continue;
            ++exercised;
            const ChoicePolicy policies[3] = {lowest_choice(), highest_choice(),
                                              random_choice(config.seed + k)};
            for_each_stable(m, [&](const Vec& f) {
                ++candidates;
                const bool oracle = is_parking_bruteforce(m, rate, f).parking;
                for (const ChoicePolicy& tie : policies) {
                    if (is_parking_greedy(m, rate, f, tie).parking != oracle) {
                        detail = "disagreement at f = " + to_string(f);
                        ok = false;
                    }
                }
            });
        }
        if (ok) {
            detail = std::to_string(exercised) + " matrices, " + std::to_string(candidates) +
                     " candidates, 3 tie-breaks";
        }
        return ok;
    }));

    results.push_back(timed(6, "parking and recurrent sets are rate independent",
                            [&](std::string& detail) {
        for (const PoolEntry& entry : pool) {
            const RateVector canon = canonical_rate(entry.matrix);
            const RateVector doubled = make_rate_vector(entry.matrix, vec_scale(2, canon.r));
            const RateVector third = alternative_rate(entry.matrix, canon);
            for (const RateVector* rate : {&doubled, &third}) {
                if (enumerate_parking(entry.matrix, *rate) != entry.parking ||
                    enumerate_recurrent(entry.matrix, *rate) != entry.recurrent) {
                    detail = "set changed under rate " + to_string(rate->r);
                    return false;
                }
            }
        }
        detail = std::to_string(pool.size()) + " matrices, 3 rates each";
        return true;
    }));

    results.push_back(timed(7, "stabilization is order independent", [&](std::string& detail) {
        std::mt19937_64 rng(config.seed + 7);
        for (int i = 0; i < config.confluence_pairs; ++i) {
            const ToppleMatrix& m = pool[rng() % pool.size()].matrix;
            const Vec u = random_configuration(rng, m);
            const StabilizeResult base = stabilize(m, u);
            for (int k = 0; k < config.confluence_orders; ++k) {
                const StabilizeResult other = stabilize(m, u, random_choice(rng()));
                if (other.configuration != base.configuration ||
                    other.record.representation != base.record.representation) {
                    detail = "order dependence from " + to_string(u);
                    return false;
                }
            }
        }
        detail = std::to_string(config.confluence_pairs) + " pairs x " +
                 std::to_string(config.confluence_orders) + " orders";
        return true;
    }));

    results.push_back(timed(8, "avalanche operators commute", [&](std::string& detail) {
        std::mt19937_64 rng(config.seed + 8);
        int checked_pairs = 0;
        for (int i = 0; i < config.abelian_samples; ++i) {
            const ToppleMatrix* m = &pool[rng() % pool.size()].matrix;
            while (m->size() < 2) m = &pool[rng() % pool.size()].matrix;
            const Vec u = random_stable(rng, *m);
            for (int a = 1; a <= m->size(); ++a) {
                for (int b = a + 1; b <= m->size(); ++b) {
                    ++checked_pairs;
                    if (avalanche_op(*m, avalanche_op(*m, u, a), b) !=
                        avalanche_op(*m, avalanche_op(*m, u, b), a)) {
                        detail = "A_" + std::to_string(a) + ", A_" + std::to_string(b) +
                                 " differ at " + to_string(u);
                        return false;
                    }
                }
            }
        }
        detail = std::to_string(config.abelian_samples) + " configurations, " +
                 std::to_string(checked_pairs) + " operator pairs";
        return true;
    }));

    results.push_back(timed(9, "arborescence count equals prod(r) * det", [&](std::string& detail) {
        const SandpileDigraph d = build_digraph(golden, golden_r);
        if (count_arborescences(d, 0) != 10) {
            detail = "golden digraph count != 10";
            return false;
        }
        std::mt19937_64 rng(config.seed + 9);
        int produced = 0;
        while (produced < config.digraph_samples) {
            const int n = 1 + static_cast<int>(rng() % 3);
            const ToppleMatrix m = random_toppling_matrix(rng, n, 5);
            // scan for a rate vector with entries at most 2
            Vec small;
            Vec probe(n, 1);
            for (;;) {
                if (is_rate_vector(m, probe)) {
                    small = probe;
                    break;
                }
                int pos = n - 1;
                while (pos >= 0 && probe[pos] == 2) probe[pos--] = 1;
                if (pos < 0) break;
                probe[pos] += 1;
            }
            if (small.empty()) continue;
            ++produced;
            const RateVector rate = make_rate_vector(m, small);
            Int expected = m.det();
            for (const Int& ri : rate.r) expected *= ri;
            if (count_arborescences(build_digraph(m, rate), 0) != expected) {
                detail = "identity failed for rate " + to_string(rate.r);
                return false;
            }
        }
        detail = "golden count 10; " + std::to_string(produced) + " random digraphs";
        return true;
    }));
    within(results.back(), 10.0);

    results.push_back(timed(10, "scaling, monotonicity and intersection laws",
                            [&](std::string& detail) {
        std::mt19937_64 rng(config.seed + 10);
        for (int i = 0; i < config.law_samples; ++i) {
            const ToppleMatrix m = random_toppling_matrix(rng, 1 + static_cast<int>(rng() % 3), 4);
            const RateVector r = canonical_rate(m);
            const RateVector other = alternative_rate(m, r);
            const RateVector doubled = make_rate_vector(m, vec_scale(2, r.r));
            const RateVector sum = make_rate_vector(m, vec_add(r.r, other.r));

            const std::vector<Vec> p = enumerate_parking(m, r);
            const std::vector<Vec> p_other = enumerate_parking(m, other);
            const std::vector<Vec> p_sum = enumerate_parking(m, sum);

            if (enumerate_parking(m, doubled) != p) {
                detail = "scaling law failed";
                return false;
            }
            // sum >= r componentwise, so the sum set must be contained in p
            const std::set<Vec> p_set(p.begin(), p.end());
            for (const Vec& f : p_sum) {
                if (!p_set.count(f)) {
                    detail = "monotonicity failed at " + to_string(f);
                    return false;
                }
            }
            std::vector<Vec> intersection;
            const std::set<Vec> other_set(p_other.begin(), p_other.end());
            for (const Vec& f : p) {
                if (other_set.count(f)) intersection.push_back(f);
            }
            if (p_sum != intersection) {
                detail = "intersection law failed";
                return false;
            }
        }
        detail = std::to_string(config.law_samples) + " matrices, exhaustive boxes";
        return true;
    }));

    results.push_back(timed(11, "class audit and recurrent representatives",
                            [&](std::string& detail) {
        for (const PoolEntry& entry : pool) {
            const AuditReport report = class_audit(entry.matrix);
            if (!report.passed()) {
                detail = report.violations.front();
                return false;
            }
        }
        std::mt19937_64 rng(config.seed + 11);
        std::uniform_int_distribution<int> entry_dist(-10, 10);
        for (int i = 0; i < config.representative_samples; ++i) {
            const ToppleMatrix& m = pool[rng() % pool.size()].matrix;
            const RateVector rate = canonical_rate(m);
            Vec v(m.rows().size());
            for (Int& x : v) x = entry_dist(rng);
            const Vec rep = recurrent_representative(m, rate, v);
            if (!is_recurrent(m, rate, rep) || !same_class(m, v, rep).same) {
                detail = "bad representative for " + to_string(v);
                return false;
            }
        }
        detail = std::to_string(pool.size()) + " audits, " +
                 std::to_string(config.representative_samples) + " representatives";
        return true;
    }));

    results.push_back(timed(12, "stable configurations: allowed iff recurrent",
                            [&](std::string& detail) {
        long long checked = 0;
        bool ok = true;
        for (const PoolEntry& entry : pool) {
            if (!ok) break;
            const RateVector rate = canonical_rate(entry.matrix);
            for_each_stable(entry.matrix, [&](const Vec& u) {
                ++checked;
                if (is_r_allowed(entry.matrix, rate, u) !=
                    is_recurrent(entry.matrix, rate, u)) {
                    detail = "disagreement at " + to_string(u);
                    ok = false;
                }
            });
        }
        if (ok) detail = std::to_string(checked) + " stable configurations";
        return ok;
    }));

    return results;
}

}  // namespace chipfire

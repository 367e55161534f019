#pragma once

#include <utility>

#include "chipfire/matrix.hpp"

namespace chipfire {

/// The auxiliary multigraph D(Delta, r) on vertices {0, ..., n} with vertex 0
/// the sink. multiplicity[a][b] counts directed edges a -> b; the sink has no
/// out-edges and there are no self-loops.
struct SandpileDigraph {
    int n = 0;
    std::vector<std::vector<Int>> multiplicity;  // (n+1) x (n+1)
};

/// Delta~(r) = diag(r) * Delta; its column sums are (r*Delta)_j >= 0.
inline Mat scaled_matrix(const ToppleMatrix& m, const RateVector& rate) {
    Mat out = m.rows();
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < out.size(); ++j) out[i][j] *= rate.r[i];
    }
    return out;
}

/// Rule (a): -Delta~_ij edges j -> i for i != j. Rule (b): (r*Delta)_j edges
/// j -> 0.
inline SandpileDigraph build_digraph(const ToppleMatrix& m, const RateVector& rate) {
    const int n = m.size();
    SandpileDigraph d;
    d.n = n;
    d.multiplicity.assign(n + 1, std::vector<Int>(n + 1, 0));
    const Mat scaled = scaled_matrix(m, rate);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i != j) d.multiplicity[j][i] = -scaled[i - 1][j - 1];
        }
    }
    for (int j = 1; j <= n; ++j) d.multiplicity[j][0] = rate.c[j - 1];
    return d;
}

constexpr int kDefaultArborescenceBudget = 6;  // max vertex count n + 1

/// Brute-force count of spanning arborescences oriented toward root: every
/// non-root vertex picks one out-edge and all paths must reach the root.
/// Sums multiplicity products over the acyclic choices. Desk scale only.
inline Int count_arborescences(const SandpileDigraph& d, int root,
                               int vertex_budget = kDefaultArborescenceBudget) {
    const int total = d.n + 1;
    if (root < 0 || root > d.n) throw UsageError("count_arborescences: root out of range");
    if (total > vertex_budget) {
        throw BudgetError("arborescence enumeration over " + std::to_string(total) +
                          " vertices exceeds budget " + std::to_string(vertex_budget));
    }
    std::vector<int> choosers;
    for (int v = 0; v < total; ++v) {
        if (v != root) choosers.push_back(v);
    }
    std::vector<std::vector<std::pair<int, Int>>> outs(choosers.size());
    for (std::size_t k = 0; k < choosers.size(); ++k) {
        for (int w = 0; w < total; ++w) {
            if (d.multiplicity[choosers[k]][w] > 0) {
                outs[k].emplace_back(w, d.multiplicity[choosers[k]][w]);
            }
        }
        if (outs[k].empty()) return 0;  // that vertex can never reach the root
    }
    std::vector<int> target(total, -1);
    Int count = 0;
    std::vector<std::size_t> pick(choosers.size(), 0);
    for (;;) {
        for (std::size_t k = 0; k < choosers.size(); ++k) {
            target[choosers[k]] = outs[k][pick[k]].first;
        }
        bool acyclic = true;
        for (int start = 0; start < total && acyclic; ++start) {
            if (start == root) continue;
            int v = start;
            int hops = 0;
            while (v != root && hops <= total) {
                v = target[v];
                ++hops;
            }
            acyclic = v == root;
        }
        if (acyclic) {
            Int product = 1;
            for (std::size_t k = 0; k < choosers.size(); ++k) product *= outs[k][pick[k]].second;
            count += product;
        }
        std::size_t pos = choosers.size();
        for (;;) {
            if (pos == 0) return count;
            --pos;
            if (++pick[pos] < outs[pos].size()) break;
            pick[pos] = 0;
        }
    }
}

/// Deterministic DOT text: one node line per vertex (0 labeled "sink"), one
/// line per edge copy, sorted by (from, to). Byte-identical for equal inputs.
inline std::string export_dot(const SandpileDigraph& d) {
    std::ostringstream os;
    os << "digraph D {\n";
    for (int v = 0; v <= d.n; ++v) {
        os << "  " << v << " [label=\"" << (v == 0 ? std::string("sink") : std::to_string(v))
           << "\"];\n";
    }
    for (int a = 0; a <= d.n; ++a) {
        for (int b = 0; b <= d.n; ++b) {
            for (Int e = 0; e < d.multiplicity[a][b]; ++e) {
                os << "  " << a << " -> " << b << ";\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace chipfire

#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "chipfire/core.hpp"

namespace chipfire {

/// Exact determinant by fraction-free (Bareiss) elimination. Total on square
/// integer matrices; every intermediate value stays an integer.
inline Int determinant(const Mat& m) {
    if (!is_square(m)) throw UsageError("determinant: matrix is not square");
    const std::size_t n = m.size();
    Mat a = m;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && a[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace detail {

inline Mat delete_row_col(const Mat& m, std::size_t row, std::size_t col) {
    Mat out;
    out.reserve(m.size() - 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == row) continue;
        Vec r;
        r.reserve(m.size() - 1);
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j == col) continue;
            r.push_back(m[i][j]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

/// adj(M) with M * adj(M) = adj(M) * M = det(M) * I, by cofactor expansion.
/// The identity is checked exactly before returning.
inline Mat adjugate(const Mat& m) {
    if (!is_square(m)) throw UsageError("adjugate: matrix is not square");
    const std::size_t n = m.size();
    Mat adj(n, Vec(n, 0));
    if (n == 1) {
        adj[0][0] = 1;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const Int cof = determinant(detail::delete_row_col(m, j, i));
                adj[i][j] = ((i + j) % 2 == 0) ? cof : -cof;
            }
        }
    }
    const Int det = determinant(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < n; ++k) s += m[i][k] * adj[k][j];
            if (s != (i == j ? det : Int(0))) {
                throw Error("adjugate: M*adj != det*I, internal inconsistency");
            }
        }
    }
    return adj;
}

class ToppleMatrix;

/// A positive integer vector r with r*Delta >= 0, together with c = r*Delta
/// and m = sum of the entries.
struct RateVector {
    Vec r;
    Vec c;
    Int m;
};

/// Outcome of checking the toppling-matrix conditions. The certificates are
/// present exactly when is_toppling holds and satisfy r*Delta = det*1 and
/// Delta*h = det*1^T.
struct ValidationReport {
    bool is_toppling = false;
    Int det = 0;
    std::optional<RateVector> row_certificate;
    std::optional<Vec> column_certificate;
    std::vector<std::string> violations;
};

/// Checks the adjugate characterization of toppling matrices:
/// off-diagonal entries <= 0, det > 0, adj diagonal > 0, adj off-diagonal >= 0.
/// Never throws on a square matrix; failures are reported as violations, in
/// cheapest-check-first order, each naming the offending entry.
inline ValidationReport validate_toppling(const Mat& m) {
    if (!is_square(m)) throw UsageError("validate_toppling: matrix is not square");
    const std::size_t n = m.size();
    ValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && m[i][j] > 0) {
                std::ostringstream os;
                os << "off-diagonal entry (" << i + 1 << "," << j + 1 << ") = " << m[i][j]
                   << " is positive";
                report.violations.push_back(os.str());
            }
        }
    }
    report.det = determinant(m);
    if (report.det <= 0) {
        std::ostringstream os;
        os << "determinant " << report.det << " is not positive";
        report.violations.push_back(os.str());
    }
    const Mat adj = adjugate(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool bad = (i == j) ? adj[i][j] <= 0 : adj[i][j] < 0;
            if (bad) {
                std::ostringstream os;
                os << "adjugate entry (" << i + 1 << "," << j + 1 << ") = " << adj[i][j]
                   << (i == j ? " is not positive" : " is negative");
                report.violations.push_back(os.str());
            }
        }
    }
    report.is_toppling = report.violations.empty();
    if (report.is_toppling) {
        // r = 1*adj (column sums), so r*Delta = det*1; h = adj*1^T (row sums),
        // so Delta*h = det*1^T.
        Vec r(n, 0);
        Vec h(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                r[j] += adj[i][j];
                h[i] += adj[i][j];
            }
        }
        Int sum = 0;
        for (const Int& x : r) sum += x;
        report.row_certificate = RateVector{r, Vec(n, report.det), sum};
        report.column_certificate = std::move(h);
    }
    return report;
}

/// Validation failed; the report's violations are joined into the message.
struct ValidationError : Error {
    explicit ValidationError(const ValidationReport& report)
        : Error(join(report)), report_(report) {}

    const ValidationReport& report() const { return report_; }

  private:
    static std::string join(const ValidationReport& r) {
        std::string msg = "not a toppling matrix";
        for (const std::string& v : r.violations) msg += "; " + v;
        return msg;
    }
    ValidationReport report_;
};

/// An immutable validated toppling matrix with cached determinant and
/// adjugate. Vertex indices are 1-based, matching the external formats.
class ToppleMatrix {
  public:
    /// Validates and caches; throws ValidationError when the conditions fail.
    static ToppleMatrix from_rows(Mat rows) {
        ValidationReport report = validate_toppling(rows);
        if (!report.is_toppling) throw ValidationError(report);
        return ToppleMatrix(std::move(rows), std::move(report.det));
    }

    int size() const { return static_cast<int>(rows_.size()); }
    const Mat& rows() const { return rows_; }
    const Int& det() const { return det_; }
    const Mat& adj() const { return adj_; }

    const Int& entry(int i, int j) const {
        check_vertex(i);
        check_vertex(j);
        return rows_[i - 1][j - 1];
    }

    Vec row(int i) const {
        check_vertex(i);
        return rows_[i - 1];
    }

    Vec column(int j) const {
        check_vertex(j);
        Vec col(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) col[i] = rows_[i][j - 1];
        return col;
    }

    void check_vertex(int v) const {
        if (v < 1 || v > size()) {
            throw UsageError("vertex index " + std::to_string(v) + " out of range 1.." +
                             std::to_string(size()));
        }
    }

  private:
    ToppleMatrix(Mat rows, Int det)
        : rows_(std::move(rows)), det_(std::move(det)), adj_(adjugate(rows_)) {}

    Mat rows_;
    Int det_;
    Mat adj_;
};

/// Membership test for the rate-vector set: r > 0 and r*Delta >= 0.
inline bool is_rate_vector(const ToppleMatrix& m, const Vec& r) {
    if (static_cast<int>(r.size()) != m.size()) {
        throw UsageError("is_rate_vector: vector length does not match matrix dimension");
    }
    return all_positive(r) && all_nonneg(row_times_matrix(r, m.rows()));
}

/// Builds the derived fields; throws UsageError when r is not a rate vector.
inline RateVector make_rate_vector(const ToppleMatrix& m, Vec r) {
    if (!is_rate_vector(m, r)) {
        throw UsageError("not a rate vector for this matrix: " + to_string(r));
    }
    Vec c = row_times_matrix(r, m.rows());
    Int sum = 0;
    for (const Int& x : r) sum += x;
    return RateVector{std::move(r), std::move(c), std::move(sum)};
}

/// The fixed constructive rate vector r = 1*adj(M): strictly positive because
/// the adjugate of a toppling matrix has positive diagonal and nonnegative
/// off-diagonal entries, and r*M = det(M)*1.
inline RateVector canonical_rate(const ToppleMatrix& m) {
    const std::size_t n = m.rows().size();
    Vec r(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) r[j] += m.adj()[i][j];
    }
    Int sum = 0;
    for (const Int& x : r) sum += x;
    return RateVector{std::move(r), Vec(n, m.det()), std::move(sum)};
}

/// det Delta[I] for a nonempty 1-based index subset; strictly positive for a
/// validated toppling matrix.
inline Int principal_minor(const ToppleMatrix& m, std::vector<int> indices) {
    if (indices.empty()) throw UsageError("principal_minor: empty index subset");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int v : indices) m.check_vertex(v);
    Mat sub(indices.size(), Vec(indices.size()));
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (std::size_t b = 0; b < indices.size(); ++b) {
            sub[a][b] = m.rows()[indices[a] - 1][indices[b] - 1];
        }
    }
    return determinant(sub);
}

/// d(Delta) = (Delta_11 - 1, ..., Delta_nn - 1), the top of the stable box.
inline Vec d_cap(const ToppleMatrix& m) {
    Vec d(m.rows().size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = m.rows()[i][i] - 1;
    return d;
}

}  // namespace chipfire

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chipfire {

/// Exact arbitrary-precision integer; the only scalar type in the library.
using Int = boost::multiprecision::cpp_int;

/// Row vector of exact integers.
using Vec = std::vector<Int>;

/// Row-major square matrix of exact integers.
using Mat = std::vector<Vec>;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition or malformed input.
struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(what) {}
};

/// An enumeration was refused because its exact size exceeds the configured budget.
struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(what) {}
};

/// The toppling step cap was hit; the matrix is not avalanche-finite.
struct StepCapError : Error {
    explicit StepCapError(const std::string& what) : Error(what) {}
};

inline bool is_square(const Mat& m) {
    for (const Vec& row : m) {
        if (row.size() != m.size()) return false;
    }
    return !m.empty();
}

inline bool all_nonneg(const Vec& v) {
    for (const Int& x : v) {
        if (x < 0) return false;
    }
    return true;
}

inline bool all_positive(const Vec& v) {
    for (const Int& x : v) {
        if (x <= 0) return false;
    }
    return true;
}

/// r * M for a row vector r (lengths must match).
inline Vec row_times_matrix(const Vec& r, const Mat& m) {
    const std::size_t n = m.size();
    Vec out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += r[i] * m[i][j];
        }
    }
    return out;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Vec vec_scale(const Int& k, const Vec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = k * a[i];
    return out;
}

inline std::string to_string(const Vec& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ')';
    return os.str();
}

/// Picks one element from a nonempty ascending list of candidate vertices.
/// Shared by toppling-order policies and Algorithm A tie-breaks.
using ChoicePolicy = std::function<int(const std::vector<int>&)>;

inline ChoicePolicy lowest_choice() {
    return [](const std::vector<int>& candidates) { return candidates.front(); };
}

inline ChoicePolicy highest_choice() {
    return [](const std::vector<int>& candidates) { return candidates.back(); };
}

inline ChoicePolicy random_choice(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const std::vector<int>& candidates) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        return candidates[pick(*rng)];
    };
}

}  // namespace chipfire

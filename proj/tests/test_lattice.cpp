#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"

using namespace tt;

TEST_CASE("same_class decides membership in the row lattice", "[lattice]") {
    const ToppleMatrix m = example_matrix();

    SECTION("difference equal to a row") {
        const SameClassResult res = same_class(m, vec({2, -1}), vec({0, 0}));
        CHECK(res.same);
        REQUIRE(res.witness.has_value());
        CHECK(*res.witness == vec({1, 0}));
        CHECK(row_times_matrix(*res.witness, m.rows()) == vec({2, -1}));
    }
    SECTION("non-member") {
        const SameClassResult res = same_class(m, vec({0, 1}), vec({0, 0}));
        CHECK_FALSE(res.same);
        CHECK_FALSE(res.witness.has_value());
    }
    SECTION("identical vectors") {
        const SameClassResult res = same_class(m, vec({4, 7}), vec({4, 7}));
        CHECK(res.same);
        CHECK(*res.witness == vec({0, 0}));
    }
    CHECK_THROWS_AS(same_class(m, vec({1}), vec({0, 0})), UsageError);
}

TEST_CASE("same_class is an equivalence relation with exact witnesses", "[lattice]") {
    std::mt19937_64 rng(1616);
    std::uniform_int_distribution<int> entry(-10, 10);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const ToppleMatrix m = random_toppling_matrix(rng, n);
        Vec v(n), x(n), y(n);
        for (auto& e : v) e = entry(rng);
        for (auto& e : x) e = coeff(rng);
        for (auto& e : y) e = coeff(rng);
        const Vec w = vec_add(v, row_times_matrix(x, m.rows()));
        const Vec z = vec_add(w, row_times_matrix(y, m.rows()));

        REQUIRE(same_class(m, v, v).same);
        const SameClassResult vw = same_class(m, v, w);
        const SameClassResult wv = same_class(m, w, v);
        REQUIRE(vw.same);
        REQUIRE(wv.same);
        REQUIRE(*wv.witness == vec_scale(-1, *vw.witness));
        REQUIRE(same_class(m, v, z).same);

        // shifting one side by a row of Delta never changes the verdict
        Vec shifted = vec_add(v, m.row(1 + static_cast<int>(rng() % n)));
        REQUIRE(same_class(m, shifted, w).same == vw.same);
    }
}

TEST_CASE("group_order is the determinant", "[lattice]") {
    CHECK(group_order(example_matrix()) == 5);
    CHECK(group_order(ToppleMatrix::from_rows(mat({{2, -1}, {-1, 2}}))) == 3);
    CHECK(group_order(ToppleMatrix::from_rows(mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))) == 1);
}

TEST_CASE("recurrent_representative lands on the recurrent fixed point", "[lattice]") {
    const ToppleMatrix m = example_matrix();
    const RateVector r = example_rate();

    CHECK(recurrent_representative(m, r, vec({5, 5})) == vec({1, 2}));
    CHECK(recurrent_representative(m, r, vec({1, 3})) == vec({1, 3}));
    // (-1,-1) shifts by det*1 = (5,5) once, stabilizes to (1,3), already fixed.
    CHECK(recurrent_representative(m, r, vec({-1, -1})) == vec({1, 3}));

    std::mt19937_64 rng(1717);
    std::uniform_int_distribution<int> entry(-10, 10);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const ToppleMatrix t = random_toppling_matrix(rng, n);
        const RateVector rate = canonical_rate(t);
        Vec v(n);
        for (auto& e : v) e = entry(rng);
        const Vec rep = recurrent_representative(t, rate, v);
        REQUIRE(is_recurrent(t, rate, rep));
        REQUIRE(same_class(t, v, rep).same);
    }
}

TEST_CASE("each lattice class holds exactly one recurrent configuration", "[lattice]") {
    const ToppleMatrix m = example_matrix();
    const RateVector r = example_rate();
    std::set<Vec> reps;
    for_each_stable(m, [&](const Vec& u) {
        reps.insert(recurrent_representative(m, r, u));
    });
    CHECK(Int(reps.size()) == m.det());
    for (const Vec& rep : reps) CHECK(is_recurrent(m, r, rep));

    std::mt19937_64 rng(1818);
    std::uniform_int_distribution<int> entry(-10, 10);
    std::set<Vec> sampled;
    for (int trial = 0; trial < 40; ++trial) {
        Vec v(2);
        for (auto& e : v) e = entry(rng);
        sampled.insert(recurrent_representative(m, r, v));
    }
    CHECK(Int(sampled.size()) <= m.det());
}

TEST_CASE("class_audit passes on the golden matrices", "[lattice]") {
    SECTION("example matrix") {
        const AuditReport report = class_audit(example_matrix());
        CHECK(report.passed());
        CHECK(report.det == 5);
        CHECK(report.parking_count == 5);
        CHECK(report.recurrent_count == 5);
    }
    SECTION("K3 truncated Laplacian") {
        const AuditReport report = class_audit(ToppleMatrix::from_rows(mat({{2, -1}, {-1, 2}})));
        CHECK(report.passed());
        CHECK(report.parking_count == 3);
        CHECK(report.recurrent_count == 3);
    }
    SECTION("trivial 1x1") {
        const AuditReport report = class_audit(ToppleMatrix::from_rows(mat({{1}})));
        CHECK(report.passed());
        CHECK(report.parking_count == 1);
    }
    SECTION("random battery") {
        std::mt19937_64 rng(1919);
        for (int trial = 0; trial < 15; ++trial) {
            const ToppleMatrix t = random_toppling_matrix(rng, 1 + static_cast<int>(rng() % 4));
            const AuditReport report = class_audit(t);
            if (!report.passed()) {
                for (const auto& v : report.violations) UNSCOPED_INFO(v);
            }
            REQUIRE(report.passed());
        }
    }
    SECTION("budget refusal") {
        CHECK_THROWS_AS(class_audit(example_matrix(), 4), BudgetError);
    }
}

TEST_CASE("distinct parking functions are never equivalent", "[lattice]") {
    std::mt19937_64 rng(2020);
    for (int trial = 0; trial < 10; ++trial) {
        const ToppleMatrix m = random_toppling_matrix(rng, 1 + static_cast<int>(rng() % 3), 4);
        const std::vector<Vec> parking = enumerate_parking(m);
        for (std::size_t a = 0; a < parking.size(); ++a) {
            for (std::size_t b = a + 1; b < parking.size(); ++b) {
                REQUIRE_FALSE(same_class(m, parking[a], parking[b]).same);
            }
        }
    }
}

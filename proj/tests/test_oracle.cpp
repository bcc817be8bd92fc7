#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "cforge/coboundary.hpp"
#include "cforge/cocycle.hpp"
#include "cforge/errors.hpp"

using namespace cforge;

namespace {

ConeDomain line_domain() {
    return ConeDomain(1, {{1}}, {1});
}

ConeDomain simplex2() {
    return ConeDomain(2, {{1, 0}, {0, 1}}, {1, 1});
}

CocyclePtr product_cocycle() {
    QMatrix form(1, 1);
    form.at(0, 0) = 1;
    return std::make_shared<BilinearCocycle>(1, std::vector<QMatrix>{form});
}

CocyclePtr bilinear2() {
    QMatrix form(2, 2);
    form.at(0, 0) = 1;
    form.at(0, 1) = 2;
    form.at(1, 0) = 2;
    form.at(1, 1) = -1;
    return std::make_shared<BilinearCocycle>(2, std::vector<QMatrix>{form});
}

class FirstArgument : public Cocycle2 {
public:
    std::size_t in_dim() const override { return 1; }
    std::size_t out_dim() const override { return 1; }
    QVector eval(const QVector& a, const QVector&) const override { return a; }
};

}  // namespace

TEST_CASE("one-dimensional grid solution is pinned to the closed form") {
    GridOracle oracle = grid_oracle(line_domain(), *product_cocycle(), 4);
    REQUIRE(oracle.consistent);
    CHECK(oracle.free_dims == 0);
    REQUIRE(oracle.values.size() == 5);
    // Gauge h(0) = 0, h(1) = 0 leaves exactly h(x) = x (x - 1) / 2:
    // 0, -3/32, -1/8, -3/32, 0 along the grid.
    CHECK(oracle.values.at({Rational(0)}) == QVector{Rational(0)});
    CHECK(oracle.values.at({Rational(1, 4)}) == QVector{Rational(-3, 32)});
    CHECK(oracle.values.at({Rational(1, 2)}) == QVector{Rational(-1, 8)});
    CHECK(oracle.values.at({Rational(3, 4)}) == QVector{Rational(-3, 32)});
    CHECK(oracle.values.at({Rational(1)}) == QVector{Rational(0)});
}

TEST_CASE("grid pair enumeration covers all in-grid sums") {
    GridOracle oracle = grid_oracle(line_domain(), *product_cocycle(), 4);
    auto pairs = grid_pairs(oracle.values);
    // Ordered pairs (i/4, j/4) with i + j <= 4: 5 + 4 + 3 + 2 + 1.
    CHECK(pairs.size() == 15);
    for (const auto& [a, b] : pairs) {
        CHECK(oracle.values.count(add(a, b)) == 1);
    }
}

TEST_CASE("grid values satisfy the defining equations everywhere") {
    GridOracle oracle = grid_oracle(simplex2(), *bilinear2(), 3);
    REQUIRE(oracle.consistent);
    // Triangular grid: (3+1)(3+2)/2 points.
    CHECK(oracle.values.size() == 10);
    CHECK(oracle.free_dims == 0);
    for (const auto& [a, b] : grid_pairs(oracle.values)) {
        QVector expect = bilinear2()->eval(a, b);
        QVector got = sub(sub(oracle.values.at(add(a, b)), oracle.values.at(a)),
                          oracle.values.at(b));
        CHECK(got == expect);
    }
}

TEST_CASE("oracle and constructive solution differ by an additive function") {
    for (BigInt q : {3, 4, 6}) {
        GridOracle oracle = grid_oracle(simplex2(), *bilinear2(), q);
        REQUIRE(oracle.consistent);
        ExtensionTower tower = solve_coboundary(simplex2(), bilinear2());
        std::map<QVector, QVector> h2;
        for (const auto& [x, v] : oracle.values) {
            h2[x] = tower.eval_h(x);
        }
        CHECK(gauge_compare(oracle.values, h2, grid_pairs(oracle.values)));
    }
}

TEST_CASE("shifted cocycles put the offset into h(0)") {
    auto shifted = std::make_shared<ShiftCocycle>(product_cocycle(), QVector{Rational(2, 5)});
    GridOracle oracle = grid_oracle(line_domain(), *shifted, 4);
    REQUIRE(oracle.consistent);
    CHECK(oracle.values.at({Rational(0)}) == QVector{Rational(-2, 5)});
    ExtensionTower tower = solve_coboundary(line_domain(), shifted);
    std::map<QVector, QVector> h2;
    for (const auto& [x, v] : oracle.values) {
        h2[x] = tower.eval_h(x);
    }
    CHECK(gauge_compare(oracle.values, h2, grid_pairs(oracle.values)));
}

TEST_CASE("non-simplex cones can leave gauge freedom and still compare") {
    // Scaled generator (1/2, 1/2) misses the q = 3 grid, so one additive
    // direction stays free and defaults to zero.
    ConeDomain d(2, {{1, 1}, {1, 0}}, {1, 1});
    GridOracle oracle = grid_oracle(d, *bilinear2(), 3);
    REQUIRE(oracle.consistent);
    CHECK(oracle.values.size() == 6);
    CHECK(oracle.free_dims == 1);
    ExtensionTower tower = solve_coboundary(d, bilinear2());
    std::map<QVector, QVector> h2;
    for (const auto& [x, v] : oracle.values) {
        h2[x] = tower.eval_h(x);
    }
    CHECK(gauge_compare(oracle.values, h2, grid_pairs(oracle.values)));
}

TEST_CASE("asymmetric input makes the grid system inconsistent") {
    GridOracle oracle = grid_oracle(line_domain(), FirstArgument(), 4);
    CHECK_FALSE(oracle.consistent);
    CHECK_FALSE(oracle.witness.empty());
}

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(grid_oracle(line_domain(), *product_cocycle(), 0), ContractError);
    // Zero cap leaves M = P unbounded: the grid would be infinite.
    ConeDomain unbounded(1, {{1}}, {0});
    CHECK_THROWS_AS(grid_oracle(unbounded, *product_cocycle(), 3), ContractError);
}

TEST_CASE("gauge_compare accepts additive differences and rejects others") {
    GridOracle oracle = grid_oracle(line_domain(), *product_cocycle(), 4);
    auto pairs = grid_pairs(oracle.values);

    // d = 0 is additive.
    CHECK(gauge_compare(oracle.values, oracle.values, pairs));

    // d(x) = 3x is additive.
    std::map<QVector, QVector> shifted;
    for (const auto& [x, v] : oracle.values) {
        shifted[x] = QVector{v[0] + 3 * x[0]};
    }
    CHECK(gauge_compare(oracle.values, shifted, pairs));

    // Bumping a single interior value is not.
    std::map<QVector, QVector> bumped = oracle.values;
    bumped[{Rational(1, 2)}][0] += 1;
    CHECK_FALSE(gauge_compare(oracle.values, bumped, pairs));

    // Missing points are contract violations.
    std::map<QVector, QVector> partial = oracle.values;
    partial.erase({Rational(1, 2)});
    CHECK_THROWS_AS(gauge_compare(oracle.values, partial, pairs), ContractError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
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
    // f(a, b) = a * b in one dimension.
    QMatrix form(1, 1);
    form.at(0, 0) = 1;
    return std::make_shared<BilinearCocycle>(1, std::vector<QMatrix>{form});
}

// Asymmetric on purpose: f(a, b) = a. Not symmetric, not a cocycle.
class FirstArgument : public Cocycle2 {
public:
    std::size_t in_dim() const override { return 1; }
    std::size_t out_dim() const override { return 1; }
    QVector eval(const QVector& a, const QVector&) const override { return a; }
};

// Symmetric but violates the binary cocycle identity: f(a, b) = (a b)^2.
class SymmetricNonCocycle : public Cocycle2 {
public:
    std::size_t in_dim() const override { return 1; }
    std::size_t out_dim() const override { return 1; }
    QVector eval(const QVector& a, const QVector& b) const override {
        Rational p = a[0] * b[0];
        return {p * p};
    }
};

}  // namespace

TEST_CASE("bilinear cocycle evaluates a^T F b per output coordinate") {
    QMatrix f1(2, 2);
    f1.at(0, 0) = 1;
    f1.at(0, 1) = 2;
    f1.at(1, 0) = 2;
    f1.at(1, 1) = -1;
    QMatrix f2(2, 2);
    f2.at(1, 1) = Rational(1, 3);
    BilinearCocycle f(2, {f1, f2});
    QVector a{Rational(1, 2), Rational(1, 4)};
    QVector b{Rational(1, 3), Rational(1)};
    // a^T F1 b = (1/2)(1)(1/3) + (1/2)(2)(1) + (1/4)(2)(1/3) + (1/4)(-1)(1)
    //          = 1/6 + 1 + 1/6 + -1/4 = 13/12.
    // a^T F2 b = (1/4)(1/3)(1) = 1/12.
    CHECK(f.eval(a, b) == QVector{Rational(13, 12), Rational(1, 12)});
    CHECK(f.eval(a, b) == f.eval(b, a));  // symmetric matrices
}

TEST_CASE("potential cocycle is the second difference of its potential") {
    // phi(x) = x^3 in one dimension.
    Potential phi(1, 1, {{PotentialTerm{Rational(1), {{0, 3}}}}});
    CHECK(phi.eval({Rational(2)}) == QVector{Rational(8)});
    PotentialCocycle f(phi);
    QVector a{Rational(1, 2)}, b{Rational(1, 3)};
    // (a+b)^3 - a^3 - b^3 = 3ab(a+b) = 3 * 1/6 * 5/6 = 5/12.
    CHECK(f.eval(a, b) == QVector{Rational(5, 12)});
}

TEST_CASE("shift and sum families compose evaluators") {
    CocyclePtr base = product_cocycle();
    auto shifted = std::make_shared<ShiftCocycle>(base, QVector{Rational(5, 7)});
    CHECK(shifted->eval({Rational(1, 2)}, {Rational(1, 3)}) ==
          QVector{Rational(1, 6) + Rational(5, 7)});
    SumCocycle sum({{Rational(2), base}, {Rational(-1, 2), base}});
    // (2 - 1/2) f = 3/2 f.
    CHECK(sum.eval({Rational(1, 2)}, {Rational(1, 3)}) == QVector{Rational(1, 4)});
}

TEST_CASE("family constructors validate shapes") {
    CHECK_THROWS_AS(BilinearCocycle(0, {}), ContractError);
    CHECK_THROWS_AS(BilinearCocycle(2, {QMatrix(1, 2)}), ContractError);
    CHECK_THROWS_AS(Potential(1, 1, {{PotentialTerm{Rational(1), {{3, 1}}}}}), ContractError);
    CHECK_THROWS_AS(Potential(1, 1, {{PotentialTerm{Rational(1), {{0, 0}}}}}), ContractError);
    CHECK_THROWS_AS(ShiftCocycle(nullptr, {Rational(1)}), ContractError);
    CHECK_THROWS_AS(ShiftCocycle(product_cocycle(), {Rational(1), Rational(2)}), ContractError);
    CHECK_THROWS_AS(SumCocycle({}), ContractError);
}

TEST_CASE("check_cocycle2 passes the built-in families") {
    CHECK(check_cocycle2(product_cocycle(), line_domain(), 500, 3).pass());
    Potential phi(1, 1, {{PotentialTerm{Rational(1), {{0, 3}}}}});
    CHECK(check_cocycle2(std::make_shared<PotentialCocycle>(phi), line_domain(), 500, 3).pass());
    auto shifted =
        std::make_shared<ShiftCocycle>(product_cocycle(), QVector{Rational(-2, 9)});
    CHECK(check_cocycle2(shifted, line_domain(), 200, 5).pass());
}

TEST_CASE("check_cocycle2 rejects an asymmetric evaluator with a witness") {
    Report r = check_cocycle2(std::make_shared<FirstArgument>(), line_domain(), 200, 1);
    CHECK_FALSE(r.pass());
    bool found_witness = false;
    for (const auto& res : r.results) {
        if (!res.pass) {
            CHECK_FALSE(res.witness.empty());
            found_witness = true;
        }
    }
    CHECK(found_witness);
}

TEST_CASE("check_cocycle2 rejects a symmetric non-cocycle") {
    Report r = check_cocycle2(std::make_shared<SymmetricNonCocycle>(), line_domain(), 200, 1);
    CHECK_FALSE(r.pass());
}

TEST_CASE("n-ary extension unfolds the left recursion") {
    CocycleN fn = extend_nary(product_cocycle());
    QVector q{Rational(1, 4)};
    // f(1/2, 1/4) + f(1/4, 1/4) = 1/8 + 1/16 = 3/16.
    CHECK(fn.eval({q, q, q}) == QVector{Rational(3, 16)});
    CHECK(fn.eval({q}) == QVector{Rational(0)});
    // Arity 2 coincides with the base cocycle.
    QVector a{Rational(2, 5)}, b{Rational(1, 5)};
    CHECK(fn.eval({a, b}) == product_cocycle()->eval(a, b));
}

TEST_CASE("eval_checked polices the tuple domain") {
    CocycleN fn = extend_nary(product_cocycle());
    ConeDomain d = line_domain();
    CHECK(fn.eval_checked(d, {{Rational(1, 2)}, {Rational(1, 2)}}) == QVector{Rational(1, 4)});
    CHECK_THROWS_AS(fn.eval_checked(d, {{Rational(3, 4)}, {Rational(1, 2)}}), DomainViolation);
    CHECK_THROWS_AS(fn.eval_checked(d, {{Rational(-1, 4)}, {Rational(1, 2)}}), DomainViolation);
}

TEST_CASE("n-ary symmetry holds for valid bases and fails for broken ones") {
    CocycleN good = extend_nary(product_cocycle());
    for (std::size_t n = 2; n <= 5; ++n) {
        CHECK(check_symmetry_nary(good, line_domain(), n, 100, 11).pass());
    }
    Potential phi(2, 1, {{PotentialTerm{Rational(1), {{0, 2}}},
                          PotentialTerm{Rational(3), {{0, 1}, {1, 1}}}}});
    CocycleN good2 = extend_nary(std::make_shared<PotentialCocycle>(phi));
    CHECK(check_symmetry_nary(good2, simplex2(), 4, 100, 11).pass());

    CocycleN broken = extend_nary(std::make_shared<FirstArgument>());
    Report r = check_symmetry_nary(broken, line_domain(), 3, 100, 11);
    CHECK_FALSE(r.pass());
}

TEST_CASE("grouping identity: merging blocks costs the within-block values") {
    CocycleN fn = extend_nary(product_cocycle());
    // Shape (2,1): f(a1, a2, b) = f(a1+a2, b) + f(a1, a2).
    CHECK(check_grouping(fn, line_domain(), {2, 1}, 150, 13).pass());
    // Shape (1,1) is trivial.
    CHECK(check_grouping(fn, line_domain(), {1, 1}, 50, 13).pass());
    // Shape (2,2) at the all-1/8 tuple: both sides evaluate to 3/32.
    QVector e{Rational(1, 8)};
    QVector lhs = fn.eval({e, e, e, e});
    QVector merged = fn.eval({{Rational(1, 4)}, {Rational(1, 4)}});
    QVector within = add(fn.eval({e, e}), fn.eval({e, e}));
    CHECK(lhs == QVector{Rational(3, 32)});
    CHECK(add(merged, within) == lhs);
    CHECK(check_grouping(fn, line_domain(), {2, 2}, 150, 13).pass());
    Potential phi(2, 2, {{PotentialTerm{Rational(1), {{0, 2}}}},
                         {PotentialTerm{Rational(1, 2), {{0, 1}, {1, 1}}}}});
    CocycleN fn2 = extend_nary(std::make_shared<PotentialCocycle>(phi));
    CHECK(check_grouping(fn2, simplex2(), {3, 2}, 100, 13).pass());
}

TEST_CASE("cocycle offset and the offset laws") {
    CHECK(cocycle_offset(*product_cocycle()) == QVector{Rational(0)});
    auto shifted = std::make_shared<ShiftCocycle>(product_cocycle(), QVector{Rational(5, 7)});
    CHECK(cocycle_offset(*shifted) == QVector{Rational(5, 7)});
    // Potential with phi(0) = c gives z = -c.
    Potential phi(1, 1, {{PotentialTerm{Rational(1), {{0, 2}}}, PotentialTerm{Rational(4), {}}}});
    CHECK(phi.eval({Rational(0)}) == QVector{Rational(4)});
    CHECK(cocycle_offset(PotentialCocycle(phi)) == QVector{Rational(-4)});

    CHECK(check_offset_laws(shifted, line_domain(), 6, 100, 17).pass());
    CHECK(check_offset_laws(product_cocycle(), line_domain(), 6, 100, 17).pass());
}

TEST_CASE("normalize removes the offset and is idempotent") {
    auto shifted = std::make_shared<ShiftCocycle>(product_cocycle(), QVector{Rational(5, 7)});
    auto [f0, z] = normalize(shifted);
    CHECK(z == QVector{Rational(5, 7)});
    CHECK(cocycle_offset(*f0) == QVector{Rational(0)});
    // f0 agrees with the base product everywhere we look.
    CHECK(f0->eval({Rational(1, 2)}, {Rational(1, 3)}) == QVector{Rational(1, 6)});

    auto [f00, z0] = normalize(f0);
    CHECK(z0 == QVector{Rational(0)});
    CHECK(f00 == f0);  // already normalized: returned unchanged
}

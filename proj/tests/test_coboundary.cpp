#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "cforge/coboundary.hpp"
#include "cforge/cocycle.hpp"
#include "cforge/errors.hpp"
#include "cforge/sampling.hpp"

using namespace cforge;

namespace {

ConeDomain line_domain() {
    return ConeDomain(1, {{1}}, {1});
}

CocyclePtr product_cocycle() {
    QMatrix form(1, 1);
    form.at(0, 0) = 1;
    return std::make_shared<BilinearCocycle>(1, std::vector<QMatrix>{form});
}

CocyclePtr bilinear2() {
    // Symmetric 2x2 form [[1, 2], [2, -1]].
    QMatrix form(2, 2);
    form.at(0, 0) = 1;
    form.at(0, 1) = 2;
    form.at(1, 0) = 2;
    form.at(1, 1) = -1;
    return std::make_shared<BilinearCocycle>(2, std::vector<QMatrix>{form});
}

Rational half_square(const Rational& x) {
    // x (x - 1) / 2: the closed-form potential of f(a, b) = a b that
    // vanishes at 0 and 1.
    return x * (x - 1) / 2;
}

}  // namespace

TEST_CASE("ray values reproduce the closed form for the product cocycle") {
    RaySolution ray{{Rational(1)}, Rational(1), {Rational(0)}};
    CocyclePtr f = product_cocycle();
    QVector z{Rational(0)};
    // h(p/q) = (p/q)((p/q) - 1) / 2, pinned by h(1) = 0.
    CHECK(ray_eval(ray, *f, z, 1, 2) == QVector{Rational(-1, 8)});
    CHECK(ray_eval(ray, *f, z, 3, 4) == QVector{Rational(-3, 32)});
    CHECK(ray_eval(ray, *f, z, 1, 1) == QVector{Rational(0)});
    CHECK(ray_eval(ray, *f, z, 5, 2) == QVector{half_square(Rational(5, 2))});
    CHECK(ray_eval(ray, *f, z, 0, 7) == QVector{Rational(0)});  // -z
}

TEST_CASE("ray values depend only on the ratio p/q") {
    RaySolution ray{{Rational(1)}, Rational(1), {Rational(2, 3)}};
    CocyclePtr f = product_cocycle();
    QVector z{Rational(0)};
    for (int p = 0; p <= 6; ++p) {
        for (int q = 1; q <= 4; ++q) {
            QVector base = ray_eval(ray, *f, z, p, q);
            CHECK(ray_eval(ray, *f, z, 2 * p, 2 * q) == base);
            CHECK(ray_eval(ray, *f, z, 3 * p, 3 * q) == base);
            CHECK(ray_eval(ray, *f, z, 10 * p, 10 * q) == base);
        }
    }
}

TEST_CASE("ray_eval rejects out-of-range indices") {
    RaySolution ray{{Rational(1)}, Rational(1), {Rational(0)}};
    CocyclePtr f = product_cocycle();
    QVector z{Rational(0)};
    CHECK_THROWS_AS(ray_eval(ray, *f, z, -1, 2), ContractError);
    CHECK_THROWS_AS(ray_eval(ray, *f, z, 1, 0), ContractError);
}

TEST_CASE("ray_eval_at locates points and polices the ray") {
    ConeDomain d = line_domain();
    RaySolution ray{{Rational(1)}, Rational(1), {Rational(0)}};
    CocyclePtr f = product_cocycle();
    QVector z{Rational(0)};
    CHECK(ray_eval_at(ray, *f, z, d, {Rational(1, 2)}) == QVector{Rational(-1, 8)});
    CHECK_THROWS_AS(ray_eval_at(ray, *f, z, d, {Rational(-1, 2)}), DomainViolation);
    CHECK_THROWS_AS(ray_eval_at(ray, *f, z, d, {Rational(3, 2)}), DomainViolation);  // outside M
}

TEST_CASE("one-dimensional solve recovers the closed-form potential") {
    ExtensionTower tower = solve_coboundary(line_domain(), product_cocycle());
    REQUIRE(tower.steps().size() == 1);
    CHECK(tower.steps()[0].case_tag == 'A');
    CHECK(tower.z() == QVector{Rational(0)});
    for (int k = 0; k <= 12; ++k) {
        Rational x(k, 12);
        CHECK(tower.eval_h({x}) == QVector{half_square(x)});
    }
    CHECK(tower.eval_h({Rational(7, 60)}) == QVector{half_square(Rational(7, 60))});
}

TEST_CASE("caller-supplied case-A anchor values shift the solution by a linear map") {
    SolveOptions opts;
    opts.base_values = {QVector{Rational(1, 3)}};
    ExtensionTower tower = solve_coboundary(line_domain(), product_cocycle(), opts);
    // General solution x(x-1)/2 + c x; h(1) = 1/3 forces c = 1/3.
    CHECK(tower.eval_h({Rational(1)}) == QVector{Rational(1, 3)});
    CHECK(tower.eval_h({Rational(1, 2)}) == QVector{Rational(-1, 8) + Rational(1, 6)});
    CHECK(tower.eval_h({Rational(0)}) == QVector{Rational(0)});
}

TEST_CASE("offsets land in h(0)") {
    auto shifted = std::make_shared<ShiftCocycle>(product_cocycle(), QVector{Rational(5, 7)});
    ExtensionTower tower = solve_coboundary(line_domain(), shifted);
    CHECK(tower.z() == QVector{Rational(5, 7)});
    CHECK(tower.eval_h({Rational(0)}) == QVector{Rational(-5, 7)});
    CHECK(verify_coboundary(tower, 4, 200, 23).pass());
}

TEST_CASE("solver validates the cocycle first and reports the witness") {
    class Broken : public Cocycle2 {
    public:
        std::size_t in_dim() const override { return 1; }
        std::size_t out_dim() const override { return 1; }
        QVector eval(const QVector& a, const QVector&) const override { return a; }
    };
    try {
        solve_coboundary(line_domain(), std::make_shared<Broken>());
        FAIL("expected CocycleRejected");
    } catch (const CocycleRejected& e) {
        CHECK_FALSE(e.report.pass());
    }
    // skip_validation lets the bad evaluator through to construction.
    SolveOptions opts;
    opts.skip_validation = true;
    ExtensionTower t = solve_coboundary(line_domain(), std::make_shared<Broken>(), opts);
    CHECK_FALSE(verify_coboundary(t, 3, 100, 29).pass());
}

TEST_CASE("redundant generators are skipped; span directions calibrate case B") {
    ConeDomain d(2, {{1, 1}, {1, 0}, {0, 1}, {2, 1}}, {1, 1});
    ExtensionTower tower = solve_coboundary(d, bilinear2());
    REQUIRE(tower.steps().size() == 3);  // (2,1) is already inside the cone
    CHECK(tower.steps()[0].case_tag == 'A');
    CHECK(tower.steps()[1].case_tag == 'A');
    CHECK(tower.steps()[2].case_tag == 'B');
    CHECK(verify_coboundary(tower, 4, 300, 31).pass());
}

TEST_CASE("coboundary identity holds exactly on sampled pairs") {
    ConeDomain d(2, {{1, 0}, {0, 1}}, {1, 1});
    CocyclePtr f = bilinear2();
    ExtensionTower tower = solve_coboundary(d, f);
    DomainSampler sampler(d, 60);
    SplitMix64 rng(41);
    for (int i = 0; i < 300; ++i) {
        auto t = sampler.sample_tuple(rng, 2);
        QVector lhs = f->eval(t[0], t[1]);
        QVector rhs = sub(sub(tower.eval_h(add(t[0], t[1])), tower.eval_h(t[0])),
                          tower.eval_h(t[1]));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("bilinear solutions match the quadratic potential up to gauge") {
    // For f(a,b) = a^T F b (symmetric F), phi(x) = x^T F x / 2 is one
    // potential; the solver's h differs from it by an additive map, so the
    // difference must be linear along every sampled pair.
    ConeDomain d(2, {{1, 0}, {0, 1}}, {1, 1});
    CocyclePtr f = bilinear2();
    ExtensionTower tower = solve_coboundary(d, f);
    auto phi = [&](const QVector& x) {
        QVector fx = f->eval(x, x);  // x^T F x
        return QVector{fx[0] / 2};
    };
    DomainSampler sampler(d, 40);
    SplitMix64 rng(43);
    for (int i = 0; i < 200; ++i) {
        auto t = sampler.sample_tuple(rng, 2);
        QVector a = t[0], b = t[1], s = add(t[0], t[1]);
        QVector da = sub(tower.eval_h(a), phi(a));
        QVector db = sub(tower.eval_h(b), phi(b));
        QVector ds = sub(tower.eval_h(s), phi(s));
        CHECK(ds == add(da, db));
    }
}

TEST_CASE("eval_h is independent of the chosen decomposition across generator orders") {
    CocyclePtr f = bilinear2();
    ConeDomain d1(2, {{1, 1}, {1, 0}, {0, 1}}, {1, 1});
    ConeDomain d2(2, {{1, 0}, {0, 1}, {1, 1}}, {1, 1});  // same cone, different order
    ExtensionTower t1 = solve_coboundary(d1, f);
    ExtensionTower t2 = solve_coboundary(d2, f);
    CHECK(t2.steps().size() == 2);  // (1,1) skipped entirely
    // Both are potentials for the same f on the same M, so they differ by
    // an additive function.
    DomainSampler sampler(d1, 24);
    SplitMix64 rng(47);
    for (int i = 0; i < 200; ++i) {
        auto t = sampler.sample_tuple(rng, 2);
        QVector a = t[0], b = t[1], s = add(a, b);
        QVector da = sub(t1.eval_h(a), t2.eval_h(a));
        QVector db = sub(t1.eval_h(b), t2.eval_h(b));
        QVector ds = sub(t1.eval_h(s), t2.eval_h(s));
        CHECK(ds == add(da, db));
    }
}

TEST_CASE("eval_h rejects points outside M") {
    ExtensionTower tower = solve_coboundary(line_domain(), product_cocycle());
    CHECK_THROWS_AS(tower.eval_h({Rational(3, 2)}), DomainViolation);
    CHECK_THROWS_AS(tower.eval_h({Rational(-1, 2)}), DomainViolation);
}

TEST_CASE("eval_partial walks the tower levels") {
    ConeDomain d(2, {{1, 0}, {0, 1}}, {1, 1});
    auto shifted = std::make_shared<ShiftCocycle>(bilinear2(), QVector{Rational(1, 4)});
    ExtensionTower tower = solve_coboundary(d, shifted);
    CHECK(tower.eval_partial(0, {Rational(0), Rational(0)}) == QVector{Rational(-1, 4)});
    // Level 1 covers the first ray only.
    CHECK_THROWS_AS(tower.eval_partial(1, {Rational(0), Rational(1, 2)}), DomainViolation);
    CHECK(tower.eval_partial(2, {Rational(1, 2), Rational(1, 4)}) ==
          tower.eval_h({Rational(1, 2), Rational(1, 4)}));
}

TEST_CASE("a corrupted calibrated anchor breaks the verified identity") {
    ConeDomain d(2, {{1, 1}, {1, 0}, {0, 1}}, {1, 1});
    CocyclePtr f = bilinear2();
    ExtensionTower good = solve_coboundary(d, f);
    REQUIRE(good.steps().back().case_tag == 'B');

    ExtensionTower bad(d, f);
    for (ExtensionStep step : good.steps()) {
        if (step.case_tag == 'B') {
            step.ray.anchor_value[0] += 1;  // the calibration is forced, so this must show
        }
        bad.add_step(step);
    }
    CHECK(verify_coboundary(good, 4, 200, 53).pass());
    CHECK_FALSE(verify_coboundary(bad, 4, 200, 53).pass());
}

TEST_CASE("three- and four-dimensional towers verify") {
    ConeDomain d3(3, {{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1, 1, 1});
    QMatrix form(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            form.at(i, j) = Rational(1 + (i + j) % 3);
        }
    }
    auto f3 = std::make_shared<BilinearCocycle>(3, std::vector<QMatrix>{form});
    ExtensionTower t3 = solve_coboundary(d3, f3);
    bool has_case_b = false;
    for (const auto& s : t3.steps()) {
        has_case_b = has_case_b || s.case_tag == 'B';
    }
    CHECK(has_case_b);
    CHECK(verify_coboundary(t3, 4, 150, 59).pass());
}

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
#include "cforge/linalg.hpp"
#include "cforge/parallel.hpp"
#include "cforge/report.hpp"

namespace cforge {

// One solved ray Q+ * direction: the potential restricted to the ray is
// pinned by its value at the anchor point (anchor_scale * direction, a point
// of M) and extended by the scaling formula implemented in ray_eval.
struct RaySolution {
    QVector direction;      // nonzero, in M
    Rational anchor_scale;  // positive; anchor point = anchor_scale * direction
    QVector anchor_value;   // value assigned at the anchor point
};

// Value at (p/q) * anchor_point for nonnegative integers p, q (q >= 1),
// where z = f(0,0):
//   p = 0          ->  -z
//   otherwise      ->  (p/q) (anchor_value - F(u/q : q)) + F(u/q : p)
// with u the anchor point and F(w : n) the n-ary extension at n copies of w,
// i.e. sum_{k=1}^{n-1} f(k w, w). The value depends only on p/q, not the
// representation (the well-definedness property tests pin this).
QVector ray_eval(const RaySolution& ray, const Cocycle2& f, const QVector& z, const BigInt& p,
                 const BigInt& q);

// Same, locating x on the ray first; rejects points off the ray or outside M.
QVector ray_eval_at(const RaySolution& ray, const Cocycle2& f, const QVector& z,
                    const ConeDomain& domain, const QVector& x);

// One extension of the potential from the cone generated so far to the cone
// enlarged by a new ray.
struct ExtensionStep {
    QVector generator;  // the input generator that triggered the step
    char case_tag;      // 'A': direction outside the span of the prior cone;
                        // 'B': direction inside the span, anchor calibrated
    RaySolution ray;    // ray.direction = generator scaled into M
    // Case B bookkeeping: witness r in the prior cone with r + direction in
    // the prior cone, and the positive alpha0 with alpha0 (r + direction)
    // in M used for the calibration.
    QVector witness_r;
    Rational alpha0;
};

// The constructed potential h: an ordered sequence of ray extensions over a
// cone domain, evaluated recursively by peeling steps from the top. The
// structure is immutable once built; evaluation memoizes per (level, point)
// under an internal mutex, so concurrent eval_h calls are safe.
class ExtensionTower {
public:
    ExtensionTower(ConeDomain domain, CocyclePtr f);
    // Same, but trust the supplied offset vector instead of f(0,0). Used
    // when rehydrating a serialized tower, so stored offsets survive exactly.
    ExtensionTower(ConeDomain domain, CocyclePtr f, QVector z);
    ~ExtensionTower();
    ExtensionTower(ExtensionTower&&) noexcept;
    ExtensionTower& operator=(ExtensionTower&&) noexcept;

    void add_step(ExtensionStep step);

    // h(x) for x in M (throws otherwise).
    QVector eval_h(const QVector& x) const;

    // Value of the partial potential after the first `level` steps; the
    // point must lie in that partial cone (and in M). Level 0 is {0} with
    // value -z. The solver calibrates case-B anchors through this.
    QVector eval_partial(std::size_t level, const QVector& x) const;

    const ConeDomain& domain() const { return domain_; }
    const CocyclePtr& f() const { return f_; }
    const QVector& z() const { return z_; }
    const std::vector<ExtensionStep>& steps() const { return steps_; }

private:
    // Ray value at beta * step direction, through the shared prefix cache.
    QVector ray_value(std::size_t step_index, const Rational& beta) const;

    ConeDomain domain_;
    CocyclePtr f_;
    QVector z_;
    std::vector<ExtensionStep> steps_;
    std::vector<QVector> step_dirs_;  // denormalized for feasibility calls

    // Mutex-guarded caches live behind a pointer so towers stay movable.
    struct Memo;
    std::unique_ptr<Memo> memo_;
};

// Thrown by solve_coboundary when the input evaluator fails validation; the
// report carries the counterexample.
class CocycleRejected : public std::runtime_error {
public:
    explicit CocycleRejected(Report r)
        : std::runtime_error("cocycle validation failed"), report(std::move(r)) {}
    Report report;
};

struct SolveOptions {
    // Anchor value per input generator (used only for case-A steps; case B
    // calibrates its own anchor). Missing or empty entries default to 0.
    std::vector<std::optional<QVector>> base_values;
    std::size_t validate_samples = 1000;
    std::uint64_t seed = 0;
    std::uint64_t max_denominator = 60;
    bool skip_validation = false;
};

// The constructive solver: validates f, then walks the generator list in
// input order, skipping generators already inside the current cone and
// extending by one ray otherwise (case A for directions leaving the span,
// case B with a calibrated anchor for directions inside it).
ExtensionTower solve_coboundary(const ConeDomain& domain, CocyclePtr f,
                                const SolveOptions& options = {});

// Checks, on seeded samples: the defining identity
// f(a,b) = h(a+b) - h(a) - h(b); its n-ary form for 2 <= n <= n_max; and the
// two-way regrouping identity for tuples (alpha r, beta r, alpha s, beta s).
Report verify_coboundary(const ExtensionTower& tower, std::size_t n_max, std::size_t samples,
                         std::uint64_t seed, std::uint64_t max_denominator = 60,
                         ExecMode mode = ExecMode::parallel);

// Brute-force reference: solve the full linear system
// { h(a+b) - h(a) - h(b) = f(a,b) : a, b, a+b on the grid (1/q) Z^d ∩ M }
// exactly, gauge-fixed by h(0) = -z plus h = 0 at the scaled generators that
// land on the grid (skipping gauge rows the system already contradicts);
// remaining free values are set to zero. Deterministic.
struct GridOracle {
    bool consistent = true;
    std::string witness;  // offending pair when inconsistent
    std::map<QVector, QVector> values;
    std::size_t free_dims = 0;  // unknowns left free by equations + gauge
};

GridOracle grid_oracle(const ConeDomain& domain, const Cocycle2& f, const BigInt& q);

// All ordered pairs (a, b) of mapped points with a + b also mapped.
std::vector<std::pair<QVector, QVector>> grid_pairs(const std::map<QVector, QVector>& values);

// True iff d := h1 - h2 satisfies d(a+b) = d(a) + d(b) for every supplied
// pair — i.e. the two potentials differ by an additive function. Missing
// points are a contract violation.
bool gauge_compare(const std::map<QVector, QVector>& h1, const std::map<QVector, QVector>& h2,
                   const std::vector<std::pair<QVector, QVector>>& pairs);

}  // namespace cforge

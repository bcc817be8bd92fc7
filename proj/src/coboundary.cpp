#include "cforge/coboundary.hpp"

#include <algorithm>
#include <mutex>

#include "cforge/cone.hpp"
#include "cforge/errors.hpp"
#include "cforge/linsolve.hpp"
#include "cforge/sampling.hpp"

namespace cforge {

namespace {

// Guard for converting exact ray indices to container indices.
std::size_t to_index(const BigInt& n) {
    if (n < 0 || n > BigInt(10000000)) {
        throw ContractError("ray evaluation index out of supported range");
    }
    return n.convert_to<std::size_t>();
}

}  // namespace

QVector ray_eval(const RaySolution& ray, const Cocycle2& f, const QVector& z, const BigInt& p,
                 const BigInt& q) {
    if (q < 1 || p < 0) {
        throw ContractError("ray_eval needs p >= 0 and q >= 1");
    }
    if (p == 0) {
        return scale(Rational(-1), z);
    }
    const QVector u = scale(ray.anchor_scale, ray.direction);  // anchor point
    const QVector w = scale(Rational(1) / Rational(q), u);

    // F(w : n) = sum_{k=1}^{n-1} f(k w, w); computed as running prefixes.
    const std::size_t pi = to_index(p);
    const std::size_t qi = to_index(q);
    const std::size_t top = std::max(pi, qi) - 1;
    QVector f_at_p;
    QVector f_at_q;
    QVector prefix(f.out_dim(), Rational(0));
    if (pi == 1) {
        f_at_p = prefix;
    }
    if (qi == 1) {
        f_at_q = prefix;
    }
    QVector kw = w;
    for (std::size_t j = 1; j <= top; ++j) {
        prefix = add(prefix, f.eval(kw, w));
        kw = add(kw, w);
        if (j + 1 == pi) {
            f_at_p = prefix;
        }
        if (j + 1 == qi) {
            f_at_q = prefix;
        }
    }
    const Rational ratio = Rational(p) / Rational(q);
    return add(scale(ratio, sub(ray.anchor_value, f_at_q)), f_at_p);
}

QVector ray_eval_at(const RaySolution& ray, const Cocycle2& f, const QVector& z,
                    const ConeDomain& domain, const QVector& x) {
    if (x.size() != ray.direction.size()) {
        throw ContractError("ray_eval_at: dimension mismatch");
    }
    // Locate x = beta * direction.
    std::size_t lead = ray.direction.size();
    for (std::size_t i = 0; i < ray.direction.size(); ++i) {
        if (ray.direction[i] != 0) {
            lead = i;
            break;
        }
    }
    if (lead == ray.direction.size()) {
        throw ContractError("ray direction is zero");
    }
    const Rational beta = x[lead] / ray.direction[lead];
    if (beta < 0 || x != scale(beta, ray.direction)) {
        throw DomainViolation("point is not on the ray");
    }
    if (!domain.in_M(x)) {
        throw DomainViolation("ray point lies outside M");
    }
    const Rational ratio = beta / ray.anchor_scale;  // x = ratio * anchor point
    return ray_eval(ray, f, z, numerator(ratio), denominator(ratio));
}

struct ExtensionTower::Memo {
    std::mutex mutex;
    std::map<std::pair<std::size_t, QVector>, QVector> h;
    // (step, q) -> prefix sums S_j = sum_{k=1}^{j} f(k u/q, u/q), S_0 = 0.
    std::map<std::pair<std::size_t, BigInt>, std::vector<QVector>> prefix;
};

ExtensionTower::~ExtensionTower() = default;
ExtensionTower::ExtensionTower(ExtensionTower&&) noexcept = default;
ExtensionTower& ExtensionTower::operator=(ExtensionTower&&) noexcept = default;

ExtensionTower::ExtensionTower(ConeDomain domain, CocyclePtr f)
    : domain_(std::move(domain)), f_(std::move(f)), memo_(std::make_unique<Memo>()) {
    if (!f_) {
        throw ContractError("extension tower needs a cocycle");
    }
    if (f_->in_dim() != domain_.dim()) {
        throw ContractError("cocycle dimension does not match the domain");
    }
    z_ = cocycle_offset(*f_);
}

ExtensionTower::ExtensionTower(ConeDomain domain, CocyclePtr f, QVector z)
    : ExtensionTower(std::move(domain), std::move(f)) {
    if (z.size() != f_->out_dim()) {
        throw ContractError("offset vector has the wrong dimension");
    }
    z_ = std::move(z);
}

void ExtensionTower::add_step(ExtensionStep step) {
    if (step.ray.direction.size() != domain_.dim()) {
        throw ContractError("step direction dimension mismatch");
    }
    if (is_zero(step.ray.direction)) {
        throw ContractError("step direction must be nonzero");
    }
    if (step.ray.anchor_scale <= 0) {
        throw ContractError("step anchor scale must be positive");
    }
    if (step.ray.anchor_value.size() != f_->out_dim()) {
        throw ContractError("step anchor value dimension mismatch");
    }
    step_dirs_.push_back(step.ray.direction);
    steps_.push_back(std::move(step));
}

QVector ExtensionTower::ray_value(std::size_t step_index, const Rational& beta) const {
    const RaySolution& ray = steps_[step_index].ray;
    const Rational ratio = beta / ray.anchor_scale;
    const BigInt p = numerator(ratio);
    const BigInt q = denominator(ratio);
    if (p == 0) {
        return scale(Rational(-1), z_);
    }
    const std::size_t pi = to_index(p);
    const std::size_t qi = to_index(q);
    const std::size_t top = std::max(pi, qi) - 1;

    std::lock_guard<std::mutex> lock(memo_->mutex);
    std::vector<QVector>& prefix = memo_->prefix[{step_index, q}];
    if (prefix.empty()) {
        prefix.push_back(QVector(f_->out_dim(), Rational(0)));  // S_0 = 0
    }
    if (prefix.size() <= top) {
        const QVector u = scale(ray.anchor_scale, ray.direction);
        const QVector w = scale(Rational(1) / Rational(q), u);
        while (prefix.size() <= top) {
            const std::size_t j = prefix.size();  // building S_j
            prefix.push_back(add(prefix[j - 1], f_->eval(scale(Rational(BigInt(j)), w), w)));
        }
    }
    const Rational ratio_pq = Rational(p) / Rational(q);
    return add(scale(ratio_pq, sub(ray.anchor_value, prefix[qi - 1])), prefix[pi - 1]);
}

QVector ExtensionTower::eval_h(const QVector& x) const {
    if (!domain_.in_M(x)) {
        throw DomainViolation("eval_h: point outside M");
    }
    return eval_partial(steps_.size(), x);
}

QVector ExtensionTower::eval_partial(std::size_t level, const QVector& x) const {
    if (level > steps_.size()) {
        throw ContractError("eval_partial: no such level");
    }
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        const auto it = memo_->h.find({level, x});
        if (it != memo_->h.end()) {
            return it->second;
        }
    }

    QVector result;
    if (level == 0) {
        if (!is_zero(x)) {
            throw DomainViolation("eval_partial: nonzero point below the first step");
        }
        result = scale(Rational(-1), z_);
    } else {
        const std::vector<QVector> lower(step_dirs_.begin(),
                                         step_dirs_.begin() + static_cast<long>(level - 1));
        const QVector& dir = step_dirs_[level - 1];
        const auto cert = cone_feasible(lower, x, &dir);
        if (!cert) {
            throw DomainViolation("eval_partial: point outside the cone at this level");
        }
        const Rational beta = cert->extra_coeff;
        if (beta == 0) {
            result = eval_partial(level - 1, x);
        } else {
            const QVector b = scale(beta, dir);
            const QVector a = sub(x, b);
            result = add(add(eval_partial(level - 1, a), ray_value(level - 1, beta)),
                         f_->eval(a, b));
        }
    }

    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->h.emplace(std::make_pair(level, x), result);
    return result;
}

ExtensionTower solve_coboundary(const ConeDomain& domain, CocyclePtr f,
                                const SolveOptions& options) {
    if (!f) {
        throw ContractError("solve_coboundary needs a cocycle");
    }
    if (f->in_dim() != domain.dim()) {
        throw ContractError("cocycle dimension does not match the domain");
    }
    for (const auto& bv : options.base_values) {
        if (bv && bv->size() != f->out_dim()) {
            throw ContractError("anchor value dimension mismatch");
        }
    }
    if (!options.skip_validation) {
        Report validation = check_cocycle2(f, domain, options.validate_samples, options.seed,
                                           options.max_denominator);
        if (!validation.pass()) {
            throw CocycleRejected(std::move(validation));
        }
    }

    ExtensionTower tower(domain, f);
    std::vector<QVector> dirs;

    const std::vector<QVector>& gens = domain.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const QVector& g = gens[i];
        if (cone_feasible(dirs, g)) {
            continue;  // already inside the current cone
        }
        const Rational alpha = domain.scale_into_M(g);
        const QVector s = scale(alpha, g);

        ExtensionStep step;
        step.generator = g;
        const auto span = in_span(dirs, s);
        if (!span) {
            // Case A: the new direction leaves the span; its anchor value is
            // a free choice.
            step.case_tag = 'A';
            QVector anchor_value(f->out_dim(), Rational(0));
            if (i < options.base_values.size() && options.base_values[i]) {
                anchor_value = *options.base_values[i];
            }
            step.ray = RaySolution{s, Rational(1), std::move(anchor_value)};
            step.alpha0 = 0;
        } else {
            // Case B: s = sum(lambda_i d_i). Move the negative part across:
            // r := sum over lambda_i < 0 of (-lambda_i) d_i lies in the
            // current cone, and r + s = sum(max(lambda_i, 0) d_i) does too.
            step.case_tag = 'B';
            QVector r = zero_vector(domain.dim());
            for (std::size_t k = 0; k < dirs.size(); ++k) {
                if ((*span)[k] < 0) {
                    r = add(r, scale(-(*span)[k], dirs[k]));
                }
            }
            const QVector rs = add(r, s);
            if (is_zero(rs)) {
                throw ContractError("degenerate case-B witness (non-pointed cone?)");
            }
            const Rational alpha0 = domain.scale_into_M(rs);
            const std::size_t level = tower.steps().size();
            // Calibration: pin the anchor value so the lower potential and
            // the new ray agree where the ray meets the old cone:
            // h1(a0 (r+s)) = h1(a0 r) + h_ray(a0 s) + f(a0 r, a0 s).
            const QVector h1_rs = tower.eval_partial(level, scale(alpha0, rs));
            const QVector h1_r = tower.eval_partial(level, scale(alpha0, r));
            const QVector fab = f->eval(scale(alpha0, r), scale(alpha0, s));
            const QVector anchor_value = sub(sub(h1_rs, h1_r), fab);
            step.ray = RaySolution{s, alpha0, anchor_value};
            step.witness_r = r;
            step.alpha0 = alpha0;
        }
        dirs.push_back(s);
        tower.add_step(std::move(step));
    }
    return tower;
}

namespace {

std::string tuple_witness(const std::vector<QVector>& tuple) {
    std::string out = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += to_string(tuple[i]);
    }
    return out + ")";
}

}  // namespace

Report verify_coboundary(const ExtensionTower& tower, std::size_t n_max, std::size_t samples,
                         std::uint64_t seed, std::uint64_t max_denominator, ExecMode mode) {
    Report report;
    report.command = "verify_coboundary";
    const ConeDomain& domain = tower.domain();
    const CocyclePtr& f = tower.f();
    const CocycleN fn = extend_nary(f);

    DomainSampler sampler(domain, max_denominator);
    SplitMix64 rng(seed);

    // Defining identity on pairs.
    {
        std::vector<std::vector<QVector>> pairs;
        pairs.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            pairs.push_back(sampler.sample_tuple(rng, 2));
        }
        const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
            const QVector& a = pairs[i][0];
            const QVector& b = pairs[i][1];
            const QVector rhs =
                sub(sub(tower.eval_h(add(a, b)), tower.eval_h(a)), tower.eval_h(b));
            return f->eval(a, b) != rhs;
        });
        report.add("f(a,b) = h(a+b) - h(a) - h(b)", bad == samples,
                   bad == samples ? "" : tuple_witness(pairs[bad]));
    }

    // n-ary form.
    for (std::size_t n = 2; n <= n_max; ++n) {
        std::vector<std::vector<QVector>> tuples;
        tuples.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            tuples.push_back(sampler.sample_tuple(rng, n));
        }
        const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
            const std::vector<QVector>& t = tuples[i];
            QVector sum = zero_vector(domain.dim());
            QVector rhs(f->out_dim(), Rational(0));
            for (const QVector& a : t) {
                sum = add(sum, a);
            }
            rhs = tower.eval_h(sum);
            for (const QVector& a : t) {
                rhs = sub(rhs, tower.eval_h(a));
            }
            return fn.eval(t) != rhs;
        });
        report.add("n-ary identity at n = " + std::to_string(n), bad == samples,
                   bad == samples ? "" : tuple_witness(tuples[bad]));
    }

    // Two-way regrouping of (alpha r, beta r, alpha s, beta s).
    {
        struct Config {
            QVector r, s;
            Rational alpha, beta;
        };
        std::vector<Config> configs;
        configs.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            auto pair = sampler.sample_tuple(rng, 2);
            Rational alpha = rng.rational01(max_denominator);
            Rational beta = rng.rational01(max_denominator) * (Rational(1) - alpha);
            configs.push_back({std::move(pair[0]), std::move(pair[1]), std::move(alpha),
                               std::move(beta)});
        }
        const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
            const Config& c = configs[i];
            const QVector ar = scale(c.alpha, c.r);
            const QVector br = scale(c.beta, c.r);
            const QVector as = scale(c.alpha, c.s);
            const QVector bs = scale(c.beta, c.s);
            const QVector rs = add(c.r, c.s);
            const QVector flat = fn.eval({ar, br, as, bs});
            const QVector by_scale = add(
                add(f->eval(scale(c.alpha, rs), scale(c.beta, rs)), f->eval(ar, as)),
                f->eval(br, bs));
            const Rational ab = c.alpha + c.beta;
            const QVector by_ray =
                add(add(f->eval(scale(ab, c.r), scale(ab, c.s)), f->eval(as, bs)),
                    f->eval(ar, br));
            return flat != by_scale || flat != by_ray;
        });
        report.add("two-way regrouping of (ar, br, as, bs)", bad == samples,
                   bad == samples ? ""
                                  : "r = " + to_string(configs[bad].r) + ", s = " +
                                        to_string(configs[bad].s) + ", alpha = " +
                                        to_string(configs[bad].alpha) + ", beta = " +
                                        to_string(configs[bad].beta));
    }
    return report;
}

GridOracle grid_oracle(const ConeDomain& domain, const Cocycle2& f, const BigInt& q) {
    if (q < 1) {
        throw ContractError("grid denominator must be >= 1");
    }
    if (f.in_dim() != domain.dim()) {
        throw ContractError("cocycle dimension does not match the domain");
    }
    for (const QVector& g : domain.generators()) {
        if (domain.cap_value(g) <= 0) {
            throw ContractError("grid is infinite: the cap vanishes on a generator");
        }
    }
    const std::size_t d = domain.dim();
    const QVector z = cocycle_offset(f);

    // Integer bounding box for q*x over x in M: every x is sum(t_i g_i) with
    // t_i <= 1 / cap(g_i).
    std::vector<BigInt> lo(d, BigInt(0));
    std::vector<BigInt> hi(d, BigInt(0));
    for (std::size_t j = 0; j < d; ++j) {
        Rational lo_j = 0;
        Rational hi_j = 0;
        for (const QVector& g : domain.generators()) {
            const Rational reach = g[j] / domain.cap_value(g);
            if (reach < 0) {
                lo_j += reach;
            } else {
                hi_j += reach;
            }
        }
        lo[j] = ceil_rational(Rational(q) * lo_j);
        hi[j] = -ceil_rational(-(Rational(q) * hi_j));  // floor
    }

    BigInt box_size = 1;
    for (std::size_t j = 0; j < d; ++j) {
        if (hi[j] < lo[j]) {
            box_size = 0;
            break;
        }
        box_size *= hi[j] - lo[j] + 1;
    }
    if (box_size > 2000000) {
        throw ContractError("grid bounding box too large to enumerate");
    }

    // Enumerate candidates in odometer order; membership filters to the grid.
    std::map<QVector, std::size_t> index;
    std::vector<QVector> points;
    if (box_size > 0) {
        std::vector<BigInt> y = lo;
        const Rational inv_q = Rational(1) / Rational(q);
        while (true) {
            QVector x(d);
            for (std::size_t j = 0; j < d; ++j) {
                x[j] = Rational(y[j]) * inv_q;
            }
            if (domain.in_M(x)) {
                index.emplace(x, 0);
            }
            std::size_t j = 0;
            while (j < d && y[j] == hi[j]) {
                y[j] = lo[j];
                ++j;
            }
            if (j == d) {
                break;
            }
            ++y[j];
        }
        for (auto& [pt, idx] : index) {
            idx = points.size();
            points.push_back(pt);
        }
    }

    GridOracle oracle;
    EchelonSystem sys(f.out_dim());

    // The full coboundary system first: an inconsistency here falsifies the
    // cocycle property of f on the grid.
    for (std::size_t ia = 0; ia < points.size(); ++ia) {
        for (std::size_t ib = 0; ib < points.size(); ++ib) {
            const QVector sum = add(points[ia], points[ib]);
            const auto it = index.find(sum);
            if (it == index.end()) {
                continue;
            }
            const std::vector<std::pair<std::size_t, Rational>> terms = {
                {it->second, Rational(1)}, {ia, Rational(-1)}, {ib, Rational(-1)}};
            if (!sys.add(terms, f.eval(points[ia], points[ib]))) {
                oracle.consistent = false;
                oracle.witness =
                    "a = " + to_string(points[ia]) + ", b = " + to_string(points[ib]);
                return oracle;
            }
        }
    }

    // Gauge rows afterwards, each kept only if the system tolerates it:
    // h(0) = -z, then h = 0 at each scaled generator that lands on the grid.
    if (const auto it = index.find(zero_vector(d)); it != index.end()) {
        sys.add({{it->second, Rational(1)}}, scale(Rational(-1), z));
    }
    for (const QVector& g : domain.generators()) {
        const QVector s = scale(domain.scale_into_M(g), g);
        bool on_grid = true;
        for (const Rational& c : s) {
            if (!is_integer_multiple(c, q)) {
                on_grid = false;
                break;
            }
        }
        if (!on_grid) {
            continue;
        }
        const auto it = index.find(s);
        if (it == index.end()) {
            continue;
        }
        sys.add({{it->second, Rational(1)}}, QVector(f.out_dim(), Rational(0)));
    }

    const auto solution = sys.solve();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto it = solution.find(i);
        oracle.values[points[i]] =
            it != solution.end() ? it->second : QVector(f.out_dim(), Rational(0));
    }
    oracle.free_dims = points.size() - sys.pivot_count();
    return oracle;
}

std::vector<std::pair<QVector, QVector>> grid_pairs(const std::map<QVector, QVector>& values) {
    std::vector<std::pair<QVector, QVector>> pairs;
    for (const auto& [a, va] : values) {
        for (const auto& [b, vb] : values) {
            if (values.find(add(a, b)) != values.end()) {
                pairs.emplace_back(a, b);
            }
        }
    }
    return pairs;
}

bool gauge_compare(const std::map<QVector, QVector>& h1, const std::map<QVector, QVector>& h2,
                   const std::vector<std::pair<QVector, QVector>>& pairs) {
    const auto diff = [&](const QVector& x) {
        const auto i1 = h1.find(x);
        const auto i2 = h2.find(x);
        if (i1 == h1.end() || i2 == h2.end()) {
            throw ContractError("gauge_compare: point missing from a mapping: " + to_string(x));
        }
        return sub(i1->second, i2->second);
    };
    for (const auto& [a, b] : pairs) {
        if (diff(add(a, b)) != add(diff(a), diff(b))) {
            return false;
        }
    }
    return true;
}

}  // namespace cforge

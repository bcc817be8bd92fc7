#include "cforge/cocycle.hpp"

#include "cforge/errors.hpp"
#include "cforge/sampling.hpp"

namespace cforge {

BilinearCocycle::BilinearCocycle(std::size_t dim, std::vector<QMatrix> forms)
    : dim_(dim), forms_(std::move(forms)) {
    if (dim_ == 0 || forms_.empty()) {
        throw ContractError("bilinear cocycle needs a positive dimension and >= 1 form");
    }
    for (const QMatrix& f : forms_) {
        if (f.rows != dim_ || f.cols != dim_) {
            throw ContractError("bilinear form must be dim x dim");
        }
    }
}

QVector BilinearCocycle::eval(const QVector& a, const QVector& b) const {
    if (a.size() != dim_ || b.size() != dim_) {
        throw ContractError("bilinear cocycle: argument dimension mismatch");
    }
    QVector out(forms_.size(), Rational(0));
    for (std::size_t k = 0; k < forms_.size(); ++k) {
        Rational v = 0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (a[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                if (b[j] != 0) {
                    v += a[i] * forms_[k].at(i, j) * b[j];
                }
            }
        }
        out[k] = v;
    }
    return out;
}

Potential::Potential(std::size_t in_dim, std::size_t out_dim,
                     std::vector<std::vector<PotentialTerm>> coord_terms)
    : in_dim_(in_dim), out_dim_(out_dim), coord_terms_(std::move(coord_terms)) {
    if (in_dim_ == 0 || out_dim_ == 0) {
        throw ContractError("potential needs positive dimensions");
    }
    if (coord_terms_.size() != out_dim_) {
        throw ContractError("potential needs one term list per output coordinate");
    }
    for (const auto& terms : coord_terms_) {
        for (const PotentialTerm& t : terms) {
            for (const auto& [var, power] : t.factors) {
                if (var >= in_dim_) {
                    throw ContractError("potential term references a variable out of range");
                }
                if (power == 0) {
                    throw ContractError("potential factor powers must be >= 1");
                }
            }
        }
    }
}

QVector Potential::eval(const QVector& x) const {
    if (x.size() != in_dim_) {
        throw ContractError("potential: argument dimension mismatch");
    }
    QVector out(out_dim_, Rational(0));
    for (std::size_t k = 0; k < out_dim_; ++k) {
        for (const PotentialTerm& t : coord_terms_[k]) {
            Rational v = t.coeff;
            for (const auto& [var, power] : t.factors) {
                for (std::uint32_t p = 0; p < power; ++p) {
                    v *= x[var];
                }
            }
            out[k] += v;
        }
    }
    return out;
}

QVector PotentialCocycle::eval(const QVector& a, const QVector& b) const {
    return sub(sub(phi_.eval(add(a, b)), phi_.eval(a)), phi_.eval(b));
}

ShiftCocycle::ShiftCocycle(CocyclePtr base, QVector shift)
    : base_(std::move(base)), shift_(std::move(shift)) {
    if (!base_) {
        throw ContractError("shift cocycle needs a base cocycle");
    }
    if (shift_.size() != base_->out_dim()) {
        throw ContractError("shift dimension must match the base output dimension");
    }
}

QVector ShiftCocycle::eval(const QVector& a, const QVector& b) const {
    return add(base_->eval(a, b), shift_);
}

SumCocycle::SumCocycle(std::vector<std::pair<Rational, CocyclePtr>> terms)
    : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw ContractError("sum cocycle needs at least one term");
    }
    for (const auto& [c, f] : terms_) {
        if (!f) {
            throw ContractError("sum cocycle term is null");
        }
        if (f->in_dim() != terms_.front().second->in_dim() ||
            f->out_dim() != terms_.front().second->out_dim()) {
            throw ContractError("sum cocycle terms must share dimensions");
        }
    }
}

QVector SumCocycle::eval(const QVector& a, const QVector& b) const {
    QVector out(out_dim(), Rational(0));
    for (const auto& [c, f] : terms_) {
        out = add(out, scale(c, f->eval(a, b)));
    }
    return out;
}

CocycleN::CocycleN(CocyclePtr f) : f_(std::move(f)) {
    if (!f_) {
        throw ContractError("n-ary extension needs a base cocycle");
    }
}

QVector CocycleN::eval(const std::vector<QVector>& tuple) const {
    if (tuple.empty()) {
        throw ContractError("n-ary cocycle needs at least one argument");
    }
    QVector out(f_->out_dim(), Rational(0));
    if (tuple.size() == 1) {
        return out;  // single argument evaluates to zero
    }
    QVector prefix = tuple[0];
    for (std::size_t j = 1; j < tuple.size(); ++j) {
        out = add(out, f_->eval(prefix, tuple[j]));
        prefix = add(prefix, tuple[j]);
    }
    return out;
}

QVector CocycleN::eval_checked(const ConeDomain& domain,
                               const std::vector<QVector>& tuple) const {
    if (!domain.tuple_in_domain(tuple)) {
        throw DomainViolation("n-ary cocycle: tuple outside the domain of definition");
    }
    return eval(tuple);
}

CocycleN extend_nary(CocyclePtr f) { return CocycleN(std::move(f)); }

QVector cocycle_offset(const Cocycle2& f) {
    const QVector zero = zero_vector(f.in_dim());
    return f.eval(zero, zero);
}

std::pair<CocyclePtr, QVector> normalize(CocyclePtr f) {
    QVector z = cocycle_offset(*f);
    if (is_zero(z)) {
        return {std::move(f), std::move(z)};
    }
    CocyclePtr shifted = std::make_shared<ShiftCocycle>(f, scale(Rational(-1), z));
    return {std::move(shifted), std::move(z)};
}

namespace {

std::string pair_witness(const QVector& a, const QVector& b) {
    return "a = " + to_string(a) + ", b = " + to_string(b);
}

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

Report check_cocycle2(const CocyclePtr& f, const ConeDomain& domain, std::size_t samples,
                      std::uint64_t seed, std::uint64_t max_denominator, ExecMode mode) {
    Report report;
    report.command = "check_cocycle2";
    if (f->in_dim() != domain.dim()) {
        throw ContractError("cocycle dimension does not match the domain");
    }

    DomainSampler sampler(domain, max_denominator);
    SplitMix64 rng(seed);
    std::vector<std::vector<QVector>> triples;
    triples.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        triples.push_back(sampler.sample_tuple(rng, 3));
    }

    const std::size_t sym_bad = first_violation(samples, mode, [&](std::size_t i) {
        const auto& t = triples[i];
        return f->eval(t[0], t[1]) != f->eval(t[1], t[0]);
    });
    report.add("symmetry f(a,b) = f(b,a)", sym_bad == samples,
               sym_bad == samples ? ""
                                  : "sample " + std::to_string(sym_bad) + ": " +
                                        pair_witness(triples[sym_bad][0], triples[sym_bad][1]));

    const std::size_t law_bad = first_violation(samples, mode, [&](std::size_t i) {
        const auto& t = triples[i];
        const QVector lhs = add(f->eval(t[0], add(t[1], t[2])), f->eval(t[1], t[2]));
        const QVector rhs = add(f->eval(add(t[0], t[1]), t[2]), f->eval(t[0], t[1]));
        return lhs != rhs;
    });
    report.add("cocycle law f(a,b+c) + f(b,c) = f(a+b,c) + f(a,b)", law_bad == samples,
               law_bad == samples ? ""
                                  : "sample " + std::to_string(law_bad) + ": " +
                                        tuple_witness(triples[law_bad]));
    return report;
}

Report check_symmetry_nary(const CocycleN& fn, const ConeDomain& domain, std::size_t arity,
                           std::size_t samples, std::uint64_t seed,
                           std::uint64_t max_denominator, ExecMode mode) {
    Report report;
    report.command = "check_symmetry_nary(n=" + std::to_string(arity) + ")";
    if (arity < 2 || arity > 8) {
        throw ContractError("n-ary symmetry check supports 2 <= n <= 8");
    }

    DomainSampler sampler(domain, max_denominator);
    SplitMix64 rng(seed);
    std::vector<std::vector<QVector>> tuples;
    std::vector<std::vector<std::size_t>> perms;
    tuples.reserve(samples);
    perms.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        tuples.push_back(sampler.sample_tuple(rng, arity));
        perms.push_back(DomainSampler::sample_permutation(rng, arity));
    }

    const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
        std::vector<QVector> shuffled(arity);
        for (std::size_t k = 0; k < arity; ++k) {
            shuffled[k] = tuples[i][perms[i][k]];
        }
        return fn.eval(tuples[i]) != fn.eval(shuffled);
    });
    report.add("permutation invariance of the n-ary value", bad == samples,
               bad == samples
                   ? ""
                   : "sample " + std::to_string(bad) + ": " + tuple_witness(tuples[bad]));
    return report;
}

Report check_grouping(const CocycleN& fn, const ConeDomain& domain,
                      const std::vector<std::size_t>& shape, std::size_t samples,
                      std::uint64_t seed, std::uint64_t max_denominator, ExecMode mode) {
    Report report;
    std::string shape_text;
    std::size_t total = 0;
    for (std::size_t part : shape) {
        if (part == 0) {
            throw ContractError("grouping shape parts must be >= 1");
        }
        if (!shape_text.empty()) {
            shape_text += ",";
        }
        shape_text += std::to_string(part);
        total += part;
    }
    report.command = "check_grouping(shape=" + shape_text + ")";
    if (shape.empty() || total > 8) {
        throw ContractError("grouping shape must be nonempty with total arity <= 8");
    }

    DomainSampler sampler(domain, max_denominator);
    SplitMix64 rng(seed);
    std::vector<std::vector<QVector>> tuples;
    tuples.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        tuples.push_back(sampler.sample_tuple(rng, total));
    }

    const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
        const std::vector<QVector>& flat = tuples[i];
        // Right side: value at the per-group sums plus the per-group values.
        std::vector<QVector> group_sums;
        QVector rhs(fn.base()->out_dim(), Rational(0));
        std::size_t pos = 0;
        for (std::size_t part : shape) {
            std::vector<QVector> group(flat.begin() + pos, flat.begin() + pos + part);
            pos += part;
            QVector sum = group.front();
            for (std::size_t k = 1; k < group.size(); ++k) {
                sum = add(sum, group[k]);
            }
            group_sums.push_back(std::move(sum));
            rhs = add(rhs, fn.eval(group));
        }
        rhs = add(rhs, fn.eval(group_sums));
        return fn.eval(flat) != rhs;
    });
    report.add("grouping identity: flat value = grouped value + per-group values",
               bad == samples,
               bad == samples
                   ? ""
                   : "sample " + std::to_string(bad) + ": " + tuple_witness(tuples[bad]));
    return report;
}

Report check_offset_laws(const CocyclePtr& f, const ConeDomain& domain, std::size_t n_max,
                         std::size_t samples, std::uint64_t seed,
                         std::uint64_t max_denominator, ExecMode mode) {
    Report report;
    report.command = "check_offset_laws";
    const QVector z = cocycle_offset(*f);
    const QVector zero = zero_vector(f->in_dim());
    const CocycleN fn = extend_nary(f);

    bool zeros_ok = true;
    std::string zeros_witness;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const std::vector<QVector> tuple(n, zero);
        QVector expect(f->out_dim(), Rational(0));
        for (std::size_t k = 1; k < n; ++k) {
            expect = add(expect, z);
        }
        if (fn.eval(tuple) != expect) {
            zeros_ok = false;
            zeros_witness = "n = " + std::to_string(n);
            break;
        }
    }
    report.add("f(0 : n) = (n-1) z for n <= " + std::to_string(n_max), zeros_ok, zeros_witness);

    DomainSampler sampler(domain, max_denominator);
    SplitMix64 rng(seed);
    std::vector<QVector> points;
    points.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        points.push_back(sampler.sample_point(rng));
    }
    const std::size_t bad = first_violation(samples, mode, [&](std::size_t i) {
        return f->eval(points[i], zero) != z;
    });
    report.add("f(a, 0) = z on sampled points", bad == samples,
               bad == samples ? "" : "a = " + to_string(points[bad]));
    return report;
}

}  // namespace cforge

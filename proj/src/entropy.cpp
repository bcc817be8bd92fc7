#include "cforge/entropy.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

#include "cforge/coboundary.hpp"
#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
#include "cforge/errors.hpp"
#include "cforge/linsolve.hpp"
#include "cforge/rng.hpp"

namespace cforge {

namespace {

// Adds the prime exponents of n (n >= 1) into exps with the given sign.
void factor_into(const BigInt& n_in, std::map<BigInt, BigInt>& exps, int sign) {
    BigInt n = n_in;
    for (BigInt p = 2; p * p <= n; p += (p == 2 ? BigInt(1) : BigInt(2))) {
        while (n % p == 0) {
            exps[p] += sign;
            n /= p;
        }
    }
    if (n > 1) {
        exps[n] += sign;
    }
}

std::uint32_t full_mask_for(std::size_t n) {
    return n == 32 ? 0xFFFFFFFFu : ((1u << n) - 1u);
}

std::string mask_to_string(std::uint32_t mask) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < 32; ++i) {
        if (mask & (1u << i)) {
            if (!first) {
                out += ",";
            }
            out += std::to_string(i);
            first = false;
        }
    }
    return out + "}";
}

// Index-sequence lexicographic order on subsets: {0,2} < {1}, {0} < {0,2}.
bool lex_less(std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
        const int ia = std::countr_zero(a);
        const int ib = std::countr_zero(b);
        if (ia != ib) {
            return ia < ib;
        }
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<Rational> atom_probs) : probs_(std::move(atom_probs)) {
    if (probs_.empty()) {
        throw ContractError("space needs at least one atom");
    }
    if (probs_.size() > 32) {
        throw ContractError("at most 32 atoms supported");
    }
    Rational total = 0;
    for (const Rational& p : probs_) {
        if (p < 0) {
            throw ContractError("atom probabilities must be nonnegative");
        }
        total += p;
    }
    if (total != 1) {
        throw ContractError("atom probabilities must sum to 1");
    }
    std::set<BigInt> primes;
    for (const Rational& p : probs_) {
        if (p == 0) {
            continue;
        }
        std::map<BigInt, BigInt> exps;
        factor_into(numerator(p), exps, 1);
        factor_into(denominator(p), exps, 1);
        for (const auto& [prime, e] : exps) {
            primes.insert(prime);
        }
    }
    basis_.assign(primes.begin(), primes.end());
}

Rational FiniteSpace::measure(std::uint32_t mask) const {
    if (mask & ~full_mask_for(probs_.size())) {
        throw ContractError("subset mask references atoms out of range");
    }
    Rational total = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (mask & (1u << i)) {
            total += probs_[i];
        }
    }
    return total;
}

std::vector<BigInt> FiniteSpace::log_coords(const Rational& p) const {
    if (p <= 0) {
        throw ContractError("log coordinates need a positive rational");
    }
    // Exponent vector of 1/p: denominator counts positively.
    std::map<BigInt, BigInt> exps;
    factor_into(denominator(p), exps, 1);
    factor_into(numerator(p), exps, -1);
    std::vector<BigInt> coords(basis_.size(), BigInt(0));
    for (const auto& [prime, e] : exps) {
        if (e == 0) {
            continue;
        }
        const auto it = std::lower_bound(basis_.begin(), basis_.end(), prime);
        if (it == basis_.end() || *it != prime) {
            throw ContractError("rational " + to_string(p) +
                                " uses a prime outside the space's basis");
        }
        coords[static_cast<std::size_t>(it - basis_.begin())] = e;
    }
    return coords;
}

bool FiniteSpace::factors_over_basis(const Rational& p) const {
    if (p <= 0) {
        return false;
    }
    std::map<BigInt, BigInt> exps;
    factor_into(denominator(p), exps, 1);
    factor_into(numerator(p), exps, -1);
    for (const auto& [prime, e] : exps) {
        if (e != 0 && !std::binary_search(basis_.begin(), basis_.end(), prime)) {
            return false;
        }
    }
    return true;
}

Partition::Partition(std::size_t atom_count,
                     const std::vector<std::vector<std::size_t>>& blocks)
    : atom_count_(atom_count) {
    blocks_.reserve(blocks.size());
    for (const auto& block : blocks) {
        std::uint32_t mask = 0;
        for (std::size_t idx : block) {
            if (idx >= atom_count_ || atom_count_ > 32) {
                throw ContractError("partition block references an atom out of range");
            }
            mask |= (1u << idx);
        }
        blocks_.push_back(mask);
    }
    canonicalize_and_validate();
}

Partition::Partition(std::size_t atom_count, std::vector<std::uint32_t> block_masks)
    : atom_count_(atom_count), blocks_(std::move(block_masks)) {
    canonicalize_and_validate();
}

void Partition::canonicalize_and_validate() {
    if (atom_count_ == 0 || atom_count_ > 32) {
        throw ContractError("partition needs 1..32 atoms");
    }
    const std::uint32_t full = full_mask_for(atom_count_);
    std::uint32_t seen = 0;
    for (std::uint32_t mask : blocks_) {
        if (mask == 0) {
            throw ContractError("partition blocks must be nonempty");
        }
        if (mask & ~full) {
            throw ContractError("partition block references an atom out of range");
        }
        if (mask & seen) {
            throw ContractError("partition blocks must be disjoint");
        }
        seen |= mask;
    }
    if (seen != full) {
        throw ContractError("partition blocks must cover every atom");
    }
    std::sort(blocks_.begin(), blocks_.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::countr_zero(a) < std::countr_zero(b);
    });
}

std::vector<std::vector<std::size_t>> Partition::block_indices() const {
    std::vector<std::vector<std::size_t>> out;
    out.reserve(blocks_.size());
    for (std::uint32_t mask : blocks_) {
        std::vector<std::size_t> block;
        for (std::size_t i = 0; i < atom_count_; ++i) {
            if (mask & (1u << i)) {
                block.push_back(i);
            }
        }
        out.push_back(std::move(block));
    }
    return out;
}

Partition join(const Partition& a, const Partition& b) {
    if (a.atom_count() != b.atom_count()) {
        throw ContractError("join needs partitions of the same space");
    }
    std::vector<std::uint32_t> blocks;
    for (std::uint32_t ma : a.blocks()) {
        for (std::uint32_t mb : b.blocks()) {
            const std::uint32_t inter = ma & mb;
            if (inter != 0) {
                blocks.push_back(inter);
            }
        }
    }
    return Partition(a.atom_count(), std::move(blocks));
}

bool independent(const FiniteSpace& space, const Partition& a, const Partition& b) {
    if (a.atom_count() != space.atom_count() || b.atom_count() != space.atom_count()) {
        throw ContractError("partition does not match the space");
    }
    for (std::uint32_t ma : a.blocks()) {
        const Rational pa = space.measure(ma);
        for (std::uint32_t mb : b.blocks()) {
            if (space.measure(ma & mb) != pa * space.measure(mb)) {
                return false;
            }
        }
    }
    return true;
}

AtomSetFunction::AtomSetFunction(const FiniteSpace& space, std::size_t out_dim,
                                 std::vector<QMatrix> atom_matrices)
    : out_dim_(out_dim), matrices_(std::move(atom_matrices)) {
    if (out_dim_ == 0) {
        throw ContractError("set function needs a positive output dimension");
    }
    if (matrices_.size() != space.atom_count()) {
        throw ContractError("set function needs one matrix per atom");
    }
    const std::size_t cols = space.prime_basis().size();
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
        if (matrices_[i].rows != out_dim_ || matrices_[i].cols != cols) {
            throw ContractError("atom matrix must be out_dim x |prime basis|");
        }
        if (space.probs()[i] == 0 && !is_zero(matrices_[i])) {
            throw ContractError("atoms of probability zero must carry the zero matrix");
        }
    }
}

QMatrix AtomSetFunction::set_matrix(std::uint32_t mask) const {
    QMatrix total(out_dim_, matrices_.empty() ? 0 : matrices_.front().cols);
    for (std::size_t i = 0; i < matrices_.size(); ++i) {
        if (mask & (1u << i)) {
            total = add(total, matrices_[i]);
        }
    }
    return total;
}

QVector AtomSetFunction::apply(std::uint32_t mask, const std::vector<BigInt>& coords) const {
    QVector rational_coords(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        rational_coords[i] = Rational(coords[i]);
    }
    return matvec(set_matrix(mask), rational_coords);
}

QVector eval_Lm(const FiniteSpace& space, const AtomSetFunction& m, const Partition& a) {
    if (a.atom_count() != space.atom_count()) {
        throw ContractError("partition does not match the space");
    }
    QVector out(m.out_dim(), Rational(0));
    for (std::uint32_t block : a.blocks()) {
        const Rational p = space.measure(block);
        if (p == 0) {
            continue;  // the block's set function is zero and log is undefined
        }
        out = add(out, m.apply(block, space.log_coords(p)));
    }
    return out;
}

QVector shannon_H(const FiniteSpace& space, const Partition& a) {
    QVector out(space.prime_basis().size(), Rational(0));
    for (std::uint32_t block : a.blocks()) {
        const Rational p = space.measure(block);
        if (p == 0) {
            continue;
        }
        const auto coords = space.log_coords(p);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            out[i] += p * Rational(coords[i]);
        }
    }
    return out;
}

Report check_additivity(const FiniteSpace& space, const AtomSetFunction& m, const Partition& a,
                        const Partition& b) {
    if (!independent(space, a, b)) {
        throw ContractError("additivity check needs independent partitions");
    }
    Report report;
    report.command = "check_additivity";
    const QVector joint = eval_Lm(space, m, join(a, b));
    const QVector split = add(eval_Lm(space, m, a), eval_Lm(space, m, b));
    report.add("L_m(join) = L_m(A) + L_m(B)", joint == split,
               joint == split ? ""
                              : "join value " + to_string(joint) + " vs sum " + to_string(split));
    return report;
}

std::optional<QMatrix> is_measure_multiple(const FiniteSpace& space, const AtomSetFunction& m) {
    std::size_t witness = space.atom_count();
    for (std::size_t i = 0; i < space.atom_count(); ++i) {
        if (space.probs()[i] != 0) {
            witness = i;
            break;
        }
    }
    const QMatrix t = scale(Rational(1) / space.probs()[witness],
                            m.atom_matrices()[witness]);
    for (std::size_t i = 0; i < space.atom_count(); ++i) {
        if (m.atom_matrices()[i] != scale(space.probs()[i], t)) {
            return std::nullopt;
        }
    }
    return t;
}

std::vector<std::vector<std::uint32_t>> set_partitions(std::size_t n) {
    if (n == 0 || n > 12) {
        throw ContractError("set partition enumeration supports 1..12 atoms");
    }
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::size_t> rgs(n, 0);

    // Depth-first over restricted growth strings: rgs[0] = 0 and each later
    // entry is at most 1 + max of the prefix.
    struct Frame {
        std::size_t pos;
        std::size_t max_used;
    };
    const auto emit = [&]() {
        std::size_t block_count = 0;
        for (std::size_t v : rgs) {
            block_count = std::max(block_count, v + 1);
        }
        std::vector<std::uint32_t> blocks(block_count, 0);
        for (std::size_t i = 0; i < n; ++i) {
            blocks[rgs[i]] |= (1u << i);
        }
        out.push_back(std::move(blocks));
    };
    const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                  std::size_t max_used) {
        if (pos == n) {
            emit();
            return;
        }
        for (std::size_t v = 0; v <= max_used + 1; ++v) {
            rgs[pos] = v;
            rec(pos + 1, std::max(max_used, v));
        }
    };
    rec(1, 0);
    if (n == 1) {
        out.clear();
        out.push_back({1u});
    }
    return out;
}

std::optional<std::pair<Partition, Partition>> atom_measure_dependence_witness(
    const FiniteSpace& space, const AtomSetFunction& m, ExecMode mode) {
    const std::size_t n = space.atom_count();
    if (n > 10) {
        throw ContractError("witness search supports at most 10 atoms");
    }
    const std::uint32_t full = full_mask_for(n);

    // Per-mask L_m contribution; a partition's value is the sum over blocks.
    // Blocks whose positive measure picks up a prime outside the space's
    // basis have no value in the modeled log-prime span, so partitions
    // containing one are outside the comparison and get skipped.
    std::vector<QVector> contrib(full + 1u, QVector(m.out_dim(), Rational(0)));
    std::vector<Rational> measures(full + 1u);
    std::vector<bool> representable(full + 1u, true);
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        measures[mask] = space.measure(mask);
        if (mask != 0 && measures[mask] != 0) {
            if (space.factors_over_basis(measures[mask])) {
                contrib[mask] = m.apply(mask, space.log_coords(measures[mask]));
            } else {
                representable[mask] = false;
            }
        }
    }

    const auto partitions = set_partitions(n);
    std::vector<QVector> values(partitions.size());
    std::vector<char> evaluable(partitions.size(), 1);
    first_violation(partitions.size(), mode, [&](std::size_t i) {
        QVector v(m.out_dim(), Rational(0));
        for (std::uint32_t block : partitions[i]) {
            if (!representable[block]) {
                evaluable[i] = 0;
                return false;
            }
            v = add(v, contrib[block]);
        }
        values[i] = std::move(v);
        return false;  // pure per-slot fill; nothing to find
    });

    // Group by block-measure multiset; the first enumerated member of each
    // group is its reference.
    std::map<std::vector<Rational>, std::size_t> reference;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        if (!evaluable[i]) {
            continue;
        }
        std::vector<Rational> key;
        key.reserve(partitions[i].size());
        for (std::uint32_t block : partitions[i]) {
            key.push_back(measures[block]);
        }
        std::sort(key.begin(), key.end());
        const auto [it, inserted] = reference.emplace(std::move(key), i);
        if (!inserted && values[i] != values[it->second]) {
            return std::make_pair(Partition(n, partitions[it->second]),
                                  Partition(n, partitions[i]));
        }
    }
    return std::nullopt;
}

FixtureDelta::FixtureDelta(const FiniteSpace& space, std::size_t out_dim,
                           std::vector<QVector> atom_values)
    : out_dim_(out_dim) {
    const std::size_t n = space.atom_count();
    if (out_dim_ == 0) {
        throw ContractError("fixture needs a positive output dimension");
    }
    if (atom_values.size() != n) {
        throw ContractError("fixture needs one vector per atom");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (atom_values[i].size() != out_dim_) {
            throw ContractError("fixture atom value dimension mismatch");
        }
        if (space.probs()[i] == 0 && !is_zero(atom_values[i])) {
            throw ContractError("fixture must vanish on atoms of probability zero");
        }
    }
    const std::uint32_t full = full_mask_for(n);
    set_values_.assign(full + 1u, QVector(out_dim_, Rational(0)));
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const std::uint32_t low = mask & (mask - 1);  // mask without its lowest bit
        const std::size_t bit = static_cast<std::size_t>(std::countr_zero(mask));
        set_values_[mask] = add(set_values_[low], atom_values[bit]);
    }
}

QVector FixtureDelta::eval(std::uint32_t v_mask, std::uint32_t w_mask) const {
    if (v_mask >= set_values_.size() || w_mask >= set_values_.size()) {
        throw ContractError("fixture delta: mask out of range");
    }
    return sub(set_values_[w_mask], set_values_[v_mask]);
}

TableDelta::TableDelta(
    std::size_t out_dim,
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, QVector>> entries)
    : out_dim_(out_dim) {
    if (out_dim_ == 0) {
        throw ContractError("difference table needs a positive output dimension");
    }
    for (auto& [key, value] : entries) {
        if (value.size() != out_dim_) {
            throw ContractError("difference table value dimension mismatch");
        }
        table_.emplace(key, std::move(value));
    }
}

QVector TableDelta::eval(std::uint32_t v_mask, std::uint32_t w_mask) const {
    if (v_mask == w_mask) {
        return QVector(out_dim_, Rational(0));
    }
    if (const auto it = table_.find({v_mask, w_mask}); it != table_.end()) {
        return it->second;
    }
    if (const auto it = table_.find({w_mask, v_mask}); it != table_.end()) {
        return scale(Rational(-1), it->second);
    }
    throw ContractError("difference table has no entry for pair " + mask_to_string(v_mask) +
                        ", " + mask_to_string(w_mask));
}

namespace {

// The measure-level potential table extended by zero off-table, wrapped as
// the coboundary cocycle it generates on the one-dimensional cone.
class TablePotentialCocycle : public Cocycle2 {
public:
    TablePotentialCocycle(std::map<Rational, QVector> table, std::size_t out_dim)
        : table_(std::move(table)), out_dim_(out_dim) {}
    std::size_t in_dim() const override { return 1; }
    std::size_t out_dim() const override { return out_dim_; }
    QVector eval(const QVector& a, const QVector& b) const override {
        return sub(sub(lookup(a.at(0) + b.at(0)), lookup(a.at(0))), lookup(b.at(0)));
    }

private:
    QVector lookup(const Rational& t) const {
        const auto it = table_.find(t);
        return it != table_.end() ? it->second : QVector(out_dim_, Rational(0));
    }
    std::map<Rational, QVector> table_;
    std::size_t out_dim_;
};

}  // namespace

RecoverResult recover_m(const FiniteSpace& space, const DeltaEvaluator& delta,
                        const RecoverOptions& options) {
    const std::size_t n = space.atom_count();
    if (n > 12) {
        throw ContractError("recovery supports at most 12 atoms");
    }
    const std::size_t out = delta.out_dim();
    if (out == 0) {
        throw ContractError("difference function needs a positive output dimension");
    }
    const std::uint32_t full = full_mask_for(n);
    const std::size_t n_masks = static_cast<std::size_t>(full) + 1;

    std::vector<Rational> measures(n_masks);
    std::map<Rational, std::vector<std::uint32_t>> groups;  // equal-measure classes
    for (std::uint32_t v = 0; v <= full; ++v) {
        measures[v] = space.measure(v);
        groups[measures[v]].push_back(v);
    }
    std::uint32_t null_atoms = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (space.probs()[i] == 0) {
            null_atoms |= (1u << i);
        }
    }
    std::vector<const std::vector<std::uint32_t>*> group_list;
    for (const auto& [theta, members] : groups) {
        group_list.push_back(&members);
    }

    SplitMix64 rng(options.seed);
    const auto random_member = [&](const std::vector<std::uint32_t>& g) {
        return g[rng.uniform_int(0, g.size() - 1)];
    };

    // Contract check, chain rule: Delta(U, W) = Delta(U, V) + Delta(V, W)
    // on sampled equal-measure triples.
    for (std::size_t s = 0; s < options.samples; ++s) {
        const auto& g = *group_list[rng.uniform_int(0, group_list.size() - 1)];
        const std::uint32_t u = random_member(g);
        const std::uint32_t v = random_member(g);
        const std::uint32_t w = random_member(g);
        if (delta.eval(u, w) != add(delta.eval(u, v), delta.eval(v, w))) {
            throw RecoverFailure("difference function violates the chain rule at U = " +
                                 mask_to_string(u) + ", V = " + mask_to_string(v) +
                                 ", W = " + mask_to_string(w));
        }
    }

    // Contract check, additivity over disjoint unions, exercised through
    // measure-preserving atom permutations and through rejection-sampled
    // equal-measure partners.
    std::map<Rational, std::vector<std::size_t>> prob_classes;
    for (std::size_t i = 0; i < n; ++i) {
        prob_classes[space.probs()[i]].push_back(i);
    }
    const auto random_disjoint = [&](std::uint32_t& a, std::uint32_t& b) {
        a = 0;
        b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            switch (rng.uniform_int(0, 2)) {
                case 0: a |= (1u << i); break;
                case 1: b |= (1u << i); break;
                default: break;
            }
        }
    };
    for (std::size_t s = 0; s < options.samples; ++s) {
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        random_disjoint(a, b);
        std::uint32_t a2 = 0;
        std::uint32_t b2 = 0;
        bool have_partner = false;
        if (s % 2 == 0) {
            // Random permutation preserving every atom's probability.
            std::vector<std::size_t> perm(n);
            for (std::size_t i = 0; i < n; ++i) {
                perm[i] = i;
            }
            for (const auto& [p, members] : prob_classes) {
                std::vector<std::size_t> image = members;
                for (std::size_t i = image.size(); i > 1; --i) {
                    std::swap(image[i - 1], image[rng.uniform_int(0, i - 1)]);
                }
                for (std::size_t k = 0; k < members.size(); ++k) {
                    perm[members[k]] = image[k];
                }
            }
            const auto apply_perm = [&](std::uint32_t mask) {
                std::uint32_t img = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (mask & (1u << i)) {
                        img |= (1u << perm[i]);
                    }
                }
                return img;
            };
            a2 = apply_perm(a);
            b2 = apply_perm(b);
            have_partner = true;
        } else {
            for (int attempt = 0; attempt < 50 && !have_partner; ++attempt) {
                std::uint32_t a3 = 0;
                std::uint32_t b3 = 0;
                random_disjoint(a3, b3);
                if (measures[a3] == measures[a] && measures[b3] == measures[b]) {
                    a2 = a3;
                    b2 = b3;
                    have_partner = true;
                }
            }
        }
        if (!have_partner) {
            continue;
        }
        if (delta.eval(a | b, a2 | b2) != add(delta.eval(a, a2), delta.eval(b, b2))) {
            throw RecoverFailure(
                "difference function violates additivity over disjoint unions at A = " +
                mask_to_string(a) + ", B = " + mask_to_string(b) + ", A' = " +
                mask_to_string(a2) + ", B' = " + mask_to_string(b2));
        }
    }

    // Contract check, invariance under null-set modifications.
    if (null_atoms != 0) {
        const auto random_null_submask = [&]() {
            std::uint32_t sub_mask = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if ((null_atoms & (1u << i)) && rng.uniform_int(0, 1) == 1) {
                    sub_mask |= (1u << i);
                }
            }
            return sub_mask;
        };
        for (std::size_t s = 0; s < options.samples; ++s) {
            const auto& g = *group_list[rng.uniform_int(0, group_list.size() - 1)];
            const std::uint32_t v = random_member(g);
            const std::uint32_t w = random_member(g);
            const std::uint32_t v2 = v ^ random_null_submask();
            const std::uint32_t w2 = w ^ random_null_submask();
            if (delta.eval(v, w) != delta.eval(v2, w2)) {
                throw RecoverFailure(
                    "difference function is not invariant under null modifications at V = " +
                    mask_to_string(v) + " -> " + mask_to_string(v2) + ", W = " +
                    mask_to_string(w) + " -> " + mask_to_string(w2));
            }
        }
    }

    // Reference set of each measure: the index-lexicographically smallest
    // subset; then the one-reference difference m1.
    std::map<Rational, std::uint32_t> reference;
    for (const auto& [theta, members] : groups) {
        std::uint32_t best = members.front();
        for (std::uint32_t m : members) {
            if (lex_less(m, best)) {
                best = m;
            }
        }
        reference[theta] = best;
    }
    std::vector<QVector> m1(n_masks);
    for (std::uint32_t v = 0; v <= full; ++v) {
        m1[v] = delta.eval(reference.at(measures[v]), v);
    }

    // The pair function on achievable measure pairs, from the first disjoint
    // representative in ascending-mask order, plus the full list of disjoint
    // pairs for the exhaustive checks.
    std::map<Rational, std::size_t> theta_index;
    {
        std::size_t i = 0;
        for (const auto& [theta, members] : groups) {
            theta_index[theta] = i++;
        }
    }
    struct PairInfo {
        std::uint32_t rep_a;
        std::uint32_t rep_b;
        QVector value;
    };
    std::map<std::pair<std::size_t, std::size_t>, PairInfo> pair_table;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint_pairs;
    for (std::uint32_t a = 0; a <= full; ++a) {
        const std::uint32_t rest = full & ~a;
        std::uint32_t b = 0;
        while (true) {
            disjoint_pairs.emplace_back(a, b);
            const std::pair<std::size_t, std::size_t> key = {theta_index.at(measures[a]),
                                                             theta_index.at(measures[b])};
            if (pair_table.find(key) == pair_table.end()) {
                pair_table.emplace(key,
                                   PairInfo{a, b, sub(sub(m1[a | b], m1[a]), m1[b])});
            }
            if (b == rest) {
                break;
            }
            b = (b - rest) & rest;  // submasks of rest in ascending order
        }
    }

    // The pair value must depend on the measures only, not the representing
    // sets: exhaustively for <= 8 atoms, capped per measure pair above.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rep_checks;
    if (n <= 8) {
        rep_checks = disjoint_pairs;
    } else {
        std::map<std::pair<std::size_t, std::size_t>, int> counts;
        for (const auto& [a, b] : disjoint_pairs) {
            const std::pair<std::size_t, std::size_t> key = {theta_index.at(measures[a]),
                                                             theta_index.at(measures[b])};
            if (counts[key]++ < 16) {
                rep_checks.emplace_back(a, b);
            }
        }
    }
    {
        const std::size_t bad = first_violation(rep_checks.size(), options.mode,
                                                [&](std::size_t i) {
            const auto& [a, b] = rep_checks[i];
            const std::pair<std::size_t, std::size_t> key = {theta_index.at(measures[a]),
                                                             theta_index.at(measures[b])};
            return sub(sub(m1[a | b], m1[a]), m1[b]) != pair_table.at(key).value;
        });
        if (bad != rep_checks.size()) {
            const auto& [a, b] = rep_checks[bad];
            const std::pair<std::size_t, std::size_t> key = {theta_index.at(measures[a]),
                                                             theta_index.at(measures[b])};
            const PairInfo& info = pair_table.at(key);
            throw RecoverFailure("pair value depends on the representing sets: (" +
                                 mask_to_string(a) + ", " + mask_to_string(b) +
                                 ") disagrees with representatives (" +
                                 mask_to_string(info.rep_a) + ", " +
                                 mask_to_string(info.rep_b) + ")");
        }
    }

    // Solve for a potential of the pair function over the achievable
    // measures (exact incremental elimination; free values pinned to zero),
    // with the measure-0 gauge row attempted last.
    EchelonSystem sys(out);
    for (const auto& [key, info] : pair_table) {
        const std::size_t isum = theta_index.at(measures[info.rep_a | info.rep_b]);
        const std::vector<std::pair<std::size_t, Rational>> terms = {
            {isum, Rational(1)}, {key.first, Rational(-1)}, {key.second, Rational(-1)}};
        if (!sys.add(terms, info.value)) {
            throw RecoverFailure(
                "no potential is consistent with the pair function at measures (" +
                to_string(measures[info.rep_a]) + ", " + to_string(measures[info.rep_b]) + ")");
        }
    }
    sys.add({{theta_index.at(Rational(0)), Rational(1)}}, QVector(out, Rational(0)));

    std::map<Rational, QVector> hhat;
    {
        const auto solved = sys.solve();
        for (const auto& [theta, idx] : theta_index) {
            const auto it = solved.find(idx);
            hhat[theta] = it != solved.end() ? it->second : QVector(out, Rational(0));
        }
    }

    // Feed the completed coboundary through the cone solver on the
    // one-dimensional domain (generator 1, cap 1) and read the potential off
    // at the achievable measures.
    auto fhat = std::make_shared<TablePotentialCocycle>(hhat, out);
    const ConeDomain line(1, {QVector{Rational(1)}}, QVector{Rational(1)});
    SolveOptions solve_options;
    solve_options.validate_samples = options.samples;
    solve_options.seed = options.seed;
    const ExtensionTower tower = solve_coboundary(line, fhat, solve_options);
    std::map<Rational, QVector> h;
    for (const auto& [theta, idx] : theta_index) {
        h[theta] = tower.eval_h(QVector{theta});
    }

    RecoverResult result;
    result.out_dim = out;
    result.set_values.resize(n_masks);
    for (std::uint32_t v = 0; v <= full; ++v) {
        result.set_values[v] = sub(m1[v], h.at(measures[v]));
    }

    // Exhaustive postconditions.
    for (std::uint32_t v = 0; v <= full; ++v) {
        if (measures[v] == 0 && !is_zero(result.set_values[v])) {
            throw RecoverFailure("recovered function does not vanish on the null set " +
                                 mask_to_string(v));
        }
    }
    {
        const std::size_t bad = first_violation(disjoint_pairs.size(), options.mode,
                                                [&](std::size_t i) {
            const auto& [a, b] = disjoint_pairs[i];
            return result.set_values[a | b] !=
                   add(result.set_values[a], result.set_values[b]);
        });
        if (bad != disjoint_pairs.size()) {
            const auto& [a, b] = disjoint_pairs[bad];
            throw RecoverFailure("recovered function is not additive at A = " +
                                 mask_to_string(a) + ", B = " + mask_to_string(b));
        }
    }
    {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> equal_pairs;
        for (const auto& [theta, members] : groups) {
            for (std::uint32_t v : members) {
                for (std::uint32_t w : members) {
                    equal_pairs.emplace_back(v, w);
                }
            }
        }
        const std::size_t bad = first_violation(equal_pairs.size(), options.mode,
                                                [&](std::size_t i) {
            const auto& [v, w] = equal_pairs[i];
            return delta.eval(v, w) != sub(result.set_values[w], result.set_values[v]);
        });
        if (bad != equal_pairs.size()) {
            const auto& [v, w] = equal_pairs[bad];
            throw RecoverFailure("recovered function does not reproduce the difference at V = " +
                                 mask_to_string(v) + ", W = " + mask_to_string(w));
        }
    }
    return result;
}

}  // namespace cforge

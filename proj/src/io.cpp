#include "cforge/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

// Re-raise nlohmann's exceptions (missing key, wrong type, parse error) as
// input-contract errors so the CLI maps them to exit code 2.
template <typename F>
auto guarded(const char* what, F&& fn) {
    try {
        return fn();
    } catch (const Json::exception& e) {
        throw ContractError(std::string(what) + ": " + e.what());
    }
}

std::uint32_t mask_from_index_list(std::size_t atom_count, const Json& value) {
    if (!value.is_array()) {
        throw ContractError("a subset must be an array of atom indices");
    }
    std::uint32_t mask = 0;
    for (const auto& entry : value) {
        if (!entry.is_number_unsigned() && !entry.is_number_integer()) {
            throw ContractError("atom indices must be integers");
        }
        const auto idx = entry.get<std::int64_t>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= atom_count) {
            throw ContractError("atom index out of range: " + std::to_string(idx));
        }
        mask |= (1u << static_cast<std::uint32_t>(idx));
    }
    return mask;
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ContractError("cannot read file: " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ContractError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& value) {
    std::ofstream out(path);
    if (!out) {
        throw ContractError("cannot write file: " + path);
    }
    out << value.dump(2) << '\n';
    if (!out) {
        throw ContractError("failed while writing file: " + path);
    }
}

Json rational_to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& value) {
    if (value.is_string()) {
        return parse_rational(value.get<std::string>());
    }
    if (value.is_number_integer() || value.is_number_unsigned()) {
        return Rational(BigInt(value.get<std::int64_t>()));
    }
    throw ContractError("a rational must be a string \"p/q\" or an integer");
}

Json vector_to_json(const QVector& v) {
    Json out = Json::array();
    for (const auto& entry : v) {
        out.push_back(rational_to_json(entry));
    }
    return out;
}

QVector vector_from_json(const Json& value) {
    if (!value.is_array()) {
        throw ContractError("a vector must be an array of rationals");
    }
    QVector out;
    out.reserve(value.size());
    for (const auto& entry : value) {
        out.push_back(rational_from_json(entry));
    }
    return out;
}

Json matrix_to_json(const QMatrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols; ++c) {
            row.push_back(rational_to_json(m.at(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

QMatrix matrix_from_json(const Json& value) {
    if (!value.is_array() || value.empty()) {
        throw ContractError("a matrix must be a nonempty array of rows");
    }
    const std::size_t rows = value.size();
    const std::size_t cols = value.front().is_array() ? value.front().size() : 0;
    if (cols == 0) {
        throw ContractError("matrix rows must be nonempty arrays");
    }
    QMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = value[r];
        if (!row.is_array() || row.size() != cols) {
            throw ContractError("matrix rows must all have the same length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m.at(r, c) = rational_from_json(row[c]);
        }
    }
    return m;
}

Json domain_to_json(const ConeDomain& domain) {
    Json out;
    out["dim"] = domain.dim();
    Json gens = Json::array();
    for (const auto& g : domain.generators()) {
        gens.push_back(vector_to_json(g));
    }
    out["generators"] = std::move(gens);
    out["cap"] = vector_to_json(domain.cap());
    return out;
}

ConeDomain domain_from_json(const Json& value) {
    return guarded("malformed domain", [&] {
        const auto dim = value.at("dim").get<std::size_t>();
        std::vector<QVector> generators;
        for (const auto& g : value.at("generators")) {
            generators.push_back(vector_from_json(g));
        }
        return ConeDomain(dim, std::move(generators), vector_from_json(value.at("cap")));
    });
}

CocyclePtr cocycle_from_json(const Json& value) {
    return guarded("malformed cocycle", [&]() -> CocyclePtr {
        const auto family = value.at("family").get<std::string>();
        if (family == "bilinear") {
            const auto dim = value.at("dim").get<std::size_t>();
            std::vector<QMatrix> forms;
            for (const auto& form : value.at("forms")) {
                forms.push_back(matrix_from_json(form));
            }
            return std::make_shared<BilinearCocycle>(dim, std::move(forms));
        }
        if (family == "potential") {
            const auto dim = value.at("dim").get<std::size_t>();
            const auto out_dim = value.at("out_dim").get<std::size_t>();
            std::vector<std::vector<PotentialTerm>> coord_terms;
            for (const auto& coord : value.at("terms")) {
                std::vector<PotentialTerm> terms;
                for (const auto& term : coord) {
                    PotentialTerm t;
                    t.coeff = rational_from_json(term.at("coeff"));
                    const auto& exponents = term.at("exponents");
                    if (!exponents.is_array() || exponents.size() != dim) {
                        throw ContractError(
                            "a potential term needs one exponent per variable");
                    }
                    for (std::size_t i = 0; i < dim; ++i) {
                        const auto e = exponents[i].get<std::uint32_t>();
                        if (e > 0) {
                            t.factors.emplace_back(i, e);
                        }
                    }
                    terms.push_back(std::move(t));
                }
                coord_terms.push_back(std::move(terms));
            }
            return std::make_shared<PotentialCocycle>(
                Potential(dim, out_dim, std::move(coord_terms)));
        }
        if (family == "shift") {
            CocyclePtr base = cocycle_from_json(value.at("base"));
            return std::make_shared<ShiftCocycle>(std::move(base),
                                                  vector_from_json(value.at("offset")));
        }
        if (family == "sum") {
            std::vector<std::pair<Rational, CocyclePtr>> terms;
            for (const auto& term : value.at("terms")) {
                terms.emplace_back(rational_from_json(term.at("coeff")),
                                   cocycle_from_json(term.at("cocycle")));
            }
            return std::make_shared<SumCocycle>(std::move(terms));
        }
        throw ContractError("unknown cocycle family: " + family);
    });
}

Json space_to_json(const FiniteSpace& space) {
    Json out;
    Json probs = Json::array();
    for (const auto& p : space.probs()) {
        probs.push_back(rational_to_json(p));
    }
    out["probs"] = std::move(probs);
    return out;
}

FiniteSpace space_from_json(const Json& value) {
    return guarded("malformed space", [&] {
        std::vector<Rational> probs;
        for (const auto& p : value.at("probs")) {
            probs.push_back(rational_from_json(p));
        }
        return FiniteSpace(std::move(probs));
    });
}

AtomSetFunction m_from_json(const FiniteSpace& space, const Json& value) {
    return guarded("malformed set function", [&] {
        const auto out_dim = value.at("out_dim").get<std::size_t>();
        const std::size_t basis = space.prime_basis().size();
        std::vector<QMatrix> matrices;
        for (const auto& atom : value.at("atoms")) {
            const QVector flat = vector_from_json(atom);
            if (out_dim == 0 || flat.size() != out_dim * basis) {
                throw ContractError(
                    "each atom needs a flat row-major out_dim x basis matrix");
            }
            QMatrix m(out_dim, basis);
            m.data = flat;
            matrices.push_back(std::move(m));
        }
        return AtomSetFunction(space, out_dim, std::move(matrices));
    });
}

Partition partition_from_json(std::size_t atom_count, const Json& value) {
    return guarded("malformed partition", [&] {
        if (!value.is_array()) {
            throw ContractError("a partition must be an array of blocks");
        }
        std::vector<std::vector<std::size_t>> blocks;
        for (const auto& block : value) {
            if (!block.is_array()) {
                throw ContractError("a partition block must be an array of atom indices");
            }
            std::vector<std::size_t> indices;
            for (const auto& entry : block) {
                const auto idx = entry.get<std::int64_t>();
                if (idx < 0 || static_cast<std::size_t>(idx) >= atom_count) {
                    throw ContractError("atom index out of range: " + std::to_string(idx));
                }
                indices.push_back(static_cast<std::size_t>(idx));
            }
            blocks.push_back(std::move(indices));
        }
        return Partition(atom_count, blocks);
    });
}

std::unique_ptr<DeltaEvaluator> delta_from_json(const FiniteSpace& space, const Json& value) {
    return guarded("malformed difference function", [&]() -> std::unique_ptr<DeltaEvaluator> {
        const auto out_dim = value.at("out_dim").get<std::size_t>();
        const bool has_fixture = value.contains("ground_truth_m");
        const bool has_table = value.contains("table");
        const bool has_zero = value.contains("zero");
        if (static_cast<int>(has_fixture) + static_cast<int>(has_table) +
                static_cast<int>(has_zero) != 1) {
            throw ContractError(
                "exactly one of ground_truth_m, table, zero must be present");
        }
        if (has_fixture) {
            std::vector<QVector> atom_values;
            for (const auto& v : value.at("ground_truth_m")) {
                atom_values.push_back(vector_from_json(v));
            }
            return std::make_unique<FixtureDelta>(space, out_dim, std::move(atom_values));
        }
        if (has_table) {
            std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, QVector>> entries;
            for (const auto& entry : value.at("table")) {
                const std::uint32_t v = mask_from_index_list(space.atom_count(), entry.at("v"));
                const std::uint32_t w = mask_from_index_list(space.atom_count(), entry.at("w"));
                if (space.measure(v) != space.measure(w)) {
                    throw ContractError(
                        "difference table pairs must have equal measures");
                }
                entries.push_back({{v, w}, vector_from_json(entry.at("value"))});
            }
            return std::make_unique<TableDelta>(out_dim, std::move(entries));
        }
        if (!value.at("zero").get<bool>()) {
            throw ContractError("the zero marker must be true when present");
        }
        return std::make_unique<ZeroDelta>(out_dim);
    });
}

Json tower_to_json(const ExtensionTower& tower) {
    Json out;
    out["dim"] = tower.domain().dim();
    out["z"] = vector_to_json(tower.z());
    Json steps = Json::array();
    for (const auto& step : tower.steps()) {
        Json s;
        s["generator"] = vector_to_json(step.generator);
        s["case"] = std::string(1, step.case_tag);
        s["direction"] = vector_to_json(step.ray.direction);
        s["anchor_scale"] = rational_to_json(step.ray.anchor_scale);
        s["anchor_value"] = vector_to_json(step.ray.anchor_value);
        s["witness_r"] = vector_to_json(step.witness_r);
        s["alpha0"] = rational_to_json(step.alpha0);
        steps.push_back(std::move(s));
    }
    out["steps"] = std::move(steps);
    return out;
}

ExtensionTower tower_from_json(const ConeDomain& domain, CocyclePtr f, const Json& value) {
    return guarded("malformed tower", [&] {
        if (value.at("dim").get<std::size_t>() != domain.dim()) {
            throw ContractError("tower dimension does not match the domain");
        }
        ExtensionTower tower(domain, std::move(f), vector_from_json(value.at("z")));
        for (const auto& s : value.at("steps")) {
            ExtensionStep step;
            step.generator = vector_from_json(s.at("generator"));
            const auto tag = s.at("case").get<std::string>();
            if (tag != "A" && tag != "B") {
                throw ContractError("step case must be \"A\" or \"B\"");
            }
            step.case_tag = tag.front();
            step.ray.direction = vector_from_json(s.at("direction"));
            step.ray.anchor_scale = rational_from_json(s.at("anchor_scale"));
            step.ray.anchor_value = vector_from_json(s.at("anchor_value"));
            step.witness_r = vector_from_json(s.at("witness_r"));
            step.alpha0 = rational_from_json(s.at("alpha0"));
            tower.add_step(std::move(step));
        }
        return tower;
    });
}

Json report_to_json(const Report& report) {
    Json out;
    out["command"] = report.command;
    out["elapsed_ms"] = report.elapsed_ms;
    out["pass"] = report.pass();
    Json results = Json::array();
    for (const auto& r : report.results) {
        Json entry;
        entry["property"] = r.property;
        entry["pass"] = r.pass;
        entry["witness"] = r.witness;
        results.push_back(std::move(entry));
    }
    out["results"] = std::move(results);
    return out;
}

Report report_from_json(const Json& value) {
    return guarded("malformed report", [&] {
        Report report;
        report.command = value.at("command").get<std::string>();
        report.elapsed_ms = value.at("elapsed_ms").get<long long>();
        for (const auto& entry : value.at("results")) {
            report.add(entry.at("property").get<std::string>(),
                       entry.at("pass").get<bool>(),
                       entry.at("witness").get<std::string>());
        }
        return report;
    });
}

Json gen_domain(std::size_t dims, std::size_t n_generators, SplitMix64& rng) {
    if (dims == 0 || dims > 8 || n_generators == 0 || n_generators > 16) {
        throw ContractError("domain generation supports 1..8 dimensions and 1..16 generators");
    }
    // First coordinate >= 1 for every generator and cap = e_1: the cone is
    // pointed by construction and the cap is positive on every generator,
    // which keeps the comparison grids finite.
    std::vector<QVector> generators;
    for (std::size_t i = 0; i < n_generators; ++i) {
        QVector g(dims, Rational(0));
        g[0] = Rational(BigInt(rng.uniform_int(1, 3)));
        for (std::size_t j = 1; j < dims; ++j) {
            g[j] = Rational(BigInt(rng.uniform_int(0, 6)) - 3);
        }
        generators.push_back(std::move(g));
    }
    QVector cap(dims, Rational(0));
    cap[0] = Rational(1);
    const ConeDomain domain(dims, std::move(generators), std::move(cap));  // validate
    return domain_to_json(domain);
}

namespace {

Rational small_nonzero_rational(SplitMix64& rng, std::uint64_t num_bound,
                                std::uint64_t den_bound) {
    const BigInt num = BigInt(rng.uniform_int(1, num_bound)) *
                       (rng.uniform_int(0, 1) == 0 ? 1 : -1);
    const BigInt den = BigInt(rng.uniform_int(1, den_bound));
    return Rational(num) / Rational(den);
}

Json gen_bilinear(std::size_t dims, std::size_t out_dim, SplitMix64& rng) {
    Json out;
    out["family"] = "bilinear";
    out["dim"] = dims;
    Json forms = Json::array();
    for (std::size_t k = 0; k < out_dim; ++k) {
        QMatrix form(dims, dims);
        for (std::size_t i = 0; i < dims; ++i) {
            for (std::size_t j = i; j < dims; ++j) {
                const Rational v = Rational(BigInt(rng.uniform_int(0, 8)) - 4);
                form.at(i, j) = v;
                form.at(j, i) = v;
            }
        }
        forms.push_back(matrix_to_json(form));
    }
    out["forms"] = std::move(forms);
    return out;
}

Json gen_potential(std::size_t dims, std::size_t out_dim, SplitMix64& rng) {
    Json out;
    out["family"] = "potential";
    out["dim"] = dims;
    out["out_dim"] = out_dim;
    Json coords = Json::array();
    for (std::size_t k = 0; k < out_dim; ++k) {
        Json terms = Json::array();
        const std::size_t n_terms = rng.uniform_int(2, 4);
        for (std::size_t t = 0; t < n_terms; ++t) {
            Json term;
            term["coeff"] = rational_to_json(small_nonzero_rational(rng, 6, 4));
            std::vector<std::uint32_t> exponents(dims, 0);
            if (t == 0 && rng.uniform_int(0, 1) == 0) {
                // constant term: shifts the offset f(0,0) away from zero
            } else {
                const std::size_t nvars = rng.uniform_int(1, dims >= 2 ? 2 : 1);
                for (std::size_t v = 0; v < nvars; ++v) {
                    exponents[rng.uniform_int(0, dims - 1)] += 1;
                }
                exponents[rng.uniform_int(0, dims - 1)] +=
                    static_cast<std::uint32_t>(rng.uniform_int(0, 2));
            }
            term["exponents"] = exponents;
            terms.push_back(std::move(term));
        }
        coords.push_back(std::move(terms));
    }
    out["terms"] = std::move(coords);
    return out;
}

}  // namespace

Json gen_cocycle(const std::string& family, std::size_t dims, std::size_t out_dim,
                 SplitMix64& rng) {
    if (dims == 0 || dims > 8 || out_dim == 0 || out_dim > 4) {
        throw ContractError("cocycle generation supports 1..8 dimensions and 1..4 outputs");
    }
    if (family == "bilinear") {
        return gen_bilinear(dims, out_dim, rng);
    }
    if (family == "potential") {
        return gen_potential(dims, out_dim, rng);
    }
    if (family == "shift") {
        Json out;
        out["family"] = "shift";
        QVector offset(out_dim);
        for (auto& entry : offset) {
            entry = small_nonzero_rational(rng, 5, 3);
        }
        out["offset"] = vector_to_json(offset);
        out["base"] = gen_bilinear(dims, out_dim, rng);
        return out;
    }
    if (family == "sum") {
        Json out;
        out["family"] = "sum";
        Json terms = Json::array();
        for (int t = 0; t < 2; ++t) {
            Json term;
            term["coeff"] = rational_to_json(small_nonzero_rational(rng, 3, 2));
            term["cocycle"] = t == 0 ? gen_bilinear(dims, out_dim, rng)
                                     : gen_potential(dims, out_dim, rng);
            terms.push_back(std::move(term));
        }
        out["terms"] = std::move(terms);
        return out;
    }
    throw ContractError("unknown cocycle family: " + family);
}

Json gen_space(std::size_t atoms, std::uint64_t denom, SplitMix64& rng) {
    if (atoms == 0 || atoms > 32 || denom == 0 || denom > 1000000) {
        throw ContractError("space generation supports 1..32 atoms and denominators up to 10^6");
    }
    // A random composition of denom into `atoms` (possibly zero) parts from
    // sorted cut points; repeated cuts yield atoms of probability zero.
    std::vector<std::uint64_t> cuts;
    cuts.push_back(0);
    for (std::size_t i = 0; i + 1 < atoms; ++i) {
        cuts.push_back(rng.uniform_int(0, denom));
    }
    cuts.push_back(denom);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> probs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        probs.push_back(Rational(BigInt(cuts[i + 1] - cuts[i])) / Rational(BigInt(denom)));
    }
    return space_to_json(FiniteSpace(std::move(probs)));
}

Json gen_delta_fixture(const FiniteSpace& space, std::size_t out_dim, SplitMix64& rng) {
    if (out_dim == 0 || out_dim > 4) {
        throw ContractError("fixture generation supports 1..4 output dimensions");
    }
    Json out;
    out["out_dim"] = out_dim;
    Json atoms = Json::array();
    for (std::size_t i = 0; i < space.atom_count(); ++i) {
        QVector v(out_dim, Rational(0));
        if (space.probs()[i] != 0) {
            for (auto& entry : v) {
                entry = small_nonzero_rational(rng, 5, 3);
            }
        }
        atoms.push_back(vector_to_json(v));
    }
    out["ground_truth_m"] = std::move(atoms);
    return out;
}

}  // namespace cforge

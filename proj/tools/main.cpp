// cocycle-forge: exact-rational toolbox for symmetric two-cocycles on
// rational cone domains and the partition-entropy machinery built on them.
//
// Subcommands: validate-cocycle, solve, oracle-compare,
// entropy {eval, additivity, recover-m, dependence},
// gen {domain, cocycle, space, delta-fixture}.
//
// Exit codes: 0 all checked properties hold; 1 a mathematical property
// failed (the report carries the witness); 2 malformed input or broken
// precondition.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cforge/coboundary.hpp"
#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
#include "cforge/entropy.hpp"
#include "cforge/errors.hpp"
#include "cforge/io.hpp"
#include "cforge/report.hpp"
#include "cforge/rng.hpp"

namespace {

using namespace cforge;

struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    std::uint64_t max_denom = 60;
    std::string format = "text";
    std::string out;
};

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--seed", cfg.seed, "Seed for all pseudorandomness")
        ->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Sample budget per checked law")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-denom", cfg.max_denom, "Largest denominator for sampled rationals")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

// Inline JSON (starting with '[' or '{') or a path to a JSON file.
Json parse_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) {
        try {
            return Json::parse(arg);
        } catch (const Json::exception& e) {
            throw ContractError(std::string("invalid inline JSON: ") + e.what());
        }
    }
    return read_json_file(arg);
}

std::string partition_text(const Partition& p) {
    std::string out = "{";
    bool first_block = true;
    for (const auto& block : p.block_indices()) {
        if (!first_block) {
            out += ", ";
        }
        first_block = false;
        out += "{";
        for (std::size_t i = 0; i < block.size(); ++i) {
            out += (i == 0 ? "" : ",") + std::to_string(block[i]);
        }
        out += "}";
    }
    return out + "}";
}

// Prints the report and converts it to the process exit code.
int emit(Report report, const RunConfig& cfg, long long elapsed_ms,
         const std::string& report_out = "") {
    report.elapsed_ms = elapsed_ms;
    if (cfg.format == "json") {
        std::cout << report_to_json(report).dump(2) << '\n';
    } else {
        std::cout << report.to_text();
    }
    if (!report_out.empty()) {
        write_json_file(report_out, report_to_json(report));
    }
    return report.pass() ? 0 : 1;
}

long long ms_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

int run_validate(const std::string& domain_path, const std::string& cocycle_path,
                 const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const ConeDomain domain = domain_from_json(read_json_file(domain_path));
    const CocyclePtr f = cocycle_from_json(read_json_file(cocycle_path));
    Report report;
    report.command = "validate-cocycle";
    for (const auto& part : {check_cocycle2(f, domain, cfg.samples, cfg.seed, cfg.max_denom),
                             check_offset_laws(f, domain, 4, cfg.samples, cfg.seed,
                                               cfg.max_denom)}) {
        for (const auto& r : part.results) {
            report.results.push_back(r);
        }
    }
    return emit(std::move(report), cfg, ms_since(start), cfg.out);
}

int run_solve(const std::string& domain_path, const std::string& cocycle_path,
              const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const ConeDomain domain = domain_from_json(read_json_file(domain_path));
    const CocyclePtr f = cocycle_from_json(read_json_file(cocycle_path));
    if (cfg.out.empty()) {
        throw ContractError("solve needs --out for the solution file");
    }
    SolveOptions options;
    options.validate_samples = cfg.samples;
    options.seed = cfg.seed;
    options.max_denominator = cfg.max_denom;
    Report report;
    report.command = "solve";
    try {
        const ExtensionTower tower = solve_coboundary(domain, f, options);
        const Report verified =
            verify_coboundary(tower, 4, cfg.samples, cfg.seed, cfg.max_denom);
        for (const auto& r : verified.results) {
            report.results.push_back(r);
        }
        write_json_file(cfg.out, tower_to_json(tower));
    } catch (const CocycleRejected& rejected) {
        for (const auto& r : rejected.report.results) {
            report.results.push_back(r);
        }
    }
    return emit(std::move(report), cfg, ms_since(start));
}

int run_oracle_compare(const std::string& domain_path, const std::string& cocycle_path,
                       const std::string& tower_path, std::uint64_t q, const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const ConeDomain domain = domain_from_json(read_json_file(domain_path));
    const CocyclePtr f = cocycle_from_json(read_json_file(cocycle_path));
    Report report;
    report.command = "oracle-compare";
    const GridOracle oracle = grid_oracle(domain, *f, BigInt(q));
    report.add("grid system is consistent", oracle.consistent, oracle.witness);
    if (oracle.consistent) {
        const ExtensionTower tower =
            tower_from_json(domain, f, read_json_file(tower_path));
        std::map<QVector, QVector> constructed;
        for (const auto& [point, _] : oracle.values) {
            constructed[point] = tower.eval_h(point);
        }
        const auto pairs = grid_pairs(oracle.values);
        bool ok = gauge_compare(oracle.values, constructed, pairs);
        std::string witness;
        if (!ok) {
            for (const auto& [a, b] : pairs) {
                const auto d = [&](const QVector& x) {
                    return sub(oracle.values.at(x), constructed.at(x));
                };
                if (d(add(a, b)) != add(d(a), d(b))) {
                    witness = "difference not additive at a = " + to_string(a) +
                              ", b = " + to_string(b);
                    break;
                }
            }
        }
        report.add("potentials agree modulo additive gauge", ok, witness);
    }
    return emit(std::move(report), cfg, ms_since(start), cfg.out);
}

int run_entropy_eval(const std::string& space_path, const std::string& m_path,
                     const std::string& partition_arg, const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const FiniteSpace space = space_from_json(read_json_file(space_path));
    const AtomSetFunction m = m_from_json(space, read_json_file(m_path));
    const Partition part =
        partition_from_json(space.atom_count(), parse_json_arg(partition_arg));
    Report report;
    report.command = "entropy eval";
    report.add("L_m value", true, to_string(eval_Lm(space, m, part)));
    report.add("entropy in log-prime coordinates", true, to_string(shannon_H(space, part)));
    return emit(std::move(report), cfg, ms_since(start), cfg.out);
}

int run_entropy_additivity(const std::string& space_path, const std::string& m_path,
                           const std::string& part_a, const std::string& part_b,
                           const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const FiniteSpace space = space_from_json(read_json_file(space_path));
    const AtomSetFunction m = m_from_json(space, read_json_file(m_path));
    const Partition a = partition_from_json(space.atom_count(), parse_json_arg(part_a));
    const Partition b = partition_from_json(space.atom_count(), parse_json_arg(part_b));
    Report report = check_additivity(space, m, a, b);
    report.command = "entropy additivity";
    return emit(std::move(report), cfg, ms_since(start), cfg.out);
}

int run_entropy_recover(const std::string& space_path, const std::string& delta_path,
                        const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const FiniteSpace space = space_from_json(read_json_file(space_path));
    const auto delta = delta_from_json(space, read_json_file(delta_path));
    Report report;
    report.command = "entropy recover-m";
    RecoverOptions options;
    options.seed = cfg.seed;
    options.samples = cfg.samples;
    try {
        const RecoverResult result = recover_m(space, *delta, options);
        report.add("difference function admits an additive set function", true,
                   "recovered values on " + std::to_string(result.set_values.size()) +
                       " subsets");
        if (!cfg.out.empty()) {
            Json out;
            out["out_dim"] = result.out_dim;
            Json values = Json::array();
            for (const auto& v : result.set_values) {
                values.push_back(vector_to_json(v));
            }
            out["set_values"] = std::move(values);
            write_json_file(cfg.out, out);
        }
    } catch (const RecoverFailure& failure) {
        report.add("difference function admits an additive set function", false,
                   failure.what());
    }
    return emit(std::move(report), cfg, ms_since(start));
}

int run_entropy_dependence(const std::string& space_path, const std::string& m_path,
                        const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const FiniteSpace space = space_from_json(read_json_file(space_path));
    const AtomSetFunction m = m_from_json(space, read_json_file(m_path));
    const auto multiple = is_measure_multiple(space, m);
    const auto witness = atom_measure_dependence_witness(space, m);
    Report report;
    report.command = "entropy dependence";
    if (multiple.has_value()) {
        report.add("L_m depends only on block measures (m is a measure multiple)",
                   !witness.has_value(),
                   witness ? "unexpected dependence witness " +
                                 partition_text(witness->first) + " vs " +
                                 partition_text(witness->second)
                           : "");
    } else {
        report.add("L_m separates partitions with equal block measures "
                   "(m is not a measure multiple)",
                   witness.has_value(),
                   witness ? partition_text(witness->first) + " and " +
                                 partition_text(witness->second) +
                                 " have equal block measures, L_m values " +
                                 to_string(eval_Lm(space, m, witness->first)) + " vs " +
                                 to_string(eval_Lm(space, m, witness->second))
                           : "expected a dependence witness but found none");
    }
    return emit(std::move(report), cfg, ms_since(start), cfg.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver and verifier for symmetric two-cocycles on rational cone "
                 "domains, with partition-entropy pipelines"};
    app.require_subcommand(1);

    RunConfig cfg;

    // validate-cocycle
    std::string domain_path;
    std::string cocycle_path;
    auto* validate = app.add_subcommand(
        "validate-cocycle", "Check symmetry, the cocycle law, and the offset laws");
    validate->add_option("--domain", domain_path, "Domain file")->required();
    validate->add_option("--cocycle", cocycle_path, "Cocycle file")->required();
    validate->add_option("--out", cfg.out, "Write the report here as JSON");
    add_common(validate, cfg);

    // solve
    auto* solve = app.add_subcommand(
        "solve", "Construct a potential h with f(a,b) = h(a+b) - h(a) - h(b)");
    solve->add_option("--domain", domain_path, "Domain file")->required();
    solve->add_option("--cocycle", cocycle_path, "Cocycle file")->required();
    solve->add_option("--out", cfg.out, "Solution output file")->required();
    add_common(solve, cfg);

    // oracle-compare
    std::string tower_path;
    std::uint64_t grid_q = 4;
    auto* oracle = app.add_subcommand(
        "oracle-compare",
        "Solve the grid system independently and compare against a stored solution");
    oracle->add_option("--domain", domain_path, "Domain file")->required();
    oracle->add_option("--cocycle", cocycle_path, "Cocycle file")->required();
    oracle->add_option("--tower", tower_path, "Solution file from `solve`")->required();
    oracle->add_option("--q", grid_q, "Grid denominator")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    oracle->add_option("--out", cfg.out, "Write the report here as JSON");
    add_common(oracle, cfg);

    // entropy
    auto* entropy = app.add_subcommand("entropy", "Partition-entropy pipelines");
    entropy->require_subcommand(1);
    std::string space_path;
    std::string m_path;
    std::string delta_path;
    std::string partition_arg;
    std::string partition_b_arg;

    auto* ent_eval = entropy->add_subcommand("eval", "Evaluate L_m on a partition");
    ent_eval->add_option("--space", space_path, "Probability space file")->required();
    ent_eval->add_option("--m", m_path, "Set-function file")->required();
    ent_eval->add_option("--partition", partition_arg, "Partition (inline JSON or file)")
        ->required();
    ent_eval->add_option("--out", cfg.out, "Write the report here as JSON");
    add_common(ent_eval, cfg);

    auto* ent_add = entropy->add_subcommand(
        "additivity", "Check L_m(join) = L_m(A) + L_m(B) on independent partitions");
    ent_add->add_option("--space", space_path, "Probability space file")->required();
    ent_add->add_option("--m", m_path, "Set-function file")->required();
    ent_add->add_option("--partition-a", partition_arg, "First partition")->required();
    ent_add->add_option("--partition-b", partition_b_arg, "Second partition")->required();
    ent_add->add_option("--out", cfg.out, "Write the report here as JSON");
    add_common(ent_add, cfg);

    auto* ent_rec = entropy->add_subcommand(
        "recover-m", "Recover an additive set function from a difference function");
    ent_rec->add_option("--space", space_path, "Probability space file")->required();
    ent_rec->add_option("--delta", delta_path, "Difference-function file")->required();
    ent_rec->add_option("--out", cfg.out, "Write the recovered values here as JSON");
    add_common(ent_rec, cfg);

    auto* ent_rem = entropy->add_subcommand(
        "dependence", "Decide whether L_m depends only on block measures");
    ent_rem->add_option("--space", space_path, "Probability space file")->required();
    ent_rem->add_option("--m", m_path, "Set-function file")->required();
    ent_rem->add_option("--out", cfg.out, "Write the report here as JSON");
    add_common(ent_rem, cfg);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate seeded pseudorandom instances");
    gen->require_subcommand(1);
    std::size_t gen_dims = 2;
    std::size_t gen_generators = 3;
    std::size_t gen_out_dim = 1;
    std::size_t gen_atoms = 4;
    std::uint64_t gen_denom = 12;
    std::string gen_family = "bilinear";

    auto* gen_dom = gen->add_subcommand("domain", "Generate a pointed cone domain");
    gen_dom->add_option("--dims", gen_dims, "Ambient dimension")->capture_default_str();
    gen_dom->add_option("--generators", gen_generators, "Number of generators")
        ->capture_default_str();
    gen_dom->add_option("--out", cfg.out, "Output file")->required();
    add_common(gen_dom, cfg);

    auto* gen_coc = gen->add_subcommand("cocycle", "Generate a valid cocycle");
    gen_coc->add_option("--family", gen_family, "Cocycle family")
        ->check(CLI::IsMember({"bilinear", "potential", "shift", "sum"}))
        ->capture_default_str();
    gen_coc->add_option("--dims", gen_dims, "Input dimension")->capture_default_str();
    gen_coc->add_option("--out-dim", gen_out_dim, "Output dimension")->capture_default_str();
    gen_coc->add_option("--out", cfg.out, "Output file")->required();
    add_common(gen_coc, cfg);

    auto* gen_spc = gen->add_subcommand("space", "Generate a finite probability space");
    gen_spc->add_option("--atoms", gen_atoms, "Number of atoms")->capture_default_str();
    gen_spc->add_option("--denom", gen_denom, "Common denominator of the atom masses")
        ->capture_default_str();
    gen_spc->add_option("--out", cfg.out, "Output file")->required();
    add_common(gen_spc, cfg);

    auto* gen_dlt = gen->add_subcommand(
        "delta-fixture", "Generate a difference function with a known additive answer");
    gen_dlt->add_option("--space", space_path, "Probability space file")->required();
    gen_dlt->add_option("--out-dim", gen_out_dim, "Output dimension")->capture_default_str();
    gen_dlt->add_option("--out", cfg.out, "Output file")->required();
    add_common(gen_dlt, cfg);

    try {
        app.parse(argc, argv);

        if (*validate) {
            return run_validate(domain_path, cocycle_path, cfg);
        }
        if (*solve) {
            return run_solve(domain_path, cocycle_path, cfg);
        }
        if (*oracle) {
            return run_oracle_compare(domain_path, cocycle_path, tower_path, grid_q, cfg);
        }
        if (*ent_eval) {
            return run_entropy_eval(space_path, m_path, partition_arg, cfg);
        }
        if (*ent_add) {
            return run_entropy_additivity(space_path, m_path, partition_arg,
                                          partition_b_arg, cfg);
        }
        if (*ent_rec) {
            return run_entropy_recover(space_path, delta_path, cfg);
        }
        if (*ent_rem) {
            return run_entropy_dependence(space_path, m_path, cfg);
        }
        SplitMix64 rng(cfg.seed);
        if (*gen_dom) {
            write_json_file(cfg.out, gen_domain(gen_dims, gen_generators, rng));
        } else if (*gen_coc) {
            write_json_file(cfg.out, gen_cocycle(gen_family, gen_dims, gen_out_dim, rng));
        } else if (*gen_spc) {
            write_json_file(cfg.out, gen_space(gen_atoms, gen_denom, rng));
        } else if (*gen_dlt) {
            const FiniteSpace space = space_from_json(read_json_file(space_path));
            write_json_file(cfg.out, gen_delta_fixture(space, gen_out_dim, rng));
        }
        std::cout << "wrote " << cfg.out << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ContractError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const DomainViolation& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "cforge/coboundary.hpp"
#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
#include "cforge/entropy.hpp"
#include "cforge/linalg.hpp"
#include "cforge/rational.hpp"
#include "cforge/report.hpp"
#include "cforge/rng.hpp"

namespace cforge {

using Json = nlohmann::json;

// File round-trip. Unreadable files and malformed JSON raise ContractError.
// Writing is deterministic: sorted keys, two-space indentation, trailing
// newline.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& value);

// Rationals travel as strings "p" or "p/q" (plain JSON integers are also
// accepted on input); vectors as arrays of rationals; matrices as arrays of
// rows.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& value);
Json vector_to_json(const QVector& v);
QVector vector_from_json(const Json& value);
Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& value);

// Domain files: {"dim": d, "generators": [vector, ...], "cap": vector}.
Json domain_to_json(const ConeDomain& domain);
ConeDomain domain_from_json(const Json& value);

// Cocycle files are discriminated on "family":
//   {"family": "bilinear", "dim": d, "forms": [matrix per output coord]}
//   {"family": "potential", "dim": d, "out_dim": k, "terms":
//       [[{"coeff": rational, "exponents": [e_1..e_d]}, ...] per coord]}
//   {"family": "shift", "offset": vector, "base": cocycle}
//   {"family": "sum", "terms": [{"coeff": rational, "cocycle": cocycle}, ...]}
CocyclePtr cocycle_from_json(const Json& value);

// Space files: {"probs": [rational, ...]}.
Json space_to_json(const FiniteSpace& space);
FiniteSpace space_from_json(const Json& value);

// Set-function files: {"out_dim": k, "atoms": [flat row-major k x B matrix
// per atom]} with B the size of the space's prime basis.
AtomSetFunction m_from_json(const FiniteSpace& space, const Json& value);

// Partitions: [[atom index, ...], ...].
Partition partition_from_json(std::size_t atom_count, const Json& value);

// Difference-function files: {"out_dim": k} plus exactly one of
//   "ground_truth_m": [vector per atom]   (fixture with known answer)
//   "table": [{"v": [indices], "w": [indices], "value": vector}, ...]
//   "zero": true
std::unique_ptr<DeltaEvaluator> delta_from_json(const FiniteSpace& space, const Json& value);

// Tower files: {"dim": d, "z": vector, "steps": [{"generator": vector,
// "case": "A"|"B", "direction": vector, "anchor_scale": rational,
// "anchor_value": vector, "witness_r": vector, "alpha0": rational}, ...]}.
// Loading trusts the stored data (offset included), so a tampered file
// yields a tower whose failure the oracle comparison can observe.
Json tower_to_json(const ExtensionTower& tower);
ExtensionTower tower_from_json(const ConeDomain& domain, CocyclePtr f, const Json& value);

// Reports: {"command", "elapsed_ms", "pass", "results": [{"property",
// "pass", "witness"}]}. Round-trips apart from timing.
Json report_to_json(const Report& report);
Report report_from_json(const Json& value);

// Seeded instance generators; identical seeds yield identical JSON (and so
// identical bytes through write_json_file).
Json gen_domain(std::size_t dims, std::size_t n_generators, SplitMix64& rng);
Json gen_cocycle(const std::string& family, std::size_t dims, std::size_t out_dim,
                 SplitMix64& rng);
Json gen_space(std::size_t atoms, std::uint64_t denom, SplitMix64& rng);
Json gen_delta_fixture(const FiniteSpace& space, std::size_t out_dim, SplitMix64& rng);

}  // namespace cforge

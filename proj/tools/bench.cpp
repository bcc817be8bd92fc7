// Benchmark of the OpenMP-parallel verification kernels against the serial
// reference path. Both paths must return identical findings; the benchmark
// fails (exit 1) if they ever diverge, so it doubles as a stress check.

#include <chrono>
#include <cstddef>
#include <iostream>
#include <string>

#include "cforge/cocycle.hpp"
#include "cforge/conedomain.hpp"
#include "cforge/entropy.hpp"
#include "cforge/linalg.hpp"
#include "cforge/parallel.hpp"

using namespace cforge;

namespace {

template <typename F>
long long time_ms(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

void print_row(const std::string& name, long long serial_ms, long long parallel_ms) {
    const double speedup =
        parallel_ms > 0 ? static_cast<double>(serial_ms) / static_cast<double>(parallel_ms)
                        : 0.0;
    std::cout << name << ": serial " << serial_ms << " ms, parallel " << parallel_ms
              << " ms, speedup x" << speedup << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t samples = argc > 1 ? std::stoul(argv[1]) : 4000;
    std::cout << "threads available: " << max_threads() << "\n";

    // Kernel 1: sampled symmetry + cocycle-law verification in dimension 3.
    const ConeDomain domain(
        3,
        {QVector{Rational(1), Rational(0), Rational(0)},
         QVector{Rational(0), Rational(1), Rational(0)},
         QVector{Rational(0), Rational(0), Rational(1)},
         QVector{Rational(1), Rational(1), Rational(1)}},
        QVector{Rational(1), Rational(1), Rational(1)});
    QMatrix form1(3, 3);
    QMatrix form2(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            form1.at(i, j) = Rational(BigInt(1 + ((i + j) % 3)));
            form2.at(i, j) = Rational(BigInt(2)) * Rational(BigInt(i * j + 1));
        }
    }
    const CocyclePtr f = std::make_shared<BilinearCocycle>(
        3, std::vector<QMatrix>{form1, form2});

    Report law_serial;
    Report law_parallel;
    const long long t1s = time_ms(
        [&] { law_serial = check_cocycle2(f, domain, samples, 7, 60, ExecMode::serial); });
    const long long t1p = time_ms(
        [&] { law_parallel = check_cocycle2(f, domain, samples, 7, 60, ExecMode::parallel); });
    print_row("cocycle-law check (" + std::to_string(samples) + " samples)", t1s, t1p);
    if (!law_serial.same_findings(law_parallel)) {
        std::cout << "MISMATCH: serial and parallel law checks disagree\n";
        return 1;
    }

    // Kernel 2: exhaustive partition-dependence search on a uniform 9-atom
    // space with m a measure multiple, so the full enumeration runs.
    const std::size_t atoms = 9;
    std::vector<Rational> probs(atoms, Rational(1) / Rational(BigInt(atoms)));
    const FiniteSpace space(std::move(probs));
    std::vector<QMatrix> matrices;
    for (std::size_t i = 0; i < atoms; ++i) {
        QMatrix m(1, space.prime_basis().size());
        for (std::size_t c = 0; c < m.cols; ++c) {
            m.at(0, c) = Rational(3) * space.probs()[i];
        }
        matrices.push_back(std::move(m));
    }
    const AtomSetFunction m(space, 1, std::move(matrices));

    std::optional<std::pair<Partition, Partition>> dep_serial;
    std::optional<std::pair<Partition, Partition>> dep_parallel;
    const long long t2s = time_ms(
        [&] { dep_serial = atom_measure_dependence_witness(space, m, ExecMode::serial); });
    const long long t2p = time_ms(
        [&] { dep_parallel = atom_measure_dependence_witness(space, m, ExecMode::parallel); });
    print_row("dependence search (9 atoms)", t2s, t2p);
    const bool same = dep_serial.has_value() == dep_parallel.has_value() &&
                      (!dep_serial || (dep_serial->first == dep_parallel->first &&
                                       dep_serial->second == dep_parallel->second));
    if (!same) {
        std::cout << "MISMATCH: serial and parallel dependence searches disagree\n";
        return 1;
    }

    std::cout << "serial and parallel findings agree\n";
    return 0;
}

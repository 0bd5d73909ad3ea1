#pragma once

#include <optional>
#include <vector>

#include "symport/ports_tarc.hpp"

namespace symport {

/// Exhaustive port-placement search: every N_xi-combination of the
/// candidate generator sites, scored by RMS TARC over species and the
/// frequency grid.
struct ScanSpec {
    const EdgeBasisSet* basis = nullptr;
    const SymmetryAdapter* adapter = nullptr;
    std::vector<PortSite> candidates;
    int n_xi = 1;
    FrequencyGrid grid;
    double z0_line = 50.0;
    double resistivity = 0.0;
    std::size_t combo_cap = 100000;
    int threads = 0;
    AssemblyOptions assembly;
};

struct ScanEntry {
    std::vector<int> labels;  // candidate labels of the combination, ascending
    double t_rms = 1.0;
    int n_states = 0;          // realizable species counted in the RMS
    bool reduced_states = false;
    int n_ports = 0;
    // indexed [frequency][species]; nullopt where a species is unrealizable
    std::vector<std::vector<std::optional<double>>> t;
    std::vector<std::vector<std::optional<VectorXcd>>> kappa;  // generator amplitudes used
};

struct ScanResult {
    std::vector<Species> species;
    std::vector<std::string> species_labels;
    std::vector<double> ka;
    std::vector<ScanEntry> entries;  // ranked: ascending t_rms, ties by labels

    const ScanEntry& best() const;
};

/// Runs the exhaustive scan. Throws CombinatorialBudgetExceeded when the
/// number of combinations passes spec.combo_cap. Rankings are independent
/// of the worker count.
ScanResult scan(const ScanSpec& spec);

/// Convenience wrappers matching the two search modes.
ScanResult scan_single(const ScanSpec& spec);        // requires n_xi == 1
ScanResult scan_combinations(const ScanSpec& spec);  // requires n_xi > 1

/// Best single position per frequency sample (n_xi == 1 candidates).
struct PerFrequencyBest {
    std::vector<double> ka;
    std::vector<int> best_label;
    std::vector<double> best_t_rms;
};

PerFrequencyBest per_frequency_best(const ScanSpec& spec);
PerFrequencyBest per_frequency_best(const ScanResult& result);

/// Scores one externally chosen port layout under the same fitness
/// (optimal generator amplitudes per species). The layout is the single
/// combination formed by all given positions.
ScanEntry reference_comparison(const ScanSpec& spec, const std::vector<PortSite>& positions);

}  // namespace symport

#include "symport/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "symport/threading.hpp"

namespace symport {

namespace {

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap)
{
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
        if (r > 4 * cap) return r;  // early out, avoids overflow at sane caps
    }
    return r;
}

std::vector<std::vector<int>> combinations(int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

struct ComboScratch {
    std::vector<int> cols;       // master port columns of this combination
    std::vector<int> col_slot;   // generator slot (within the combination) per column
};

void validate_spec(const ScanSpec& spec)
{
    if (spec.basis == nullptr || spec.adapter == nullptr) throw ConfigError("scan: missing basis/adapter");
    if (spec.candidates.empty()) throw ConfigError("scan: no candidate positions");
    if (spec.n_xi < 1 || spec.n_xi > static_cast<int>(spec.candidates.size()))
        throw ConfigError("scan: n_xi out of range");
    if (spec.grid.ka.empty()) throw ConfigError("scan: empty frequency grid");
}

}  // namespace

const ScanEntry& ScanResult::best() const
{
    if (entries.empty()) throw EmptySet("scan produced no entries");
    return entries.front();
}

ScanResult scan(const ScanSpec& spec)
{
    validate_spec(spec);
    const SymmetryAdapter& adapter = *spec.adapter;
    const std::size_t n_cand = spec.candidates.size();

    const std::size_t n_combos_est =
        binomial_capped(n_cand, static_cast<std::size_t>(spec.n_xi), spec.combo_cap);
    if (n_combos_est > spec.combo_cap)
        throw CombinatorialBudgetExceeded("scan would evaluate " + std::to_string(n_combos_est) +
                                          " combinations (cap " + std::to_string(spec.combo_cap) + ")");

    // one master configuration holding every candidate orbit
    PortConfiguration master = build_port_configuration(*spec.basis, adapter, spec.candidates, spec.z0_line);

    const auto combos = combinations(static_cast<int>(n_cand), spec.n_xi);
    const std::vector<Species> species = adapter.group().species();
    const std::size_t n_sp = species.size();
    const std::size_t n_f = spec.grid.ka.size();

    std::vector<ComboScratch> scratch(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        for (std::size_t s = 0; s < combos[c].size(); ++s) {
            const int site = combos[c][s];
            for (int col = 0; col < master.n_ports(); ++col) {
                if (master.owner_site[static_cast<std::size_t>(col)] == site) {
                    scratch[c].cols.push_back(col);
                    scratch[c].col_slot.push_back(static_cast<int>(s));
                }
            }
        }
    }

    ScanResult result;
    result.species = species;
    for (const Species& s : species) result.species_labels.push_back(adapter.group().species_label(s));
    result.ka = spec.grid.ka;
    result.entries.resize(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        ScanEntry& e = result.entries[c];
        for (int site : combos[c]) e.labels.push_back(spec.candidates[static_cast<std::size_t>(site)].label);
        std::sort(e.labels.begin(), e.labels.end());
        e.n_ports = static_cast<int>(scratch[c].cols.size());
        e.t.assign(n_f, std::vector<std::optional<double>>(n_sp));
        e.kappa.assign(n_f, std::vector<std::optional<VectorXcd>>(n_sp));
    }

    AssemblyOptions aopt = spec.assembly;
    aopt.threads = spec.threads;
    OperatorAssembler assembler(*spec.basis, aopt);
    OperatorMatrix rrho;
    if (spec.resistivity > 0.0) rrho = assembler.loss(spec.resistivity);

    for (std::size_t f = 0; f < n_f; ++f) {
        const double ka = spec.grid.ka[f];
        OperatorMatrix r0 = assembler.radiation(ka);
        OperatorMatrix x0 = assembler.reactance(ka);
        MatrixXcd z = r0.m + cplx(0.0, 1.0) * x0.m;
        if (spec.resistivity > 0.0) z += rrho.m;
        ImpedanceFactorization zfac(z);
        TarcContext ctx(master, zfac, r0);
        const MatrixXcd& w = ctx.solved_columns();
        const MatrixXcd& kmat = ctx.wave_matrix();
        const double z0 = master.z0_line;

        parallel_for(
            combos.size(),
            [&](std::size_t c) {
                const ComboScratch& sc = scratch[c];
                const std::vector<int>& sites = combos[c];
                const int n_cols = static_cast<int>(sc.cols.size());

                MatrixXcd w_sel(w.rows(), n_cols);
                for (int i = 0; i < n_cols; ++i) w_sel.col(i) = w.col(sc.cols[static_cast<std::size_t>(i)]);
                MatrixXcd k_sel(n_cols, n_cols);
                for (int i = 0; i < n_cols; ++i)
                    for (int j = 0; j < n_cols; ++j)
                        k_sel(i, j) = kmat(sc.cols[static_cast<std::size_t>(i)], sc.cols[static_cast<std::size_t>(j)]);

                for (std::size_t si = 0; si < n_sp; ++si) {
                    const MatrixXcd& p_master = master.port_indexing[si];
                    const auto& active = master.site_active[si];

                    std::vector<int> act_slots;
                    for (std::size_t s = 0; s < sites.size(); ++s)
                        if (active[static_cast<std::size_t>(sites[s])]) act_slots.push_back(static_cast<int>(s));
                    if (act_slots.empty()) continue;

                    MatrixXcd p_sub(n_cols, static_cast<Eigen::Index>(act_slots.size()));
                    for (std::size_t a = 0; a < act_slots.size(); ++a) {
                        const int site = sites[static_cast<std::size_t>(act_slots[a])];
                        for (int i = 0; i < n_cols; ++i)
                            p_sub(i, static_cast<Eigen::Index>(a)) =
                                p_master(sc.cols[static_cast<std::size_t>(i)], site);
                    }

                    const MatrixXcd u = w_sel * p_sub;
                    const MatrixXcd a_form = 4.0 * z0 * (u.adjoint() * r0.m * u);
                    const MatrixXcd kp = k_sel * p_sub;
                    const MatrixXcd b_form = kp.adjoint() * kp;

                    KappaSolution sol = kappa_from_forms(a_form, b_form);
                    VectorXcd kap_full = VectorXcd::Zero(static_cast<Eigen::Index>(sites.size()));
                    for (std::size_t a = 0; a < act_slots.size(); ++a)
                        kap_full(act_slots[a]) = sol.kappa(static_cast<Eigen::Index>(a));

                    result.entries[c].t[f][si] = sol.t_bound;
                    result.entries[c].kappa[f][si] = std::move(kap_full);
                }
            },
            spec.threads);
    }

    // A species a combination cannot reach is a dead channel and scores
    // t = 1, so configurations with fewer reachable states never win on a
    // smaller denominator alone. The reduced state count stays reported.
    for (ScanEntry& e : result.entries) {
        double acc = 0.0;
        std::size_t states = 0;
        for (std::size_t si = 0; si < n_sp; ++si)
            if (e.t.front()[si].has_value()) ++states;
        for (std::size_t f = 0; f < n_f; ++f)
            for (std::size_t si = 0; si < n_sp; ++si)
                acc += e.t[f][si].has_value() ? *e.t[f][si] * *e.t[f][si] : 1.0;
        e.n_states = static_cast<int>(states);
        e.reduced_states = states < n_sp;
        e.t_rms = std::sqrt(acc / static_cast<double>(n_f * n_sp));
    }

    std::stable_sort(result.entries.begin(), result.entries.end(), [](const ScanEntry& a, const ScanEntry& b) {
        if (a.t_rms != b.t_rms) return a.t_rms < b.t_rms;
        return a.labels < b.labels;
    });
    return result;
}

ScanResult scan_single(const ScanSpec& spec)
{
    if (spec.n_xi != 1) throw ConfigError("scan_single requires n_xi == 1");
    return scan(spec);
}

ScanResult scan_combinations(const ScanSpec& spec)
{
    if (spec.n_xi < 2) throw ConfigError("scan_combinations requires n_xi > 1");
    return scan(spec);
}

PerFrequencyBest per_frequency_best(const ScanSpec& spec)
{
    ScanSpec s = spec;
    s.n_xi = 1;
    if (s.grid.ka.size() < 1) throw ConfigError("per_frequency_best: empty grid");
    return per_frequency_best(scan(s));
}

PerFrequencyBest per_frequency_best(const ScanResult& r)
{
    PerFrequencyBest out;
    out.ka = r.ka;
    for (std::size_t f = 0; f < r.ka.size(); ++f) {
        double best = 2.0;
        int best_label = 0;
        for (const ScanEntry& e : r.entries) {
            double acc = 0.0;
            for (const auto& tv : e.t[f]) acc += tv.has_value() ? *tv * *tv : 1.0;
            const double trms = std::sqrt(acc / static_cast<double>(e.t[f].size()));
            if (trms < best || (trms == best && e.labels.front() < best_label)) {
                best = trms;
                best_label = e.labels.front();
            }
        }
        out.best_label.push_back(best_label);
        out.best_t_rms.push_back(best);
    }
    return out;
}

ScanEntry reference_comparison(const ScanSpec& spec, const std::vector<PortSite>& positions)
{
    if (positions.empty()) throw ConfigError("reference comparison needs at least one position");
    ScanSpec s = spec;
    s.candidates = positions;
    s.n_xi = static_cast<int>(positions.size());
    ScanResult r = scan(s);
    return r.best();
}

}  // namespace symport

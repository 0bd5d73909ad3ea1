#include "symport/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symport/threading.hpp"

namespace symport {

namespace fs = std::filesystem;

namespace {

std::string join_labels(const std::vector<int>& labels)
{
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += "|";
        s += std::to_string(labels[i]);
    }
    return s;
}

std::string out_path(const std::string& dir, const std::string& name)
{
    return (fs::path(dir) / name).string();
}

}  // namespace

PortSite Scene::site_of_label(int label) const
{
    for (const PortSite& s : candidates)
        if (s.label == label) return s;
    throw InvalidPosition("position " + std::to_string(label) + " is not among the candidates");
}

FrequencyGrid Scene::grid() const
{
    FrequencyGrid g;
    g.ka = cfg.ka;
    g.radius = mesh.circumsphere_radius();
    return g;
}

ScanSpec Scene::scan_spec() const
{
    ScanSpec spec;
    spec.basis = &basis;
    spec.adapter = adapter.get();
    spec.candidates = candidates;
    spec.n_xi = cfg.n_xi;
    spec.grid = grid();
    spec.z0_line = cfg.z0_line;
    spec.resistivity = cfg.resistivity;
    spec.combo_cap = cfg.combo_cap;
    spec.threads = cfg.threads;
    return spec;
}

std::unique_ptr<Scene> load_scene(const ScenarioConfig& cfg)
{
    cfg.validate();
    auto scene = std::make_unique<Scene>();
    scene->cfg = cfg;

    MeshFormat fmt = MeshFormat::auto_detect;
    if (cfg.mesh_format == "off") fmt = MeshFormat::off;
    else if (cfg.mesh_format == "msh") fmt = MeshFormat::msh;
    else if (cfg.mesh_format != "auto")
        throw ConfigError("unknown mesh format '" + cfg.mesh_format + "' (off | msh | auto)");

    scene->mesh = load_mesh(cfg.mesh_path, fmt);
    scene->basis = build_edge_basis(scene->mesh);
    scene->group = PointGroup::build(cfg.group_name);
    const double tol = cfg.vertex_tol_rel * scene->mesh.characteristic_length();
    scene->maps = build_mapping_matrices(scene->basis, scene->group, tol);
    scene->adapter =
        std::make_unique<SymmetryAdapter>(scene->group, scene->maps,
                                          find_generator_cell(scene->basis, scene->group, scene->maps));

    if (!cfg.ports_file.empty()) {
        std::ifstream in(cfg.ports_file);
        if (!in) throw ConfigError("cannot open ports file '" + cfg.ports_file + "'");
        scene->ladder = read_ports_csv(in);
    } else {
        // no ladder file: generator-cell representatives, labels are 1-based
        // basis indices
        const GeneratorCell& cell = scene->adapter->generator();
        auto add = [&](int edge) {
            const EdgeBasis& e = scene->basis.edges[static_cast<std::size_t>(edge)];
            const Vector3d mid = 0.5 * (scene->mesh.vertices[static_cast<std::size_t>(e.v0)] +
                                        scene->mesh.vertices[static_cast<std::size_t>(e.v1)]);
            scene->ladder.push_back({edge + 1, mid});
        };
        for (int e : cell.interior) add(e);
        for (int e : cell.boundary) add(e);
        std::sort(scene->ladder.begin(), scene->ladder.end(),
                  [](const PortAnchor& a, const PortAnchor& b) { return a.label < b.label; });
    }

    std::vector<int> wanted = cfg.candidate_labels;
    if (wanted.empty())
        for (const PortAnchor& a : scene->ladder) wanted.push_back(a.label);
    for (int label : wanted) {
        auto it = std::find_if(scene->ladder.begin(), scene->ladder.end(),
                               [&](const PortAnchor& a) { return a.label == label; });
        if (it == scene->ladder.end())
            throw ConfigError("candidate position " + std::to_string(label) + " is not in the ladder");
        scene->candidates.push_back({label, resolve_port_edge(scene->basis, it->point)});
    }

    if (cfg.threads > 0) set_default_threads(cfg.threads);
    return scene;
}

void cmd_adapt(const Scene& scene)
{
    const ScenarioConfig& cfg = scene.cfg;
    ensure_directory(cfg.out_dir);
    const SymmetryAdapter& adapter = *scene.adapter;

    {
        CsvFile maps_csv(out_path(cfg.out_dir, "maps.csv"));
        maps_csv.header({"op", "row", "col", "sign"});
        for (std::size_t k = 0; k < scene.maps.size(); ++k) {
            const MappingMatrix& c = scene.maps[k];
            for (int n = 0; n < c.size(); ++n)
                maps_csv.cell(scene.group.op(static_cast<int>(k)).label)
                    .cell(c.perm[static_cast<std::size_t>(n)])
                    .cell(n)
                    .cell(c.sign[static_cast<std::size_t>(n)])
                    .end_row();
        }
    }
    {
        const GeneratorCell& cell = adapter.generator();
        CsvFile gen_csv(out_path(cfg.out_dir, "generator_cell.csv"));
        gen_csv.header({"basis", "class", "orbit"});
        for (int n = 0; n < adapter.n_unknowns(); ++n) {
            std::string cls = "replicated";
            if (std::binary_search(cell.interior.begin(), cell.interior.end(), n)) cls = "interior";
            else if (std::binary_search(cell.boundary.begin(), cell.boundary.end(), n)) cls = "boundary";
            gen_csv.cell(n).cell(cls).cell(cell.orbit_of[static_cast<std::size_t>(n)]).end_row();
        }
    }

    const int label = cfg.adapt_position > 0 ? cfg.adapt_position : scene.candidates.front().label;
    const PortSite site = scene.site_of_label(label);
    const GeneratorCell& cell = adapter.generator();
    const int rep = cell.orbits[static_cast<std::size_t>(cell.orbit_of[static_cast<std::size_t>(site.edge)])].front();

    VectorXcd v = VectorXcd::Zero(adapter.n_unknowns());
    v(rep) = scene.basis.edges[static_cast<std::size_t>(rep)].edge_length;

    CsvFile vec_csv(out_path(cfg.out_dir, "adapted_vectors.csv"));
    vec_csv.header({"position", "species", "component", "re", "im"});
    CsvFile rs_csv(out_path(cfg.out_dir, "realizable_species.csv"));
    rs_csv.header({"position", "species", "realizable"});
    for (const Species& s : scene.group.species()) {
        const SymmetryAdaptedExcitation adapted = adapter.adapt_vector(v, s);
        rs_csv.cell(label).cell(scene.group.species_label(s)).cell(adapted.collided ? 0 : 1).end_row();
        if (adapted.collided) continue;
        for (int n = 0; n < adapted.vector.size(); ++n)
            vec_csv.cell(label)
                .cell(scene.group.species_label(s))
                .cell(n)
                .cell(adapted.vector(n).real())
                .cell(adapted.vector(n).imag())
                .end_row();
    }
}

void cmd_modes(const Scene& scene)
{
    const ScenarioConfig& cfg = scene.cfg;
    ensure_directory(cfg.out_dir);
    if (cfg.ka.empty()) throw ConfigError("modes command needs a frequency");
    const auto& opnames = cfg.orthogonality_operators;
    if (std::find(opnames.begin(), opnames.end(), "R0") == opnames.end())
        throw ConfigError("modes command needs R0 in the operator set");

    const double ka = cfg.ka.front();
    AssemblyOptions aopt;
    aopt.threads = cfg.threads;
    OperatorAssembler assembler(scene.basis, aopt);
    const OperatorMatrix r0 = assembler.radiation(ka);
    const OperatorMatrix x0 = assembler.reactance(ka);
    const OperatorMatrix w = assembler.stored_energy(ka, cfg.w_delta);

    const AdaptedBasis adapted = scene.adapter->build_adapted_basis();
    ModesOptions mopt;
    mopt.max_modes = cfg.modes_max;
    const auto sets = characteristic_modes(r0, x0, &adapted, mopt);

    {
        CsvFile ev(out_path(cfg.out_dir, "modes_eigenvalues.csv"));
        ev.header({"species", "mode", "lambda", "pencil_residual"});
        for (const auto& set : sets) {
            const std::string name = scene.group.species_label(*set.species);
            for (Eigen::Index m = 0; m < set.eigenvalues.size(); ++m) {
                const VectorXcd cur = set.currents.col(m);
                const VectorXcd lhs = x0.m * cur;
                const double res = (lhs - set.eigenvalues(m) * (r0.m * cur)).norm() /
                                   std::max(lhs.norm(), 1e-300);
                ev.cell(name).cell(static_cast<int>(m)).cell(set.eigenvalues(m)).cell(res).end_row();
            }
        }
    }
    {
        CsvFile mc(out_path(cfg.out_dir, "modes_currents.csv"));
        mc.header({"species", "mode", "component", "re", "im"});
        for (const auto& set : sets) {
            const std::string name = scene.group.species_label(*set.species);
            for (Eigen::Index m = 0; m < set.eigenvalues.size(); ++m)
                for (Eigen::Index n = 0; n < set.currents.rows(); ++n)
                    mc.cell(name)
                        .cell(static_cast<int>(m))
                        .cell(static_cast<int>(n))
                        .cell(set.currents(n, m).real())
                        .cell(set.currents(n, m).imag())
                        .end_row();
        }
    }
    if (cfg.dump_operators) {
        auto dump = [&](const OperatorMatrix& op, const std::string& name) {
            std::ofstream os(out_path(cfg.out_dir, name), std::ios::binary);
            dump_operator(op, os);
        };
        OperatorMatrix z0 = r0;
        z0.role = OperatorRole::Z0;
        z0.m = r0.m + cplx(0.0, 1.0) * x0.m;
        dump(z0, "z0.op");
        dump(r0, "r0.op");
        dump(x0, "x0.op");
        dump(w, "w.op");
    }
    {
        CsvFile wc(out_path(cfg.out_dir, "modes_w_coupling.csv"));
        wc.header({"species_m", "mode_m", "species_n", "mode_n", "w_mn_abs", "normalized"});
        const double wnorm = w.m.norm();
        for (std::size_t a = 0; a < sets.size(); ++a) {
            for (std::size_t b = a; b < sets.size(); ++b) {
                for (Eigen::Index i = 0; i < sets[a].eigenvalues.size(); ++i) {
                    for (Eigen::Index j = 0; j < sets[b].eigenvalues.size(); ++j) {
                        if (a == b && j < i) continue;
                        const cplx wmn =
                            0.5 * (sets[a].currents.col(i).adjoint() * w.m * sets[b].currents.col(j)).value();
                        const double scale =
                            wnorm * sets[a].currents.col(i).norm() * sets[b].currents.col(j).norm();
                        wc.cell(scene.group.species_label(*sets[a].species))
                            .cell(static_cast<int>(i))
                            .cell(scene.group.species_label(*sets[b].species))
                            .cell(static_cast<int>(j))
                            .cell(std::abs(wmn))
                            .cell(scale > 0.0 ? std::abs(wmn) / scale : 0.0)
                            .end_row();
                    }
                }
            }
        }
    }

    // orthogonality report for the adapted excitations of the configured position
    const int label = cfg.adapt_position > 0 ? cfg.adapt_position : scene.candidates.front().label;
    const PortSite site = scene.site_of_label(label);
    const GeneratorCell& cell = scene.adapter->generator();
    const int rep = cell.orbits[static_cast<std::size_t>(cell.orbit_of[static_cast<std::size_t>(site.edge)])].front();
    VectorXcd v = VectorXcd::Zero(scene.adapter->n_unknowns());
    v(rep) = scene.basis.edges[static_cast<std::size_t>(rep)].edge_length;

    std::vector<SymmetryAdaptedExcitation> states;
    for (const Species& s : scene.group.species()) {
        SymmetryAdaptedExcitation e = scene.adapter->adapt_vector(v, s);
        if (!e.collided) states.push_back(std::move(e));
    }

    std::vector<std::pair<std::string, MatrixXcd>> ops;
    const MatrixXcd z = r0.m + cplx(0.0, 1.0) * x0.m;
    for (const std::string& name : opnames) {
        if (name == "identity")
            ops.emplace_back(name, MatrixXcd::Identity(x0.size(), x0.size()));
        else if (name == "Z0")
            ops.emplace_back(name, z);
        else if (name == "R0")
            ops.emplace_back(name, r0.m);
        else if (name == "X0")
            ops.emplace_back(name, x0.m);
        else if (name == "W")
            ops.emplace_back(name, w.m);
        else if (name == "YhR0Y") {
            ImpedanceFactorization zfac(z);
            const MatrixXcd eye = MatrixXcd::Identity(x0.size(), x0.size());
            const MatrixXcd yi = zfac.solve(eye);
            ops.emplace_back(name, MatrixXcd(yi.adjoint() * r0.m * yi));
        } else {
            throw ConfigError("unknown orthogonality operator '" + name + "'");
        }
    }
    const OrthogonalityReport report = orthogonality_check(states, ops);
    CsvFile oc(out_path(cfg.out_dir, "orthogonality.csv"));
    oc.header({"operator", "species_m", "species_n", "magnitude", "normalized"});
    for (const auto& entry : report.entries)
        for (Eigen::Index i = 0; i < entry.magnitude.rows(); ++i)
            for (Eigen::Index j = 0; j < entry.magnitude.cols(); ++j)
                oc.cell(entry.op_name)
                    .cell(scene.group.species_label(report.species[static_cast<std::size_t>(i)]))
                    .cell(scene.group.species_label(report.species[static_cast<std::size_t>(j)]))
                    .cell(entry.magnitude(i, j))
                    .cell(entry.normalized(i, j))
                    .end_row();
}

namespace {

void write_scan_outputs(const Scene& scene, const ScanResult& result, bool sweep)
{
    const ScenarioConfig& cfg = scene.cfg;
    ensure_directory(cfg.out_dir);
    const std::size_t n_sp = result.species.size();

    {
        CsvFile trace(out_path(cfg.out_dir, "scan_trace.csv"));
        trace.header({"ka", "species", "n_xi", "positions", "t", "t_rms"});
        for (const ScanEntry& e : result.entries) {
            const std::string pos = join_labels(e.labels);
            for (std::size_t f = 0; f < result.ka.size(); ++f)
                for (std::size_t s = 0; s < n_sp; ++s) {
                    if (!e.t[f][s].has_value()) continue;
                    trace.cell(result.ka[f])
                        .cell(result.species_labels[s])
                        .cell(static_cast<int>(e.labels.size()))
                        .cell(pos)
                        .cell(*e.t[f][s])
                        .cell(e.t_rms)
                        .end_row();
                }
        }
    }
    {
        CsvFile summary(out_path(cfg.out_dir, "scan_summary.csv"));
        summary.header({"rank", "positions", "n_ports", "n_states", "reduced_states", "t_rms"});
        int rank = 1;
        for (const ScanEntry& e : result.entries)
            summary.cell(rank++)
                .cell(join_labels(e.labels))
                .cell(e.n_ports)
                .cell(e.n_states)
                .cell(e.reduced_states ? 1 : 0)
                .cell(e.t_rms)
                .end_row();
    }
    {
        std::ofstream rep(out_path(cfg.out_dir, "report.txt"));
        rep << "RMS TARC ranking (" << (sweep ? "frequency band" : "single frequency") << ", "
            << result.ka.size() << " ka sample" << (result.ka.size() == 1 ? "" : "s") << ")\n";
        rep << "rank  positions        N_p  states  t_RMS\n";
        int rank = 1;
        for (const ScanEntry& e : result.entries) {
            std::ostringstream pos;
            pos << "{" << join_labels(e.labels) << "}";
            rep << rank++ << "     " << pos.str();
            for (std::size_t pad = pos.str().size(); pad < 17; ++pad) rep << ' ';
            rep << e.n_ports << "    " << e.n_states << (e.reduced_states ? "*" : " ") << "      "
                << fmt_g(e.t_rms, 6) << "\n";
        }
        rep << "\n* reduced state count: position(s) on a reflection plane\n";
    }
    {
        const ScanEntry& best = result.best();
        CsvFile kap(out_path(cfg.out_dir, "kappa.csv"));
        kap.header({"ka", "positions", "species", "position", "kappa_re", "kappa_im"});
        for (std::size_t f = 0; f < result.ka.size(); ++f) {
            for (std::size_t s = 0; s < n_sp; ++s) {
                if (!best.kappa[f][s].has_value()) continue;
                VectorXcd k = *best.kappa[f][s];
                // report amplitudes with the first excited position at 1 V
                for (Eigen::Index j = 0; j < k.size(); ++j)
                    if (std::abs(k(j)) > 0.0) {
                        k /= k(j);
                        break;
                    }
                for (Eigen::Index j = 0; j < k.size(); ++j)
                    kap.cell(result.ka[f])
                        .cell(join_labels(best.labels))
                        .cell(result.species_labels[s])
                        .cell(best.labels[static_cast<std::size_t>(j)])
                        .cell(k(j).real())
                        .cell(k(j).imag())
                        .end_row();
            }
        }
    }
    if (sweep) {
        const ScanEntry& best = result.best();
        CsvFile curves(out_path(cfg.out_dir, "tarc_curves.csv"));
        curves.header({"ka", "species", "t"});
        for (std::size_t f = 0; f < result.ka.size(); ++f)
            for (std::size_t s = 0; s < n_sp; ++s)
                if (best.t[f][s].has_value())
                    curves.cell(result.ka[f]).cell(result.species_labels[s]).cell(*best.t[f][s]).end_row();

        if (best.labels.size() == 1) {
            const PerFrequencyBest pfb = per_frequency_best(result);
            CsvFile pf(out_path(cfg.out_dir, "per_frequency_best.csv"));
            pf.header({"ka", "best_position", "t_rms"});
            for (std::size_t f = 0; f < pfb.ka.size(); ++f)
                pf.cell(pfb.ka[f]).cell(pfb.best_label[f]).cell(pfb.best_t_rms[f]).end_row();
        }
    }
    {
        std::ofstream gp(out_path(cfg.out_dir, "plot.gp"));
        gp << "# gnuplot helper for the emitted CSV data\n"
              "set datafile separator ','\n"
              "set key outside\n";
        if (sweep)
            gp << "set xlabel 'ka'\nset ylabel 't'\n"
                  "plot 'tarc_curves.csv' every ::1 using 1:3 with lines title 't per state'\n";
        else
            gp << "set style data histograms\nset style fill solid\n"
                  "plot 'scan_summary.csv' every ::1 using 6:xtic(2) title 't_{RMS}'\n";
    }
}

}  // namespace

void cmd_scan(const Scene& scene)
{
    const ScanResult result = scan(scene.scan_spec());
    write_scan_outputs(scene, result, false);
}

void cmd_sweep(const Scene& scene)
{
    if (scene.cfg.ka.size() < 2)
        throw ConfigError("sweep needs a multi-sample frequency grid ([frequency] ka_min/ka_max/ka_count)");
    const ScanResult result = scan(scene.scan_spec());
    write_scan_outputs(scene, result, true);
}

void cmd_compare(const Scene& scene)
{
    const ScenarioConfig& cfg = scene.cfg;
    if (cfg.compare_positions.empty())
        throw ConfigError("compare command needs [compare] positions in the config");
    ensure_directory(cfg.out_dir);

    std::vector<PortSite> layout;
    for (int label : cfg.compare_positions) layout.push_back(scene.site_of_label(label));
    const ScanEntry entry = reference_comparison(scene.scan_spec(), layout);

    CsvFile cmp(out_path(cfg.out_dir, "compare.csv"));
    cmp.header({"positions", "n_xi", "n_ports", "n_states", "t_rms"});
    cmp.cell(join_labels(entry.labels))
        .cell(static_cast<int>(entry.labels.size()))
        .cell(entry.n_ports)
        .cell(entry.n_states)
        .cell(entry.t_rms)
        .end_row();

    std::ofstream rep(out_path(cfg.out_dir, "compare_report.txt"));
    rep << "reference layout {" << join_labels(entry.labels) << "}: N_p = " << entry.n_ports
        << ", states = " << entry.n_states << ", t_RMS = " << fmt_g(entry.t_rms, 6) << "\n";
}

void cmd_group_table(const std::string& group_name, const std::string& out_dir)
{
    ensure_directory(out_dir);
    const PointGroup g = PointGroup::build(group_name);
    {
        std::ofstream os(out_path(out_dir, "character_table.csv"));
        g.write_character_table_csv(os);
    }
    CsvFile info(out_path(out_dir, "group_info.csv"));
    info.header({"group", "order", "max_orthogonal_states", "min_ports", "species"});
    std::string species;
    for (const Species& s : g.species()) {
        if (!species.empty()) species += "|";
        species += g.species_label(s);
    }
    info.cell(g.name()).cell(g.order()).cell(g.max_orthogonal_states()).cell(g.min_ports()).cell(species).end_row();
}

}  // namespace symport

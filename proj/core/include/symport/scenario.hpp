#pragma once

#include <memory>

#include "symport/config.hpp"
#include "symport/csv.hpp"
#include "symport/mesh_gen.hpp"
#include "symport/optimizer.hpp"

namespace symport {

/// Loaded scenario: mesh, basis, group action and the candidate port ladder.
/// Construct through load_scene; members are address-stable afterwards
/// (adapter keeps references to group and maps).
struct Scene {
    ScenarioConfig cfg;
    TriMesh mesh;
    EdgeBasisSet basis;
    PointGroup group;
    MappingMatrices maps;
    std::unique_ptr<SymmetryAdapter> adapter;
    std::vector<PortAnchor> ladder;      // all ladder entries from the ports file
    std::vector<PortSite> candidates;    // resolved candidate sites (selected labels)

    PortSite site_of_label(int label) const;
    FrequencyGrid grid() const;
    ScanSpec scan_spec() const;
};

std::unique_ptr<Scene> load_scene(const ScenarioConfig& cfg);

/// CLI commands; each writes its result files into cfg.out_dir.
void cmd_adapt(const Scene& scene);
void cmd_modes(const Scene& scene);
void cmd_scan(const Scene& scene);
void cmd_sweep(const Scene& scene);
void cmd_compare(const Scene& scene);
void cmd_group_table(const std::string& group_name, const std::string& out_dir);

}  // namespace symport

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symport/errors.hpp"

namespace symport {

/// Flat key-value configuration with [section] headers, '#' comments and
/// one `key = value` pair per line.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse(std::istream& in, const std::string& origin = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double dflt) const;
    int get_int_or(const std::string& section, const std::string& key, int dflt) const;

    /// "1,2,5" or "1:15" (inclusive range).
    std::vector<int> get_int_list(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& section, const std::string& key) const;

    const std::string& origin() const { return origin_; }

private:
    struct Value {
        std::string text;
        int line = 0;
    };
    std::map<std::string, std::map<std::string, Value>> sections_;
    std::string origin_;

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const;
};

/// Everything one run needs, resolved from a config file. Validation checks
/// that referenced files exist and the frequency grid is non-empty.
struct ScenarioConfig {
    std::string config_path;
    std::string mesh_path;
    std::string mesh_format = "auto";
    std::string group_name = "C2v";
    double vertex_tol_rel = 1e-6;

    std::vector<double> ka;  // explicit list or generated range

    std::string ports_file;            // ladder anchors (label,x,y,z)
    std::vector<int> candidate_labels; // empty = every ladder entry
    int n_xi = 1;
    double z0_line = 50.0;
    double resistivity = 0.0;

    int adapt_position = 0;                 // 0 = first candidate
    std::vector<int> compare_positions;     // literature layout for `compare`
    std::vector<std::string> orthogonality_operators;  // identity,Z0,R0,X0,W,YhR0Y

    std::string out_dir = "out";
    int threads = 0;
    int modes_max = 8;
    double w_delta = 1e-3;
    bool dump_operators = false;
    std::size_t combo_cap = 100000;

    static ScenarioConfig load(const std::string& path);
    void validate() const;
};

}  // namespace symport

#include "symport/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace symport {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse(in, path);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin)
{
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.sections_[section][key] = {value, lineno};
    }
    return cfg;
}

void ConfigFile::fail(const std::string& section, const std::string& key, const std::string& why) const
{
    std::string where = origin_;
    auto s = sections_.find(section);
    if (s != sections_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) where += ":" + std::to_string(k->second.line);
    }
    throw ParseError(where + ": [" + section + "] " + key + ": " + why);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const
{
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const
{
    auto s = sections_.find(section);
    if (s == sections_.end() || s->second.count(key) == 0) fail(section, key, "missing required entry");
    return s->second.at(key).text;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& dflt) const
{
    return has(section, key) ? get(section, key) : dflt;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const
{
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing text");
        return d;
    } catch (const std::exception&) {
        fail(section, key, "not a number: '" + v + "'");
    }
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key, double dflt) const
{
    return has(section, key) ? get_double(section, key) : dflt;
}

int ConfigFile::get_int_or(const std::string& section, const std::string& key, int dflt) const
{
    if (!has(section, key)) return dflt;
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing text");
        return i;
    } catch (const std::exception&) {
        fail(section, key, "not an integer: '" + v + "'");
    }
}

std::vector<int> ConfigFile::get_int_list(const std::string& section, const std::string& key) const
{
    const std::string v = get(section, key);
    std::vector<int> out;
    const auto colon = v.find(':');
    try {
        if (colon != std::string::npos) {
            const int a = std::stoi(v.substr(0, colon));
            const int b = std::stoi(v.substr(colon + 1));
            if (b < a) throw std::invalid_argument("descending range");
            for (int i = a; i <= b; ++i) out.push_back(i);
            return out;
        }
        std::istringstream ls(v);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(std::stoi(tok));
        }
    } catch (const std::exception&) {
        fail(section, key, "expected a list like 1,2,3 or a range like 1:15");
    }
    if (out.empty()) fail(section, key, "empty list");
    return out;
}

std::vector<std::string> ConfigFile::get_string_list(const std::string& section,
                                                     const std::string& key) const
{
    const std::string v = get(section, key);
    std::vector<std::string> out;
    std::istringstream ls(v);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    if (out.empty()) fail(section, key, "empty list");
    return out;
}

ScenarioConfig ScenarioConfig::load(const std::string& path)
{
    const ConfigFile f = ConfigFile::parse_file(path);
    ScenarioConfig c;
    c.config_path = path;

    c.mesh_path = f.get("mesh", "path");
    c.mesh_format = f.get_or("mesh", "format", "auto");
    c.group_name = f.get_or("group", "name", "C2v");
    c.vertex_tol_rel = f.get_double_or("group", "tol", 1e-6);

    if (f.has("frequency", "ka")) {
        for (const std::string& tok : f.get_string_list("frequency", "ka")) {
            try {
                c.ka.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ParseError(path + ": [frequency] ka: not a number '" + tok + "'");
            }
        }
    } else if (f.has("frequency", "ka_min")) {
        const double lo = f.get_double("frequency", "ka_min");
        const double hi = f.get_double("frequency", "ka_max");
        const int n = f.get_int_or("frequency", "ka_count", 2);
        if (n < 1 || hi < lo) throw ParseError(path + ": [frequency] bad ka range");
        for (int i = 0; i < n; ++i)
            c.ka.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    }

    c.ports_file = f.get_or("ports", "ports_file", "");
    if (f.has("ports", "candidates")) c.candidate_labels = f.get_int_list("ports", "candidates");
    c.n_xi = f.get_int_or("ports", "n_xi", 1);
    c.z0_line = f.get_double_or("ports", "z0", 50.0);
    c.resistivity = f.get_double_or("material", "rho", 0.0);

    c.adapt_position = f.get_int_or("adapt", "position", 0);
    if (f.has("compare", "positions")) c.compare_positions = f.get_int_list("compare", "positions");
    if (f.has("orthogonality", "operators"))
        c.orthogonality_operators = f.get_string_list("orthogonality", "operators");
    else
        c.orthogonality_operators = {"identity", "Z0", "R0", "X0", "W", "YhR0Y"};

    c.out_dir = f.get_or("output", "dir", "out");
    c.threads = f.get_int_or("run", "threads", 0);
    c.modes_max = f.get_int_or("modes", "max_modes", 8);
    c.w_delta = f.get_double_or("modes", "w_delta", 1e-3);
    c.dump_operators = f.get_int_or("output", "dump_operators", 0) != 0;
    c.combo_cap = static_cast<std::size_t>(f.get_int_or("run", "combo_cap", 100000));
    return c;
}

void ScenarioConfig::validate() const
{
    if (!std::filesystem::exists(mesh_path))
        throw ConfigError(config_path + ": mesh file '" + mesh_path + "' does not exist");
    if (!ports_file.empty() && !std::filesystem::exists(ports_file))
        throw ConfigError(config_path + ": ports file '" + ports_file + "' does not exist");
    if (ka.empty()) throw ConfigError(config_path + ": frequency grid is empty");
    for (double k : ka)
        if (k <= 0.0) throw ConfigError(config_path + ": ka values must be positive");
    for (std::size_t i = 1; i < ka.size(); ++i)
        if (ka[i] <= ka[i - 1])
            throw ConfigError(config_path + ": ka samples must be strictly increasing");
    if (resistivity < 0.0) throw ConfigError(config_path + ": negative resistivity");
}

}  // namespace symport

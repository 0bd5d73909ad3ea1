#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "symport/types.hpp"

namespace symport {

/// Shortest-roundtrip style rendering at a fixed significance; every CSV in
/// the project goes through this so re-parsing reproduces the run.
std::string fmt_g(double v, int significant = 12);
std::string fmt_cplx(cplx v, int significant = 12);

/// Line-oriented CSV file with deterministic numeric formatting.
class CsvFile {
public:
    explicit CsvFile(const std::string& path, int significant = 12);

    void header(const std::vector<std::string>& names);
    void raw_row(const std::vector<std::string>& cells);

    CsvFile& cell(const std::string& s);
    CsvFile& cell(double v);
    CsvFile& cell(int v);
    CsvFile& cell(cplx v);
    void end_row();

private:
    std::ofstream out_;
    std::vector<std::string> row_;
    int significant_;
};

void ensure_directory(const std::string& path);

}  // namespace symport

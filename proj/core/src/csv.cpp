#include "symport/csv.hpp"

#include <cstdio>
#include <filesystem>

#include "symport/errors.hpp"

namespace symport {

std::string fmt_g(double v, int significant)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

std::string fmt_cplx(cplx v, int significant)
{
    std::string s = fmt_g(v.real(), significant);
    s += (v.imag() >= 0.0 ? "+" : "");
    s += fmt_g(v.imag(), significant);
    s += "j";
    return s;
}

CsvFile::CsvFile(const std::string& path, int significant) : out_(path), significant_(significant)
{
    if (!out_) throw ConfigError("cannot open output file '" + path + "'");
}

void CsvFile::header(const std::vector<std::string>& names)
{
    raw_row(names);
}

void CsvFile::raw_row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ",";
        out_ << cells[i];
    }
    out_ << "\n";
}

CsvFile& CsvFile::cell(const std::string& s)
{
    row_.push_back(s);
    return *this;
}

CsvFile& CsvFile::cell(double v)
{
    row_.push_back(fmt_g(v, significant_));
    return *this;
}

CsvFile& CsvFile::cell(int v)
{
    row_.push_back(std::to_string(v));
    return *this;
}

CsvFile& CsvFile::cell(cplx v)
{
    row_.push_back(fmt_cplx(v, significant_));
    return *this;
}

void CsvFile::end_row()
{
    raw_row(row_);
    row_.clear();
}

void ensure_directory(const std::string& path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ConfigError("cannot create output directory '" + path + "': " + ec.message());
}

}  // namespace symport

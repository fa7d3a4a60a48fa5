#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "twoscale/cli.hpp"
#include "twoscale/errors.hpp"

namespace twoscale::cli {

std::string format_number(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t columns;
    std::filesystem::path path;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : impl_(std::make_unique<Impl>()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) throw Error("cannot write " + path.string());
    impl_->columns = header.size();
    impl_->path = path;
    for (std::size_t i = 0; i < header.size(); ++i) impl_->out << (i ? "," : "") << header[i];
    impl_->out << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(std::initializer_list<double> values) {
    if (values.size() != impl_->columns) throw Error("csv row width differs from header in " + impl_->path.string());
    bool first = true;
    for (const double v : values) {
        impl_->out << (first ? "" : ",") << format_number(v);
        first = false;
    }
    impl_->out << "\n";
    if (!impl_->out) throw Error("write failed for " + impl_->path.string());
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("csv has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing header row");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != t.header.size())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_series(const std::filesystem::path& path, const std::string& name, const TimeSeries& s) {
    CsvWriter w(path, {"t", name});
    for (std::size_t j = 0; j < s.size(); ++j) w.row({s.times[j], s.values[j]});
}

TimeSeries read_series(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 2 || t.header[0] != "t") throw ConfigError(path.string() + ": expected columns t,<value>");
    TimeSeries s;
    for (const auto& row : t.rows) {
        if (!s.times.empty() && !(row[0] > s.times.back()))
            throw ConfigError(path.string() + ": times must increase");
        s.times.push_back(row[0]);
        s.values.push_back(row[1]);
    }
    if (s.size() < 2) throw ConfigError(path.string() + ": need at least two samples");
    return s;
}

void write_harmonics(const std::filesystem::path& path, const PeriodicProfile& p) {
    CsvWriter w(path, {"t", "k", "re", "im"});
    for (std::size_t j = 0; j < p.size(); ++j)
        for (int k = 0; k <= p.harmonics(); ++k) {
            const Complex c = p.coeff(j, k);
            w.row({p.times()[j], double(k), c.real(), c.imag()});
        }
}

PeriodicProfile read_harmonics(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ct = t.column("t");
    const std::size_t ck = t.column("k");
    const std::size_t cre = t.column("re");
    const std::size_t cim = t.column("im");
    std::vector<double> times;
    int K = 0;
    for (const auto& row : t.rows) {
        if (times.empty() || row[ct] != times.back()) {
            if (!times.empty() && !(row[ct] > times.back()))
                throw ConfigError(path.string() + ": times must increase");
            times.push_back(row[ct]);
        }
        K = std::max(K, static_cast<int>(row[ck]));
    }
    if (times.size() < 2 || K < 1) throw ConfigError(path.string() + ": harmonic table is too small");
    PeriodicProfile p(times, K);
    std::size_t j = 0;
    for (const auto& row : t.rows) {
        while (row[ct] != times[j]) ++j;
        const double k = row[ck];
        if (k < 0 || k != static_cast<int>(k)) throw ConfigError(path.string() + ": harmonic index must be k >= 0");
        p.set(j, static_cast<int>(k), Complex{row[cre], row[cim]});
    }
    return p;
}

std::vector<double> read_coefficients(const std::filesystem::path& path, std::string_view column) {
    const CsvTable t = read_csv(path);
    const std::size_t cn = t.column("n");
    const std::size_t cv = t.column(column);
    std::map<int, double> by_mode;
    for (const auto& row : t.rows) {
        const double n = row[cn];
        if (n < 1 || n != static_cast<int>(n)) throw ConfigError(path.string() + ": mode index must be n >= 1");
        by_mode[static_cast<int>(n)] = row[cv];
    }
    if (by_mode.empty()) throw ConfigError(path.string() + ": no coefficients");
    std::vector<double> out(static_cast<std::size_t>(by_mode.rbegin()->first), 0.0);
    for (const auto& [n, v] : by_mode) out[static_cast<std::size_t>(n - 1)] = v;
    return out;
}

void write_metadata(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& kv) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

}  // namespace twoscale::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twoscale/averaging.hpp"
#include "twoscale/grid.hpp"
#include "twoscale/spectral.hpp"

namespace twoscale::cli {

/// Sectioned key = value configuration:
///
///     [problem]
///     f = "sin(x)"
///     r = "1 + cos(tau)"
///     T = 1
///     [discretization]
///     N = 8
///     [sweep]
///     omega = 100, 200, 400
///     [output]
///     dir = "out"
///
/// Numeric values may be constant expressions ("pi/2"). `#` starts a comment.
struct RunConfig {
    // [problem]
    std::optional<std::string> f;
    std::optional<std::string> r;
    std::optional<std::string> r0;
    std::optional<std::string> chi;
    std::optional<std::string> phi0;
    std::optional<std::vector<double>> psi;
    std::optional<std::string> r0_file;
    std::optional<std::string> phi0_file;
    std::optional<std::string> chi_file;
    std::optional<std::string> psi_file;
    std::optional<double> T;
    std::optional<double> x0;
    std::optional<double> t0;
    // [discretization]
    int N = 32;
    int K = 32;
    int M = 1000;
    int P = 64;
    int oversample = 40;
    double tol = 1e-9;
    // [sweep]
    std::vector<double> omega;
    // [output]
    std::string dir = "out";
    std::string prefix;

    // Relative file names resolve against this directory.
    std::filesystem::path base_dir = ".";

    std::filesystem::path resolve(const std::string& file) const;
};

/// Throws ConfigError with the offending line or key.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);
/// Effective configuration in the same format; parse_config(render_config(c))
/// reproduces c.
std::string render_config(const RunConfig& c);

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_number(double v);

/// Comma separated rows with a mandatory header.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::initializer_list<double> values);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Rows of numbers under a header; throws ConfigError on malformed input.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

void write_series(const std::filesystem::path& path, const std::string& name, const TimeSeries& s);
TimeSeries read_series(const std::filesystem::path& path);
/// Harmonic table: t, k, re, im for k = 0..K at every time.
void write_harmonics(const std::filesystem::path& path, const PeriodicProfile& p);
PeriodicProfile read_harmonics(const std::filesystem::path& path);
std::vector<double> read_coefficients(const std::filesystem::path& path, std::string_view column);
void write_metadata(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& kv);

/// Exit codes.
enum Exit : int { ok = 0, config_error = 2, precondition = 3, self_check = 4 };

/// Runs one subcommand. Exceptions propagate.
void run_command(const std::string& command, const RunConfig& config, std::ostream& log);

/// Full command line entry point: parses flags, runs, maps exceptions to
/// exit codes and writes an error record into the output directory.
int main_entry(int argc, char** argv);

}  // namespace twoscale::cli

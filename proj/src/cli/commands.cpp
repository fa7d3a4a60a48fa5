#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "twoscale/cli.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/forward.hpp"
#include "twoscale/inverse.hpp"
#include "twoscale/oracle.hpp"
#include "twoscale/volterra.hpp"

namespace twoscale::cli {

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

template <class T>
const T& need(const std::optional<T>& v, const char* section, const char* key) {
    if (!v) throw ConfigError(std::string("missing field [") + section + "] " + key);
    return *v;
}

Grid make_grid(const RunConfig& c) {
    return Grid(need(c.T, "problem", "T"), static_cast<std::size_t>(c.P), static_cast<std::size_t>(c.M));
}

std::filesystem::path out_file(const RunConfig& c, const std::string& name) {
    return std::filesystem::path(c.dir) / (c.prefix + name);
}

OracleOptions oracle_options(const RunConfig& c) {
    OracleOptions o;
    o.modes = c.N;
    o.oversample = c.oversample;
    return o;
}

ForwardOptions forward_options(const RunConfig& c) {
    ForwardOptions o;
    o.modes = c.N;
    o.averaging.harmonics = c.K;
    return o;
}

InverseOptions inverse_options(const RunConfig& c) {
    InverseOptions o;
    o.modes = c.N;
    o.averaging.harmonics = c.K;
    o.degeneracy_tol = c.tol;
    return o;
}

// Exactly one of the expression and the file must be given.
TimeData time_data(const RunConfig& c, const std::optional<std::string>& expr, const std::optional<std::string>& file,
                   const char* key) {
    if (expr && file) throw ConfigError(std::string("give either ") + key + " or " + key + "_file, not both");
    if (expr) return parse(*expr);
    if (file) return read_series(c.resolve(*file));
    throw ConfigError(std::string("missing field [problem] ") + key + " (or " + key + "_file)");
}

OscillatingData chi_data(const RunConfig& c) {
    if (c.chi && c.chi_file) throw ConfigError("give either chi or chi_file, not both");
    if (c.chi) return parse(*c.chi);
    if (c.chi_file) return read_harmonics(c.resolve(*c.chi_file));
    throw ConfigError("missing field [problem] chi (or chi_file)");
}

SineCoeffs psi_data(const RunConfig& c) {
    if (c.psi && c.psi_file) throw ConfigError("give either psi or psi_file, not both");
    if (c.psi) return SineCoeffs{*c.psi};
    if (c.psi_file) return SineCoeffs{read_coefficients(c.resolve(*c.psi_file), "psi")};
    throw ConfigError("missing field [problem] psi (or psi_file)");
}

double single_omega(const RunConfig& c) {
    if (c.omega.size() != 1) throw ConfigError("[sweep] omega must hold exactly one value for this command");
    return c.omega.front();
}

void write_field_csv(const std::filesystem::path& path, const Grid& g, const std::vector<std::string>& names,
                     const std::vector<const Field*>& fields) {
    std::vector<std::string> header{"x", "t"};
    header.insert(header.end(), names.begin(), names.end());
    CsvWriter w(path, header);
    for (std::size_t j = 0; j < g.nt(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            if (fields.size() == 1) {
                w.row({g.x(i), g.t(j), (*fields[0])(i, j)});
            } else {
                w.row({g.x(i), g.t(j), (*fields[0])(i, j), (*fields[1])(i, j), (*fields[2])(i, j)});
            }
        }
}

std::string num(double v) { return format_number(v); }

void write_f_table(const std::filesystem::path& path, const RecoveredSource& s) {
    CsvWriter w(path, {"n", "f", "in_M0", "lambda"});
    for (int n = 1; n <= s.f.modes(); ++n)
        w.row({double(n), s.f[n], s.non_unique(n) ? 1.0 : 0.0, s.lambda[static_cast<std::size_t>(n - 1)]});
}

void add_diagnostics(Meta& meta, const RecoveredSource& s) {
    for (const auto& [k, v] : s.diagnostics) meta.emplace_back(k, num(v));
}

void cmd_forward(const RunConfig& c, std::ostream& log) {
    const Expr f = parse(need(c.f, "problem", "f"));
    const Expr r = parse(need(c.r, "problem", "r"));
    const double omega = single_omega(c);
    const Grid g = make_grid(c);
    const ReferenceSolution ref = solve_reference(f, r, omega, g, oracle_options(c));
    write_field_csv(out_file(c, "forward.csv"), g, {"u"}, {&ref.u});
    write_metadata(out_file(c, "forward.meta"), {{"omega", num(omega)},
                                                 {"modes", std::to_string(ref.modes)},
                                                 {"dt", num(ref.dt)},
                                                 {"oversample", std::to_string(ref.oversample)},
                                                 {"error_estimate", num(ref.error_estimate)},
                                                 {"truncation_residual", num(ref.truncation_residual)}});
    log << "forward: omega=" << num(omega) << " error_estimate=" << num(ref.error_estimate) << "\n";
}

void cmd_asymptotic(const RunConfig& c, std::ostream& log) {
    const Expr f = parse(need(c.f, "problem", "f"));
    const Expr r = parse(need(c.r, "problem", "r"));
    const Grid g = make_grid(c);
    const AsymptoticSolution U = build_asymptotic(f, r, g, forward_options(c));
    write_field_csv(out_file(c, "asymptotic.csv"), g, {"u0", "u1", "u2"}, {&U.u0, &U.u1, &U.u2});
    write_harmonics(out_file(c, "rho0.csv"), U.rho0);
    {
        CsvWriter w(out_file(c, "a_constants.csv"), {"n", "a1", "a2"});
        for (std::size_t i = 0; i < U.a.a1.size(); ++i) w.row({double(i + 1), U.a.a1[i], U.a.a2[i]});
    }
    if (!c.omega.empty()) {
        CsvWriter w(out_file(c, "assembled.csv"), {"omega", "x", "t", "U"});
        for (const double omega : c.omega) {
            const Field A = assemble_on_grid(U, omega);
            for (std::size_t j = 0; j < g.nt(); ++j)
                for (std::size_t i = 0; i < g.nx(); ++i) w.row({omega, g.x(i), g.t(j), A(i, j)});
        }
    }
    write_metadata(out_file(c, "asymptotic.meta"), {{"modes", std::to_string(U.modes)},
                                                    {"harmonics", std::to_string(U.harmonics)},
                                                    {"b0", num(U.b.b0)},
                                                    {"b1", num(U.b.b1)},
                                                    {"b3", num(U.b.b3)}});
    log << "asymptotic: b0=" << num(U.b.b0) << " b1=" << num(U.b.b1) << " b3=" << num(U.b.b3) << "\n";
}

void cmd_compare(const RunConfig& c, std::ostream& log) {
    const Expr f = parse(need(c.f, "problem", "f"));
    const Expr r = parse(need(c.r, "problem", "r"));
    if (c.omega.size() < 2) throw ConfigError("[sweep] omega needs at least two values for compare");
    const Grid g = make_grid(c);
    const AsymptoticSolution U = build_asymptotic(f, r, g, forward_options(c));
    const OracleOptions opt = oracle_options(c);

    struct Row {
        double e0, e2, estimate, dt;
    };
    std::vector<std::future<Row>> jobs;
    for (const double omega : c.omega)
        jobs.push_back(std::async(std::launch::async, [&, omega] {
            const ReferenceSolution ref = solve_reference(f, r, omega, g, opt);
            return Row{sup_error(ref.u, U.u0), sup_error(ref, U, omega), ref.error_estimate, ref.dt};
        }));
    std::vector<Row> rows;
    for (auto& j : jobs) rows.push_back(j.get());

    CsvWriter w(out_file(c, "compare.csv"), {"omega", "E0", "E2", "omega_E0", "omega2_E2"});
    Meta meta{{"modes", std::to_string(c.N)}, {"oversample", std::to_string(c.oversample)}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double om = c.omega[i];
        w.row({om, rows[i].e0, rows[i].e2, om * rows[i].e0, om * om * rows[i].e2});
        meta.emplace_back("error_estimate@" + num(om), num(rows[i].estimate));
        meta.emplace_back("dt@" + num(om), num(rows[i].dt));
        log << "compare: omega=" << num(om) << " E0=" << num(rows[i].e0) << " E2=" << num(rows[i].e2) << "\n";
    }
    write_metadata(out_file(c, "compare.meta"), meta);
}

void cmd_make_observations(const RunConfig& c, std::ostream& log) {
    const Expr f = parse(need(c.f, "problem", "f"));
    const Expr r = parse(need(c.r, "problem", "r"));
    const double x0 = need(c.x0, "problem", "x0");
    const double t0 = need(c.t0, "problem", "t0");
    const Grid g = make_grid(c);
    const Observations obs = make_observations(f, r, x0, t0, g, inverse_options(c));
    write_series(out_file(c, "phi0.csv"), "phi0", std::get<TimeSeries>(obs.phi0));
    write_series(out_file(c, "phi1.csv"), "phi1", obs.phi1);
    write_series(out_file(c, "phi2.csv"), "phi2", obs.phi2);
    write_harmonics(out_file(c, "chi.csv"), std::get<PeriodicProfile>(obs.chi));
    {
        CsvWriter w(out_file(c, "psi.csv"), {"n", "psi"});
        for (int n = 1; n <= obs.psi.modes(); ++n) w.row({double(n), obs.psi[n]});
    }
    write_metadata(out_file(c, "observations.meta"), {{"x0", num(x0)}, {"t0", num(t0)}, {"modes", std::to_string(c.N)}});
    log << "make-observations: wrote phi0, phi1, phi2, chi, psi\n";
}

void cmd_invert_time(const RunConfig& c, std::ostream& log) {
    const Expr f = parse(need(c.f, "problem", "f"));
    const Grid g = make_grid(c);
    Observations obs;
    obs.x0 = need(c.x0, "problem", "x0");
    obs.phi0 = time_data(c, c.phi0, c.phi0_file, "phi0");
    obs.chi = chi_data(c);
    const RecoveredSource s = recover_r(f, obs, g, inverse_options(c));
    write_series(out_file(c, "r0.csv"), "r0", s.r0);
    write_harmonics(out_file(c, "r1.csv"), s.r1);
    Meta meta{{"x0", num(obs.x0)}};
    if (s.r1_expr) meta.emplace_back("r1_expr", s.r1_expr->str());
    add_diagnostics(meta, s);
    write_metadata(out_file(c, "invert_time.meta"), meta);
    log << "invert-time: recovered r0 on " << s.r0.size() << " nodes\n";
}

void cmd_invert_space(const RunConfig& c, std::ostream& log) {
    const Grid g = make_grid(c);
    const TimeData r0 = time_data(c, c.r0, c.r0_file, "r0");
    const double t0 = need(c.t0, "problem", "t0");
    const RecoveredSource s = recover_f(r0, t0, psi_data(c), g, inverse_options(c));
    write_f_table(out_file(c, "f.csv"), s);
    std::string m0;
    for (const int n : s.M0) m0 += (m0.empty() ? "" : " ") + std::to_string(n);
    Meta meta{{"t0", num(t0)}, {"M0", m0}};
    add_diagnostics(meta, s);
    write_metadata(out_file(c, "invert_space.meta"), meta);
    log << "invert-space: " << s.f.modes() << " modes, M0 = {" << m0 << "}\n";
}

void cmd_invert_joint(const RunConfig& c, std::ostream& log) {
    const Grid g = make_grid(c);
    const TimeData r0 = time_data(c, c.r0, c.r0_file, "r0");
    const double x0 = need(c.x0, "problem", "x0");
    const double t0 = need(c.t0, "problem", "t0");
    const JointRecovery j = recover_joint(r0, chi_data(c), psi_data(c), x0, t0, g, inverse_options(c));
    write_f_table(out_file(c, "f.csv"), j.source);
    write_harmonics(out_file(c, "r1.csv"), j.source.r1);
    {
        CsvWriter w(out_file(c, "consistency.csv"), {"t", "phi0", "phi1", "phi2"});
        for (std::size_t k = 0; k < j.phi0.size(); ++k)
            w.row({j.phi0.times[k], j.phi0.values[k], j.phi1.values[k], j.phi2.values[k]});
    }
    Meta meta{{"x0", num(x0)}, {"t0", num(t0)}};
    if (j.source.r1_expr) meta.emplace_back("r1_expr", j.source.r1_expr->str());
    add_diagnostics(meta, j.source);
    write_metadata(out_file(c, "invert_joint.meta"), meta);
    log << "invert-joint: recovered " << j.source.f.modes() << " modes\n";
}

// Small closed-form checks of the installed build.
void cmd_selftest(const RunConfig&, std::ostream& log) {
    int failures = 0;
    auto report = [&](const char* name, bool ok, double value) {
        log << (ok ? "PASS " : "FAIL ") << name << " (" << num(value) << ")\n";
        failures += ok ? 0 : 1;
    };
    {
        const Expr e = parse("sin(x)*exp(-t/2) + tau^2");
        const double err = std::abs(parse(e.str())(0.3, 0.7, 1.1) - e(0.3, 0.7, 1.1));
        report("expr print/parse", err == 0.0, err);
    }
    {
        const Grid g(1.0, 8, 100);
        OracleOptions o;
        o.modes = 4;
        const ReferenceSolution ref = solve_reference(parse("sin(x)"), parse("1"), 50.0, g, o);
        double err = 0.0;
        for (std::size_t j = 0; j < g.nt(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i)
                err = std::max(err, std::abs(ref.u(i, j) - (1.0 - std::cos(g.t(j))) * std::sin(g.x(i))));
        report("oracle analytic mode", err < 1e-9, err);
    }
    {
        VolterraProblem p;
        for (int j = 0; j <= 400; ++j) p.times.push_back(j / 400.0);
        p.kernel = [](double, double) { return 1.0; };
        p.rhs.assign(p.times.size(), 1.0);
        const auto u = solve_second_kind(p);
        double err = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) err = std::max(err, std::abs(u[j] - std::exp(-p.times[j])));
        report("volterra exp(-t)", err < 1e-5, err);
    }
    {
        const Grid g(std::numbers::pi, 8, 200);
        const auto lambda = response_factors(parse("1"), std::numbers::pi, 3, g);
        const double err = std::abs(lambda[0] - 2.0) + std::abs(lambda[1]) + std::abs(lambda[2] - 2.0 / 9.0);
        report("response factors", err < 1e-10, err);
    }
    if (failures) throw SelfCheckError("selftest: " + std::to_string(failures) + " check(s) failed");
}

struct ErrorInfo {
    int code;
    const char* kind;
    int mode = 0;
};

ErrorInfo classify(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return {Exit::config_error, "config"};
    if (dynamic_cast<const ParseError*>(&e)) return {Exit::config_error, "parse"};
    if (dynamic_cast<const DomainError*>(&e)) return {Exit::config_error, "domain"};
    if (const auto* p = dynamic_cast<const PreconditionError*>(&e)) return {Exit::precondition, "precondition", p->mode()};
    if (dynamic_cast<const SelfCheckError*>(&e)) return {Exit::self_check, "self_check"};
    if (dynamic_cast<const EvalError*>(&e)) return {Exit::config_error, "evaluation"};
    return {1, "internal"};
}

}  // namespace

void run_command(const std::string& command, const RunConfig& config, std::ostream& log) {
    if (command == "forward") return cmd_forward(config, log);
    if (command == "asymptotic") return cmd_asymptotic(config, log);
    if (command == "compare") return cmd_compare(config, log);
    if (command == "make-observations") return cmd_make_observations(config, log);
    if (command == "invert-time") return cmd_invert_time(config, log);
    if (command == "invert-space") return cmd_invert_space(config, log);
    if (command == "invert-joint") return cmd_invert_joint(config, log);
    if (command == "selftest") return cmd_selftest(config, log);
    throw ConfigError("unknown command '" + command + "'");
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Two-scale asymptotics and inverse source problems for the 1-D wave equation"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::string out_dir;
    long long seed = 0;
    app.add_option("--config", config_path, "Run configuration file");
    app.add_option("--out-dir", out_dir, "Output directory (overrides [output] dir)");
    app.add_option("--seed", seed, "Accepted for harness compatibility; unused");
    const std::vector<std::pair<const char*, const char*>> commands{
        {"forward", "Reference solution for one omega"},
        {"asymptotic", "Asymptotic terms u0, u1, u2 and rho0"},
        {"compare", "Sweep omega and measure E0 and E2 against the reference"},
        {"make-observations", "Observation data from a known source"},
        {"invert-time", "Recover r from phi0 and chi"},
        {"invert-space", "Recover f from psi and r0"},
        {"invert-joint", "Recover f and r1 from psi, r0 and chi"},
        {"selftest", "Run built-in closed-form checks"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Exit::config_error;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    // Where the error record goes if the config itself cannot be loaded.
    if (!out_dir.empty())
        config.dir = out_dir;
    else if (!config_path.empty())
        config.dir = (std::filesystem::path(config_path).parent_path() / config.dir).string();
    try {
        if (!config_path.empty()) {
            config = load_config(config_path);
            // [output] dir is relative to the config file, --out-dir to the shell.
            config.dir = out_dir.empty() ? config.resolve(config.dir).string() : out_dir;
        } else if (command != "selftest") {
            throw ConfigError("--config is required for '" + command + "'");
        }
        if (command != "selftest") {
            std::filesystem::create_directories(config.dir);
            RunConfig echo = config;
            echo.dir = std::filesystem::absolute(config.dir).lexically_normal().string();
            // The echo lives in the output directory, so input paths must not stay relative.
            for (auto* file : {&echo.r0_file, &echo.phi0_file, &echo.chi_file, &echo.psi_file})
                if (*file) *file = std::filesystem::absolute(config.resolve(**file)).lexically_normal().string();
            std::ofstream(out_file(config, "effective.cfg"), std::ios::binary) << render_config(echo);
        }
        run_command(command, config, std::cout);
        return Exit::ok;
    } catch (const std::exception& e) {
        const ErrorInfo info = classify(e);
        std::cerr << "error: " << e.what() << "\n";
        try {
            Meta meta{{"status", "error"},
                      {"command", command},
                      {"exit_code", std::to_string(info.code)},
                      {"kind", info.kind},
                      {"message", e.what()}};
            if (info.mode) meta.emplace_back("mode", std::to_string(info.mode));
            write_metadata(out_file(config, "error.txt"), meta);
        } catch (const std::exception&) {
            // The error record is best effort; the exit code still reports.
        }
        return info.code;
    }
}

}  // namespace twoscale::cli

#ifndef PODWAVE_EXPERIMENTS_HPP
#define PODWAVE_EXPERIMENTS_HPP
//
// Run configuration, result tables and the experiment drivers behind the
// command-line tool. Every driver is a pure function of the configuration
// returning tables; writing them to disk is a separate step.
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "podwave/fem1d.hpp"
#include "podwave/numerics.hpp"
#include "podwave/pod.hpp"
#include "podwave/rom.hpp"
#include "podwave/wave.hpp"

namespace podwave {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//////////////////////////////////////////////////////////////////////
//
// Value parsing
//
//////////////////////////////////////////////////////////////////////

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_number(const std::string& text, const std::string& key)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    }
    catch (const std::exception&) {
        throw ConfigError(key + ": '" + text + "' is not a number");
    }
    if (used != text.size())
        throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
}

}  // namespace detail

// real number, also accepting a fraction such as 1/800
inline double parse_real(std::string_view text, const std::string& key = "value")
{
    const std::string t = detail::trim(text);
    if (t.empty())
        throw ConfigError(key + ": empty value");
    const auto slash = t.find('/');
    if (slash == std::string::npos)
        return detail::parse_number(t, key);
    const double num = detail::parse_number(detail::trim(t.substr(0, slash)), key);
    const double den = detail::parse_number(detail::trim(t.substr(slash + 1)), key);
    if (den == 0.0)
        throw ConfigError(key + ": division by zero in '" + t + "'");
    return num / den;
}

inline std::vector<double> parse_real_list(std::string_view text, const std::string& key = "value")
{
    std::vector<double> out;
    for (const auto& item : detail::split(text, ','))
        out.push_back(parse_real(item, key));
    return out;
}

inline std::size_t parse_count(std::string_view text, const std::string& key = "value")
{
    const double v = parse_real(text, key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
        throw ConfigError(key + ": '" + std::string(text) + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> parse_count_list(std::string_view text, const std::string& key = "value")
{
    std::vector<std::size_t> out;
    for (const auto& item : detail::split(text, ','))
        out.push_back(parse_count(item, key));
    return out;
}

// shortest text that reads back to the same double
inline std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

//////////////////////////////////////////////////////////////////////
//
// Run configuration
//
//////////////////////////////////////////////////////////////////////

struct RunConfig {
    std::size_t n_elements = 400;
    double dt = 1.0 / 800.0;
    double T = 10.0;
    double T_train = std::numeric_limits<double>::quiet_NaN();  // NaN: same as T
    double c = 1.0;
    double D = 0.0;
    double G = 0.0;
    std::vector<PodMethod> pod_method{PodMethod::Standard, PodMethod::DDQ};
    std::vector<std::size_t> r_list{10, 20, 40, 60};
    std::uint64_t seed = 1;
    std::string output_dir = "results";

    // rom-sweep
    std::string sweep_parameter = "D";
    std::vector<double> sweep_values{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
    // profiles
    std::vector<double> profile_times{0.0, 5.0, 10.0};
    // train-interval
    std::vector<double> train_list{10.0, 5.0, 1.0, 0.5};
    // convergence
    std::vector<std::size_t> conv_elements{2000};
    std::vector<double> conv_dt_list{1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0};
    double conv_T = 0.5;
    std::string conv_initial = "sine";  // sine: u0 = sin(pi x); default: the standard u0
    std::size_t series_terms = 200;
    // solve
    std::size_t trajectory_stride = 80;
    // POD
    double rank_tolerance = 1e-22;
    std::string pod_solver = "svd";

    double training_time() const { return std::isnan(T_train) ? T : T_train; }
    WaveParams params() const { return WaveParams{c, D, G}; }
    PodOptions pod_options() const
    {
        PodOptions o;
        o.rank_tolerance = rank_tolerance;
        o.solver = pod_solver == "gram" ? PodSolver::Gram : PodSolver::Svd;
        return o;
    }

    static const std::vector<std::string>& keys()
    {
        static const std::vector<std::string> k{
            "n_elements",    "dt",           "T",          "T_train",       "c",
            "D",             "G",            "pod_method", "r_list",        "seed",
            "output_dir",    "sweep_parameter", "sweep_values", "profile_times", "train_list",
            "conv_elements", "conv_dt_list", "conv_T",     "conv_initial",  "series_terms",
            "trajectory_stride", "rank_tolerance", "pod_solver"};
        return k;
    }

    void set(const std::string& key, const std::string& raw)
    {
        const std::string value = detail::trim(raw);
        if (key == "n_elements")
            n_elements = parse_count(value, key);
        else if (key == "dt")
            dt = parse_real(value, key);
        else if (key == "T")
            T = parse_real(value, key);
        else if (key == "T_train")
            T_train = value.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_real(value, key);
        else if (key == "c")
            c = parse_real(value, key);
        else if (key == "D")
            D = parse_real(value, key);
        else if (key == "G")
            G = parse_real(value, key);
        else if (key == "pod_method") {
            pod_method.clear();
            for (const auto& item : detail::split(value, ',')) {
                try {
                    pod_method.push_back(parse_pod_method(item));
                }
                catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("pod_method: ") + e.what());
                }
            }
        }
        else if (key == "r_list")
            r_list = parse_count_list(value, key);
        else if (key == "seed")
            seed = parse_count(value, key);
        else if (key == "output_dir")
            output_dir = value;
        else if (key == "sweep_parameter")
            sweep_parameter = value;
        else if (key == "sweep_values")
            sweep_values = parse_real_list(value, key);
        else if (key == "profile_times")
            profile_times = parse_real_list(value, key);
        else if (key == "train_list")
            train_list = parse_real_list(value, key);
        else if (key == "conv_elements")
            conv_elements = parse_count_list(value, key);
        else if (key == "conv_dt_list")
            conv_dt_list = parse_real_list(value, key);
        else if (key == "conv_T")
            conv_T = parse_real(value, key);
        else if (key == "conv_initial")
            conv_initial = value;
        else if (key == "series_terms")
            series_terms = parse_count(value, key);
        else if (key == "trajectory_stride")
            trajectory_stride = parse_count(value, key);
        else if (key == "rank_tolerance")
            rank_tolerance = parse_real(value, key);
        else if (key == "pod_solver")
            pod_solver = value;
        else
            throw ConfigError("unknown configuration key '" + key + "'");
    }

    // key/value pairs in a fixed order; output_dir is left out because it
    // does not affect any computed value
    std::vector<std::pair<std::string, std::string>> entries() const
    {
        auto reals = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + format_real(v[i]);
            return s;
        };
        auto counts = [](const std::vector<std::size_t>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        std::string methods;
        for (std::size_t i = 0; i < pod_method.size(); ++i)
            methods += (i ? "," : "") + to_string(pod_method[i]);
        return {{"n_elements", std::to_string(n_elements)},
                {"dt", format_real(dt)},
                {"T", format_real(T)},
                {"T_train", format_real(training_time())},
                {"c", format_real(c)},
                {"D", format_real(D)},
                {"G", format_real(G)},
                {"pod_method", methods},
                {"r_list", counts(r_list)},
                {"seed", std::to_string(seed)},
                {"sweep_parameter", sweep_parameter},
                {"sweep_values", reals(sweep_values)},
                {"profile_times", reals(profile_times)},
                {"train_list", reals(train_list)},
                {"conv_elements", counts(conv_elements)},
                {"conv_dt_list", reals(conv_dt_list)},
                {"conv_T", format_real(conv_T)},
                {"conv_initial", conv_initial},
                {"series_terms", std::to_string(series_terms)},
                {"trajectory_stride", std::to_string(trajectory_stride)},
                {"rank_tolerance", format_real(rank_tolerance)},
                {"pod_solver", pod_solver}};
    }

    void validate() const
    {
        auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        auto divides = [](double total, double step) {
            const double ratio = total / step;
            return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio) && std::round(ratio) >= 2.0;
        };
        if (n_elements < 2)
            fail("n_elements must be at least 2");
        if (!(dt > 0.0) || !(T > 0.0))
            fail("dt and T must be positive");
        if (!divides(T, dt))
            fail("dt = " + format_real(dt) + " must divide T = " + format_real(T) + " into at least 2 steps");
        const double tt = training_time();
        if (!(tt > 0.0) || tt > T * (1.0 + 1e-12))
            fail("T_train must lie in (0, T]");
        if (!divides(tt, dt))
            fail("dt must divide T_train = " + format_real(tt) + " into at least 2 steps");
        if (!(c > 0.0))
            fail("c must be positive");
        if (!(D >= 0.0) || !(G >= 0.0))
            fail("D and G must be non-negative");
        if (pod_method.empty())
            fail("pod_method must name at least one method");
        if (r_list.empty() || std::find(r_list.begin(), r_list.end(), std::size_t{0}) != r_list.end())
            fail("r_list must hold positive basis sizes");
        if (sweep_parameter != "D" && sweep_parameter != "G")
            fail("sweep_parameter must be D or G");
        for (double v : sweep_values)
            if (!(v >= 0.0))
                fail("sweep_values must be non-negative");
        for (double t : profile_times)
            if (!(t >= 0.0))
                fail("profile_times must be non-negative");
        for (double t : train_list)
            if (!(t > 0.0))
                fail("train_list entries must be positive");
        for (std::size_t n : conv_elements)
            if (n < 2)
                fail("conv_elements entries must be at least 2");
        if (!(conv_T > 0.0))
            fail("conv_T must be positive");
        for (double step : conv_dt_list)
            if (!(step > 0.0) || !divides(conv_T, step))
                fail("conv_dt_list entries must divide conv_T");
        if (conv_initial != "sine" && conv_initial != "default")
            fail("conv_initial must be sine or default");
        if (series_terms < 1)
            fail("series_terms must be positive");
        if (trajectory_stride < 1)
            fail("trajectory_stride must be positive");
        if (!(rank_tolerance > 0.0) || rank_tolerance >= 1.0)
            fail("rank_tolerance must lie in (0, 1)");
        if (pod_solver != "svd" && pod_solver != "gram")
            fail("pod_solver must be svd or gram");
    }
};

// apply "key = value" lines; '#' starts a comment
inline void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source = "config")
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            cfg.set(detail::trim(t.substr(0, eq)), t.substr(eq + 1));
        }
        catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str(), path.string());
}

//////////////////////////////////////////////////////////////////////
//
// Result tables and CSV output
//
//////////////////////////////////////////////////////////////////////

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  // extra '#' lines

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != columns.size())
            throw std::logic_error("ResultTable '" + name + "': row has " + std::to_string(row.size()) +
                                   " cells, expected " + std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }

    std::size_t column(std::string_view col) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == col)
                return i;
        throw std::out_of_range("ResultTable '" + name + "': no column '" + std::string(col) + "'");
    }

    double real(std::size_t row, std::string_view col) const
    {
        const Cell& c = rows.at(row).at(column(col));
        if (const auto* d = std::get_if<double>(&c))
            return *d;
        if (const auto* i = std::get_if<long long>(&c))
            return static_cast<double>(*i);
        throw std::invalid_argument("ResultTable: cell is not numeric");
    }

    std::string text(std::size_t row, std::string_view col) const
    {
        const Cell& c = rows.at(row).at(column(col));
        if (const auto* s = std::get_if<std::string>(&c))
            return *s;
        throw std::invalid_argument("ResultTable: cell is not text");
    }
};

inline std::string format_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d))
            return "nan";
        if (std::isinf(*d))
            return *d > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.16e", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&c))
        return std::to_string(*i);
    return std::get<std::string>(c);
}

inline void write_csv(std::ostream& out, const ResultTable& table, const std::string& command, const RunConfig& cfg)
{
    out << "# podwave " << command << "\n";
    for (const auto& [k, v] : cfg.entries())
        out << "# " << k << " = " << v << "\n";
    for (const auto& note : table.notes)
        out << "# " << note << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_cell(row[i]);
        out << "\n";
    }
}

inline std::filesystem::path write_table(const std::filesystem::path& dir, const ResultTable& table,
                                         const std::string& command, const RunConfig& cfg)
{
    std::filesystem::create_directories(dir);
    const auto path = dir / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    write_csv(out, table, command, cfg);
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
    return path;
}

//////////////////////////////////////////////////////////////////////
//
// Shared pipeline pieces
//
//////////////////////////////////////////////////////////////////////

inline double sine_initial_displacement(double x) { return std::sin(std::numbers::pi * x); }

inline std::size_t levels_for(double T, double dt) { return static_cast<std::size_t>(std::llround(T / dt)) + 1; }

// FE trajectory on [0, T] for the standard initial data
inline Trajectory fe_trajectory(const RunConfig& cfg, const WaveParams& params)
{
    const FemSpace space(cfg.n_elements);
    return solve(space, TimeGrid(cfg.T, levels_for(cfg.T, cfg.dt)), params, default_initial_displacement,
                 zero_function);
}

// POD basis from the snapshots on [0, T_train]
inline PodBasis training_basis(const Trajectory& fe, double T_train, PodMethod method, const PodOptions& opts)
{
    const std::size_t n = levels_for(T_train, fe.grid.dt());
    if (n > fe.size())
        throw std::invalid_argument("training interval longer than the trajectory");
    return compute_basis(n == fe.size() ? fe : fe.head(n), method, opts);
}

struct RomRun {
    Trajectory rom;
    RomErrorReport report;
};

inline RomRun rom_run(const Trajectory& fe, const PodBasis& basis, std::size_t r, const WaveParams& params)
{
    const RomSystem sys = build_rom(basis, r, fe.space, params, fe.grid, fe.state(0), fe.state(1));
    Trajectory rom = solve_rom(sys);
    RomErrorReport rep = error_report(fe, rom, basis, r, params);
    return {std::move(rom), rep};
}

//////////////////////////////////////////////////////////////////////
//
// Drivers
//
//////////////////////////////////////////////////////////////////////

// FE trajectory (every trajectory_stride-th level) and the energy balance
inline std::vector<ResultTable> run_solve(const RunConfig& cfg)
{
    const WaveParams params = cfg.params();
    const Trajectory fe = fe_trajectory(cfg, params);

    ResultTable traj{"trajectory", {"t"}, {}, {}};
    for (std::size_t i = 1; i <= fe.space.n_dof(); ++i)
        traj.columns.push_back("u_" + std::to_string(i));
    for (std::size_t j = 0; j < fe.size(); j += cfg.trajectory_stride) {
        std::vector<Cell> row{fe.grid.time(j)};
        for (double v : fe.state(j))
            row.emplace_back(v);
        traj.add_row(std::move(row));
    }

    ResultTable en{"energy", {"t", "energy", "rate", "dissipation", "residual"}, {}, {}};
    en.notes.push_back("rate = (E^{n+1} - E^n)/dt, dissipation = -D |d ubar|^2 - G |d grad ubar|^2");
    for (const auto& b : energy_balance(fe, params))
        en.add_row({b.time, b.energy, b.rate, b.dissipation, b.rate - b.dissipation});
    return {traj, en};
}

// POD singular values for each configured method
inline std::vector<ResultTable> run_singular_values(const RunConfig& cfg)
{
    const Trajectory fe = fe_trajectory(cfg, cfg.params());
    std::vector<ResultTable> out;
    for (PodMethod m : cfg.pod_method) {
        ResultTable t{"singvals_" + to_string(m), {"k", "sigma", "lambda", "retained"}, {}, {}};
        PodBasis basis;
        try {
            basis = training_basis(fe, cfg.training_time(), m, cfg.pod_options());
        }
        catch (const std::invalid_argument&) {
            // zero data: empty spectrum
            t.notes.push_back("no positive singular values");
            out.push_back(std::move(t));
            continue;
        }
        for (std::size_t k = 0; k < basis.spectrum.size(); ++k) {
            const double lam = basis.spectrum[k];
            t.add_row({static_cast<long long>(k + 1), std::sqrt(std::max(lam, 0.0)), lam,
                       static_cast<long long>(k < basis.rank() ? 1 : 0)});
        }
        out.push_back(std::move(t));
    }
    return out;
}

// actual data error vs. tail formula for every method, r, norm and projector
inline ResultTable run_error_formulas(const RunConfig& cfg)
{
    const Trajectory fe = fe_trajectory(cfg, cfg.params());
    const std::size_t n_train = levels_for(cfg.training_time(), cfg.dt);
    const Trajectory train = n_train == fe.size() ? fe : fe.head(n_train);
    ResultTable t{"error_formulas",
                  {"method", "r", "rank", "norm", "projector", "actual", "formula", "relative_gap"},
                  {},
                  {"relative_gap = |actual - formula| / max(formula, lambda_1 * 1e-6)"}};
    for (PodMethod m : cfg.pod_method) {
        const PodDataSet data = build_dataset(train, m);
        const PodBasis basis = compute_basis(data, train.space, cfg.pod_options());
        for (std::size_t r : cfg.r_list) {
            if (r > basis.rank()) {
                t.notes.push_back(to_string(m) + ": r = " + std::to_string(r) + " exceeds the rank " +
                                  std::to_string(basis.rank()) + ", skipped");
                continue;
            }
            for (Norm nm : {Norm::L2, Norm::H10})
                for (Projector pj : {Projector::Orthogonal, Projector::Ritz}) {
                    const double a = data_error_actual(data, basis, r, train.space, nm, pj);
                    const double f = data_error_formula(basis, r, train.space, nm, pj);
                    const double gap = std::abs(a - f) / std::max(f, basis.eigenvalues.front() * 1e-6);
                    t.add_row({to_string(m), static_cast<long long>(r), static_cast<long long>(basis.rank()),
                               to_string(nm), to_string(pj), a, f, gap});
                }
        }
    }
    return t;
}

inline std::vector<Cell> rom_row_cells(const RomErrorReport& rep)
{
    return {rep.max_pointwise_l2, rep.max_l2,        rep.max_energy,
            rep.final_time_l2,    rep.ratio_energy,  rep.ratio_pointwise};
}

inline const std::vector<std::string>& rom_columns()
{
    static const std::vector<std::string> cols{"max_l2_sq", "max_l2",       "max_energy",
                                               "final_l2",  "ratio_energy", "ratio_pointwise"};
    return cols;
}

// ROM errors and bound ratios over a damping sweep
inline ResultTable run_rom_sweep(const RunConfig& cfg)
{
    ResultTable t{"rom_sweep_" + cfg.sweep_parameter, {"parameter", "value", "method", "r", "rank"}, {}, {}};
    for (const auto& c : rom_columns())
        t.columns.push_back(c);
    t.notes.push_back("max_l2_sq = max_n |e^n|^2, max_energy = max_{n>=2} E(e^n), final_l2 = |e^N|; "
                      "ratios are nan when the bound denominator is below 1e-14");
    std::vector<double> values = cfg.sweep_values;
    std::sort(values.begin(), values.end());
    for (double v : values) {
        WaveParams params = cfg.params();
        (cfg.sweep_parameter == "D" ? params.D : params.G) = v;
        const Trajectory fe = fe_trajectory(cfg, params);
        for (PodMethod m : cfg.pod_method) {
            const PodBasis basis = training_basis(fe, cfg.training_time(), m, cfg.pod_options());
            for (std::size_t r : cfg.r_list) {
                if (r > basis.rank()) {
                    t.notes.push_back(cfg.sweep_parameter + " = " + format_real(v) + ", " + to_string(m) +
                                      ": r = " + std::to_string(r) + " exceeds the rank, skipped");
                    continue;
                }
                const RomRun run = rom_run(fe, basis, r, params);
                std::vector<Cell> row{cfg.sweep_parameter, v, to_string(m), static_cast<long long>(r),
                                      static_cast<long long>(basis.rank())};
                for (auto& c : rom_row_cells(run.report))
                    row.push_back(std::move(c));
                t.add_row(std::move(row));
            }
        }
    }
    return t;
}

// FE and ROM profiles at the requested times, on all mesh nodes
inline ResultTable run_profiles(const RunConfig& cfg)
{
    const WaveParams params = cfg.params();
    const Trajectory fe = fe_trajectory(cfg, params);
    ResultTable t{"profiles", {"method", "r", "t", "x", "fe", "rom"}, {}, {}};
    std::vector<std::size_t> levels;
    for (double time : cfg.profile_times) {
        if (time > cfg.T * (1.0 + 1e-12))
            throw ConfigError("profile time " + format_real(time) + " lies beyond T");
        const double idx = time / cfg.dt;
        if (std::abs(idx - std::round(idx)) > 1e-9 * std::max(1.0, idx))
            throw ConfigError("profile time " + format_real(time) + " is not a multiple of dt");
        levels.push_back(static_cast<std::size_t>(std::llround(idx)));
    }
    for (PodMethod m : cfg.pod_method) {
        const PodBasis basis = training_basis(fe, cfg.training_time(), m, cfg.pod_options());
        for (std::size_t r : cfg.r_list) {
            if (r > basis.rank())
                continue;
            const RomRun run = rom_run(fe, basis, r, params);
            for (std::size_t j : levels)
                for (std::size_t i = 0; i <= fe.space.n_elements(); ++i) {
                    const double x = fe.space.node(i);
                    const bool interior = i > 0 && i < fe.space.n_elements();
                    t.add_row({to_string(m), static_cast<long long>(r), fe.grid.time(j), x,
                               interior ? fe.state(j)[i - 1] : 0.0, interior ? run.rom.state(j)[i - 1] : 0.0});
                }
        }
    }
    return t;
}

// final-time ROM error with the basis trained on [0, T_train]
inline ResultTable run_train_interval(const RunConfig& cfg)
{
    const WaveParams params = cfg.params();
    const Trajectory fe = fe_trajectory(cfg, params);
    ResultTable t{"train_interval",
                  {"T_train", "snapshots", "method", "r", "rank", "final_l2", "final_l2_sq"},
                  {},
                  {"final_l2 = |u_h(T) - u_r(T)| in L2"}};
    for (double tt : cfg.train_list) {
        const double steps = tt / cfg.dt;
        if (tt > cfg.T * (1.0 + 1e-12) || std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) ||
            std::round(steps) < 2.0)
            throw ConfigError("training interval " + format_real(tt) + " must lie in (0, T] and hold at least 2 steps of dt");
        const std::size_t n = levels_for(tt, cfg.dt);
        for (PodMethod m : cfg.pod_method) {
            const PodBasis basis = training_basis(fe, tt, m, cfg.pod_options());
            for (std::size_t r : cfg.r_list) {
                if (r > basis.rank()) {
                    t.notes.push_back("T_train = " + format_real(tt) + ", " + to_string(m) + ": r = " +
                                      std::to_string(r) + " exceeds the rank, skipped");
                    continue;
                }
                const RomRun run = rom_run(fe, basis, r, params);
                t.add_row({tt, static_cast<long long>(n), to_string(m), static_cast<long long>(r),
                           static_cast<long long>(basis.rank()), run.report.final_time_l2,
                           run.report.final_time_l2 * run.report.final_time_l2});
            }
        }
    }
    return t;
}

// final-time L2 error against the series solution, with observed orders in dt
inline ResultTable run_convergence(const RunConfig& cfg)
{
    const WaveParams params = cfg.params();
    const ScalarFunction u0 =
        cfg.conv_initial == "sine" ? ScalarFunction(sine_initial_displacement) : ScalarFunction(default_initial_displacement);
    SeriesOptions so;
    so.k_max = cfg.series_terms;
    const AnalyticSeriesSolution exact(params, u0, zero_function, so);
    const ScalarFunction at_end = exact.at_time(cfg.conv_T);

    ResultTable t{"convergence", {"n_elements", "h", "dt", "steps", "final_l2_error", "observed_order"}, {}, {}};
    t.notes.push_back("observed_order = log2-type rate between consecutive dt at fixed h");
    for (std::size_t ne : cfg.conv_elements) {
        const FemSpace space(ne);
        double prev_err = std::numeric_limits<double>::quiet_NaN();
        double prev_dt = std::numeric_limits<double>::quiet_NaN();
        for (double step : cfg.conv_dt_list) {
            const TimeGrid grid(cfg.conv_T, levels_for(cfg.conv_T, step));
            const Trajectory fe = solve(space, grid, params, u0, zero_function);
            const double err = space.l2_error(fe.state(fe.size() - 1), at_end);
            const double order = std::isnan(prev_err) ? std::numeric_limits<double>::quiet_NaN()
                                                      : std::log(prev_err / err) / std::log(prev_dt / step);
            t.add_row({static_cast<long long>(ne), space.h(), step, static_cast<long long>(grid.size() - 1), err,
                       order});
            prev_err = err;
            prev_dt = step;
        }
    }
    return t;
}

//////////////////////////////////////////////////////////////////////
//
// Invariant suite
//
//////////////////////////////////////////////////////////////////////

struct CheckResult {
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

inline ResultTable run_check(const RunConfig& cfg, std::vector<CheckResult>* results = nullptr)
{
    std::vector<CheckResult> checks;
    auto add = [&](std::string name, double value, double tol) {
        checks.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
    };

    const WaveParams params = cfg.params();
    const Trajectory fe = fe_trajectory(cfg, params);

    // per-step energy balance
    {
        const double e2 = energy(fe, params.c, 1);
        double worst = 0.0;
        for (const auto& b : energy_balance(fe, params))
            worst = std::max(worst, std::abs(b.rate - b.dissipation));
        add("fe_energy_balance", e2 > 0.0 ? worst / e2 : worst, 1e-9);
    }

    // error formulas, orthonormality, ROM split and ROM energy balance
    for (PodMethod m : cfg.pod_method) {
        const PodDataSet data = build_dataset(fe, m);
        const PodBasis basis = compute_basis(data, fe.space, cfg.pod_options());
        const std::string tag = to_string(m);

        double defect = 0.0;
        for (std::size_t i = 0; i < basis.rank(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                defect = std::max(defect, std::abs(fe.space.l2_inner(basis.mode(i), basis.mode(j)) - (i == j ? 1.0 : 0.0)));
        add(tag + "_mode_orthonormality", defect, 1e-10);

        double trace = 0.0;
        for (std::size_t j = 0; j < data.size(); ++j)
            trace += data.weights[j] * fe.space.l2_norm_sq(data.vectors.row(j));
        double lam_sum = 0.0;
        for (double l : basis.spectrum)
            lam_sum += l;
        add(tag + "_eigenvalue_trace", std::abs(lam_sum - trace) / trace, 1e-10);

        for (std::size_t r : cfg.r_list) {
            if (r > basis.rank())
                continue;
            for (Norm nm : {Norm::L2, Norm::H10})
                for (Projector pj : {Projector::Orthogonal, Projector::Ritz}) {
                    const double a = data_error_actual(data, basis, r, fe.space, nm, pj);
                    const double f = data_error_formula(basis, r, fe.space, nm, pj);
                    add(tag + "_error_formula_r" + std::to_string(r) + "_" + to_string(nm) + "_" + to_string(pj),
                        std::abs(a - f) / std::max(f, basis.eigenvalues.front() * 1e-6), 1e-6);
                }
        }

        const std::size_t r = std::min(cfg.r_list.front(), basis.rank());
        const RomRun run = rom_run(fe, basis, r, params);
        double scale = 0.0;
        for (std::size_t j = 0; j < fe.size(); ++j)
            scale = std::max(scale, norm_inf(fe.state(j)));
        add(tag + "_rom_error_split_r" + std::to_string(r), run.report.split_residual / std::max(scale, 1e-300), 1e-12);
        const double e2 = energy(run.rom, params.c, 1);
        double worst = 0.0;
        for (const auto& b : energy_balance(run.rom, params))
            worst = std::max(worst, std::abs(b.rate - b.dissipation));
        add(tag + "_rom_energy_balance_r" + std::to_string(r), e2 > 0.0 ? worst / e2 : worst, 1e-10);
    }

    // representation of sequences through second difference quotients
    {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_int_distribution<std::size_t> len(3, 100);
        std::uniform_int_distribution<std::size_t> dim(1, 20);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = len(rng);
            const std::size_t d = dim(rng);
            const double dt = 1.0 / static_cast<double>(n - 1);
            DenseMatrix z(n, d);
            for (double& v : z.entries())
                v = unit(rng);
            DenseMatrix ddq(n - 1, d);
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const Vector q = diff::second(z.row(i - 1), z.row(i), z.row(i + 1), dt);
                std::copy(q.begin(), q.end(), ddq.row(i).begin());
            }
            const Vector dz1 = diff::forward(z.row(0), z.row(1), dt);
            for (std::size_t k = 3; k <= n; ++k) {
                const Vector zk = telescoped_state(z.row(0), dz1, ddq, dt, k);
                const Vector dz = telescoped_difference(dz1, ddq, dt, k - 1);
                const Vector dz_ref = diff::forward(z.row(k - 2), z.row(k - 1), dt);
                const double zs = std::max(1.0, norm_inf(z.row(k - 1)));
                const double ds = std::max(1.0, norm_inf(dz_ref));
                worst = std::max(worst, norm_inf(subtract(zk, z.row(k - 1))) / zs);
                worst = std::max(worst, norm_inf(subtract(dz, dz_ref)) / ds);
            }
        }
        add("telescoping_identities", worst, 1e-11);
    }

    ResultTable t{"check", {"name", "value", "tolerance", "pass"}, {}, {}};
    for (const auto& c : checks)
        t.add_row({c.name, c.value, c.tolerance, static_cast<long long>(c.pass ? 1 : 0)});
    if (results)
        *results = std::move(checks);
    return t;
}

}  // namespace podwave

#endif  // PODWAVE_EXPERIMENTS_HPP

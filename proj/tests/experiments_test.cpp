#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "podwave/cli.hpp"
#include "podwave/experiments.hpp"

using namespace podwave;
namespace fs = std::filesystem;

namespace {

// a configuration small enough to run every command in well under a second
RunConfig tiny()
{
    RunConfig cfg;
    cfg.set("n_elements", "20");
    cfg.set("dt", "1/100");
    cfg.set("T", "0.5");
    cfg.set("r_list", "2,4");
    cfg.set("sweep_values", "0, 0.01");
    cfg.set("profile_times", "0, 0.25, 0.5");
    cfg.set("train_list", "0.5, 0.25");
    cfg.set("conv_elements", "50");
    cfg.set("conv_dt_list", "1/20, 1/40");
    cfg.set("series_terms", "20");
    cfg.set("trajectory_stride", "10");
    cfg.validate();
    return cfg;
}

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("podwave_test_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "podwave");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text)
        *out_text = out.str();
    if (err_text)
        *err_text = err.str();
    return rc;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

}  // namespace

TEST(Parse, Reals)
{
    EXPECT_DOUBLE_EQ(parse_real("1/800"), 1.0 / 800.0);
    EXPECT_DOUBLE_EQ(parse_real(" 2.5e-3 "), 2.5e-3);
    EXPECT_DOUBLE_EQ(parse_real("-3"), -3.0);
    EXPECT_THROW(parse_real("abc"), ConfigError);
    EXPECT_THROW(parse_real(""), ConfigError);
    EXPECT_THROW(parse_real("1/0"), ConfigError);
    EXPECT_THROW(parse_real("1.0x"), ConfigError);
    EXPECT_EQ(parse_real_list("1/100, 0.5,2"), (std::vector<double>{0.01, 0.5, 2.0}));
}

TEST(Parse, Counts)
{
    EXPECT_EQ(parse_count("40"), 40u);
    EXPECT_EQ(parse_count_list("10, 20,40"), (std::vector<std::size_t>{10, 20, 40}));
    EXPECT_THROW(parse_count("-1"), ConfigError);
    EXPECT_THROW(parse_count("2.5"), ConfigError);
}

TEST(Parse, FormatRealRoundTrips)
{
    EXPECT_EQ(format_real(10.0), "10");
    EXPECT_EQ(format_real(0.1), "0.1");
    EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
    for (double v : {1.0 / 800.0, 1e-22, 3.141592653589793, -7.25e300})
        EXPECT_EQ(parse_real(format_real(v)), v);
}

TEST(RunConfig, DefaultsAreValid)
{
    const RunConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.training_time(), cfg.T);
    EXPECT_EQ(cfg.entries().size() + 1, RunConfig::keys().size());  // output_dir is not echoed
}

TEST(RunConfig, ConfigTextWithComments)
{
    RunConfig cfg;
    apply_config_text(cfg, "# header\n\n  dt = 1/400  # trailing\nT=2\npod_method = dq1, ddq\nG = 0.001\n");
    EXPECT_DOUBLE_EQ(cfg.dt, 1.0 / 400.0);
    EXPECT_DOUBLE_EQ(cfg.T, 2.0);
    EXPECT_EQ(cfg.pod_method, (std::vector<PodMethod>{PodMethod::DQ1, PodMethod::DDQ}));
    EXPECT_DOUBLE_EQ(cfg.G, 0.001);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(RunConfig, ConfigTextErrors)
{
    RunConfig cfg;
    EXPECT_THROW(apply_config_text(cfg, "no_such_key = 1\n"), ConfigError);
    EXPECT_THROW(apply_config_text(cfg, "dt 0.1\n"), ConfigError);
    EXPECT_THROW(apply_config_text(cfg, "pod_method = standard, pca\n"), ConfigError);
    try {
        apply_config_text(cfg, "T = 1\n\nD = oops\n", "run.cfg");
        FAIL() << "expected a ConfigError";
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("run.cfg:3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(apply_config_file(cfg, "/nonexistent/podwave.cfg"), ConfigError);
}

TEST(RunConfig, ValidationRejectsInconsistentSettings)
{
    auto rejects = [](const std::string& key, const std::string& value) {
        RunConfig cfg;
        cfg.set(key, value);
        EXPECT_THROW(cfg.validate(), ConfigError) << key << " = " << value;
    };
    rejects("dt", "0.3");
    rejects("dt", "0");
    rejects("T", "-1");
    rejects("T_train", "20");
    rejects("T_train", "0.0001");
    rejects("n_elements", "1");
    rejects("c", "0");
    rejects("D", "-0.1");
    rejects("r_list", "10,0");
    rejects("sweep_parameter", "c");
    rejects("conv_dt_list", "0.3");
    rejects("conv_initial", "square");
    rejects("rank_tolerance", "2");
    rejects("pod_solver", "qr");
}

TEST(ResultTable, RowSizeAndLookup)
{
    ResultTable t{"demo", {"a", "b"}, {}, {}};
    EXPECT_THROW(t.add_row({1.0}), std::logic_error);
    t.add_row({0.5, std::string("x")});
    EXPECT_EQ(t.real(0, "a"), 0.5);
    EXPECT_EQ(t.text(0, "b"), "x");
    EXPECT_THROW(t.column("c"), std::out_of_range);
    EXPECT_THROW(t.real(0, "b"), std::invalid_argument);
}

TEST(ResultTable, CsvLayout)
{
    RunConfig cfg;
    ResultTable t{"demo", {"k", "v", "m"}, {}, {"a note"}};
    t.add_row({3LL, 0.1, std::string("ddq")});
    t.add_row({4LL, std::numeric_limits<double>::quiet_NaN(), std::string("standard")});
    std::ostringstream out;
    write_csv(out, t, "demo-cmd", cfg);

    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# podwave demo-cmd");
    for (const auto& [k, v] : cfg.entries()) {
        std::getline(in, line);
        EXPECT_EQ(line, "# " + k + " = " + v);
    }
    std::getline(in, line);
    EXPECT_EQ(line, "# a note");
    std::getline(in, line);
    EXPECT_EQ(line, "k,v,m");
    std::getline(in, line);
    EXPECT_EQ(line, "3,1.0000000000000001e-01,ddq");
    std::getline(in, line);
    EXPECT_EQ(line, "4,nan,standard");
    EXPECT_FALSE(std::getline(in, line));
}

TEST(Commands, SolveWritesTrajectoryAndEnergy)
{
    const RunConfig cfg = tiny();
    const auto tables = run_solve(cfg);
    ASSERT_EQ(tables.size(), 2u);
    EXPECT_EQ(tables[0].columns.size(), 1 + 19u);
    EXPECT_EQ(tables[0].rows.size(), 6u);  // levels 0, 10, ..., 50
    EXPECT_EQ(tables[1].rows.size(), 49u);
    for (std::size_t i = 0; i < tables[1].rows.size(); ++i)
        EXPECT_LE(std::abs(tables[1].real(i, "residual")), 1e-9);
}

TEST(Commands, SingularValuesDescendAndMarkRank)
{
    const auto tables = run_singular_values(tiny());
    ASSERT_EQ(tables.size(), 2u);
    for (const auto& t : tables) {
        ASSERT_FALSE(t.rows.empty());
        for (std::size_t i = 1; i < t.rows.size(); ++i)
            EXPECT_LE(t.real(i, "sigma"), t.real(i - 1, "sigma"));
        EXPECT_EQ(t.real(0, "retained"), 1.0);
    }
}

TEST(Commands, ErrorFormulasAgree)
{
    const ResultTable t = run_error_formulas(tiny());
    EXPECT_EQ(t.rows.size(), 2u * 2u * 4u);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        EXPECT_LE(t.real(i, "relative_gap"), 1e-6);
}

TEST(Commands, RomSweepRows)
{
    RunConfig cfg = tiny();
    cfg.set("sweep_parameter", "G");
    const ResultTable t = run_rom_sweep(cfg);
    EXPECT_EQ(t.name, "rom_sweep_G");
    EXPECT_EQ(t.rows.size(), 2u * 2u * 2u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        EXPECT_NEAR(t.real(i, "max_l2") * t.real(i, "max_l2"), t.real(i, "max_l2_sq"), 1e-15);
        // observed bound constants: nan only at full rank
        const double ratio = t.real(i, "ratio_energy");
        if (!std::isnan(ratio)) {
            EXPECT_TRUE(std::isfinite(ratio));
            EXPECT_GT(ratio, 0.0);
        }
    }
}

TEST(Commands, ProfilesVanishAtBoundary)
{
    const ResultTable t = run_profiles(tiny());
    EXPECT_EQ(t.rows.size(), 2u * 2u * 3u * 21u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double x = t.real(i, "x");
        if (x == 0.0 || x == 1.0) {
            EXPECT_EQ(t.real(i, "fe"), 0.0);
            EXPECT_EQ(t.real(i, "rom"), 0.0);
        }
    }
    RunConfig bad = tiny();
    bad.set("profile_times", "0.7");
    EXPECT_THROW(run_profiles(bad), ConfigError);
    bad.set("profile_times", "0.013");
    EXPECT_THROW(run_profiles(bad), ConfigError);
}

TEST(Commands, TrainIntervalRows)
{
    const ResultTable t = run_train_interval(tiny());
    ASSERT_EQ(t.rows.size(), 2u * 2u * 2u);
    EXPECT_EQ(t.real(0, "snapshots"), 51.0);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        EXPECT_DOUBLE_EQ(t.real(i, "final_l2_sq"), t.real(i, "final_l2") * t.real(i, "final_l2"));
    RunConfig bad = tiny();
    bad.set("train_list", "1");
    EXPECT_THROW(run_train_interval(bad), ConfigError);
}

TEST(Commands, ConvergenceRows)
{
    const ResultTable t = run_convergence(tiny());
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_TRUE(std::isnan(t.real(0, "observed_order")));
    EXPECT_LT(t.real(1, "final_l2_error"), t.real(0, "final_l2_error"));
    EXPECT_GT(t.real(1, "observed_order"), 1.5);
}

TEST(Commands, CheckPassesOnSmallRun)
{
    std::vector<CheckResult> results;
    run_check(tiny(), &results);
    ASSERT_FALSE(results.empty());
    for (const auto& r : results)
        EXPECT_TRUE(r.pass) << r.name << " = " << r.value;
}

TEST(Cli, ExitCodes)
{
    ScratchDir dir("exit");
    const fs::path cfg = dir.path() / "run.cfg";
    write_file(cfg, "n_elements = 20\ndt = 1/100\nT = 0.5\nr_list = 2\n");
    const std::string out_dir = (dir.path() / "out").string();

    std::string out, err;
    EXPECT_EQ(cli({"check", "--config", cfg.string(), "--output_dir", out_dir}, &out, &err), 0) << err;
    EXPECT_NE(out.find("PASS fe_energy_balance"), std::string::npos);
    EXPECT_TRUE(fs::exists(fs::path(out_dir) / "check.csv"));

    EXPECT_EQ(cli({"solve", "--bogus", "1"}), 1);
    EXPECT_EQ(cli({"no-such-command"}), 1);
    EXPECT_EQ(cli({}), 1);
    EXPECT_EQ(cli({"solve", "--config", (dir.path() / "missing.cfg").string()}), 1);
    EXPECT_EQ(cli({"solve", "--config", cfg.string(), "--dt", "0.3"}, nullptr, &err), 1);
    EXPECT_NE(err.find("configuration error"), std::string::npos);
    EXPECT_EQ(cli({"profiles", "--config", cfg.string(), "--profile_times", "0.9", "--output_dir", out_dir}), 1);
}

TEST(Cli, OutputDirectoryPrecedence)
{
    ScratchDir dir("env");
    const fs::path env_dir = dir.path() / "from_env";
    const fs::path opt_dir = dir.path() / "from_option";
    const fs::path cfg = dir.path() / "run.cfg";
    write_file(cfg, "n_elements = 10\ndt = 1/50\nT = 0.2\n");

    ::setenv("PODWAVE_OUTPUT_DIR", env_dir.c_str(), 1);
    EXPECT_EQ(cli({"solve", "--config", cfg.string()}), 0);
    EXPECT_TRUE(fs::exists(env_dir / "energy.csv"));
    EXPECT_EQ(cli({"solve", "--config", cfg.string(), "--output_dir", opt_dir.string()}), 0);
    EXPECT_TRUE(fs::exists(opt_dir / "energy.csv"));
    ::unsetenv("PODWAVE_OUTPUT_DIR");
}

TEST(Cli, RepeatedRunsAreByteIdentical)
{
    ScratchDir dir("det");
    const fs::path cfg = dir.path() / "run.cfg";
    write_file(cfg, "n_elements = 20\ndt = 1/100\nT = 0.5\nr_list = 2, 4\nsweep_values = 0.001, 0.01\n");
    for (const char* sub : {"a", "b"})
        ASSERT_EQ(cli({"rom-sweep", "--config", cfg.string(), "--output_dir", (dir.path() / sub).string()}), 0);
    const std::string a = slurp(dir.path() / "a" / "rom_sweep_D.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir.path() / "b" / "rom_sweep_D.csv"));
}

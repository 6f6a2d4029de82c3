#include "gaspower/error.hpp"
#include "gaspower/runner.hpp"
#include "gaspower/scenario.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gaspower;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = GASPOWER_SCENARIO_DIR;

const char* const kSmall = R"(name: small
law: gamma(1, 1.4)
gas_nodes:
  - {Node: A}
  - {Node: B}
pipes:
  - {Pipe: AB, From: A, To: B, Length: 1, Diameter: 1}
boundary:
  - {Node: A, Density: 1.2}
  - {Node: B, Outflow: 0.1}
initial: {uniform: {rho: 1.2, q: 0.1}}
numerics: {scheme: cweno3, dt: 0.002, dx: 0.02, end_time: 0.1}
outputs:
  series: [density@B, inflow@A, mass]
  sample_interval: 0.01
  profiles:
    - {id: rho, pipes: [AB]}
)";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

SchemaError schema_error(const std::string& text) {
    try {
        (void)parse_scenario(text);
    } catch (const SchemaError& e) {
        return e;
    }
    ADD_FAILURE() << "accepted:\n" << text;
    return SchemaError("", 0, "");
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gaspower_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

}  // namespace

TEST(Scenario, LoadsGasPowerScenarioInSiAndPerUnit) {
    const auto s = load_scenario(kScenarios / "gaslib9.scn");
    EXPECT_EQ(s.name, "gaslib9");
    EXPECT_EQ(s.gas_nodes.size(), 6u);
    EXPECT_EQ(s.pipes.size(), 7u);
    EXPECT_DOUBLE_EQ(s.pipes[0].geometry.length, 20322.0);
    EXPECT_DOUBLE_EQ(s.pipes[0].geometry.diameter, 0.6);
    EXPECT_DOUBLE_EQ(s.pipes[0].geometry.roughness, 5e-5);
    const auto& s5 = s.gas_nodes[1];
    EXPECT_EQ(s5.kind, NodeKind::pressure);
    EXPECT_DOUBLE_EQ(s5.pressure(0.0), 60e5);
    EXPECT_NEAR(s.gas_nodes[5].extraction(0.0), 277.63695628252856, 1e-10);
    ASSERT_TRUE(s.gas_nodes[3].compressor.has_value());
    EXPECT_EQ(s.gas_nodes[3].compressor->suction_pipe, "P20");
    EXPECT_EQ(s.grid.buses.size(), 9u);
    EXPECT_DOUBLE_EQ(s.grid.buses[1].P, 1.63);
    EXPECT_DOUBLE_EQ(s.grid.buses[4].Q, -0.3);
    EXPECT_EQ(s.grid.lines.size(), 9u);
    ASSERT_TRUE(s.link.has_value());
    EXPECT_EQ(s.link->gas_node, "S4");
    EXPECT_DOUBLE_EQ(s.schedules[0].P(5400.0), -1.8);
    EXPECT_EQ(s.initial.kind, InitialSpec::Kind::stationary);
    EXPECT_DOUBLE_EQ(s.numerics[0].end_time, 86400.0);
    EXPECT_TRUE(s.source.friction);
}

TEST(Scenario, RoundTripsThroughText) {
    for (const char* name : {"validation.scn", "pressure_laws.scn", "gaslib9.scn"}) {
        const auto s = load_scenario(kScenarios / name);
        EXPECT_EQ(parse_scenario(dump_scenario(s)), s) << name;
    }
    const auto small = parse_scenario(kSmall);
    EXPECT_EQ(parse_scenario(dump_scenario(small)), small);
}

TEST_F(TempDir, SaveAndLoad) {
    const auto s = parse_scenario(kSmall);
    fs::create_directories(dir_);
    save_scenario(s, dir_ / "copy.scn");
    EXPECT_EQ(load_scenario(dir_ / "copy.scn"), s);
    try {
        (void)load_scenario(dir_ / "missing.scn");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::io);
    }
}

TEST(Scenario, EmptyDocument) {
    const auto e = schema_error("");
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.category(), ErrorCategory::schema);
}

TEST(Scenario, UnknownKeyNamesItsLine) {
    std::string text = kSmall;
    text.replace(text.find("  - {Pipe: AB"), 0, "  - {Pipe: XY, From: A, To: B, Lenght: 1}\n");
    const auto e = schema_error(text);
    EXPECT_EQ(e.line(), 7);
    EXPECT_NE(std::string(e.what()).find("Lenght"), std::string::npos);
}

TEST(Scenario, UnknownUnit) {
    std::string text = kSmall;
    text.replace(text.find("Length: 1,"), 10, "Length: 1 furlong,");
    const auto e = schema_error(text);
    EXPECT_EQ(e.line(), 7);
}

TEST(Scenario, DanglingReference) {
    std::string text = kSmall;
    text.replace(text.find("To: B"), 5, "To: C");
    const auto e = schema_error(text);
    EXPECT_EQ(e.line(), 7);
}

TEST(Scenario, BadSeriesId) {
    std::string text = kSmall;
    text.replace(text.find("density@B"), 9, "density@Q");
    EXPECT_EQ(schema_error(text).line(), 14);
}

TEST(Scenario, StationaryStartNeedsBoxScheme) {
    std::string text = kSmall;
    text.replace(text.find("initial: {uniform: {rho: 1.2, q: 0.1}}"), 38, "initial: stationary");
    (void)schema_error(text);
}

TEST(Scenario, NonPositiveStep) {
    std::string text = kSmall;
    text.replace(text.find("dt: 0.002"), 9, "dt: -1");
    EXPECT_EQ(schema_error(text).line(), 12);
}

TEST(Variants, ExpandSweeps) {
    const auto v = expand_variants(load_scenario(kScenarios / "validation.scn"));
    ASSERT_EQ(v.size(), 6u);
    EXPECT_EQ(v[0].label, "cweno3_eps0.25");
    EXPECT_EQ(v[5].label, "ibox_eps3.25");
    const auto laws = expand_variants(load_scenario(kScenarios / "pressure_laws.scn"));
    ASSERT_EQ(laws.size(), 4u);
    EXPECT_EQ(laws[0].label, "cweno3_gamma");
}

TEST(Output, FileStems) {
    EXPECT_EQ(file_stem("pressure@S25"), "pressure_S25");
    EXPECT_EQ(file_stem("a b/c.d-e"), "a_b_c.d-e");
}

TEST_F(TempDir, TimeSeriesCsv) {
    const std::array out{TimeSeriesOutput{"P@N1", {0.0, 0.5}, {0.1, 1.0 / 3.0}}};
    const auto files = write_timeseries(out, dir_, true);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(read_file(dir_ / "P_N1.csv"), "t,value\n0,0.10000000000000001\n0.5,0.33333333333333331\n");
    EXPECT_TRUE(fs::exists(dir_ / "P_N1.svg"));
}

TEST_F(TempDir, TimeSeriesRejectsBadInput) {
    const std::array dup{TimeSeriesOutput{"x", {0.0}, {1.0}}, TimeSeriesOutput{"x", {0.0}, {2.0}}};
    const std::array clash{TimeSeriesOutput{"a@b", {0.0}, {1.0}}, TimeSeriesOutput{"a_b", {0.0}, {2.0}}};
    const std::array back{TimeSeriesOutput{"x", {1.0, 0.0}, {1.0, 2.0}}};
    const std::array ragged{TimeSeriesOutput{"x", {0.0, 1.0}, {1.0}}};
    for (auto span : {std::span<const TimeSeriesOutput>(dup), std::span<const TimeSeriesOutput>(clash),
                      std::span<const TimeSeriesOutput>(back), std::span<const TimeSeriesOutput>(ragged),
                      std::span<const TimeSeriesOutput>()}) {
        try {
            (void)write_timeseries(span, dir_);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.category(), ErrorCategory::config);
        }
    }
}

TEST_F(TempDir, UnwritableDirectoryIsIoError) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "file") << "x";
    const std::array out{TimeSeriesOutput{"x", {0.0}, {1.0}}};
    try {
        (void)write_timeseries(out, dir_ / "file" / "sub");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::io);
    }
}

TEST_F(TempDir, ProfileCsv) {
    const std::array prof{ProfileOutput{"rho", 0.1, {0.25, 0.75}, {1.0, 2.0}}};
    (void)write_profiles(prof, dir_);
    EXPECT_EQ(read_file(dir_ / "rho.csv"), "x,rho\n0.25,1\n0.75,2\n");
}

TEST_F(TempDir, RunIsDeterministic) {
    const auto s = parse_scenario(kSmall);
    const auto v = expand_variants(s).front();
    const auto a = simulate(s, v, RunMode::gas);
    const auto b = simulate(s, v, RunMode::gas);
    (void)write_result(s, a, dir_ / "a", false);
    (void)write_result(s, b, dir_ / "b", false);
    for (const char* f : {"density_B.csv", "inflow_A.csv", "mass.csv", "rho.csv"}) {
        EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
        EXPECT_FALSE(read_file(dir_ / "a" / f).empty()) << f;
    }
    EXPECT_EQ(a.series[0].times.size(), 11u);
    EXPECT_LT(a.stats.max_mass_defect, 1e-12);
}

TEST(Runner, OutputDirectoryOverride) {
    const auto s = parse_scenario(kSmall);
    ::setenv("GASPOWER_OUTPUT_DIR", "/tmp/elsewhere", 1);
    EXPECT_EQ(output_directory(s), fs::path("/tmp/elsewhere"));
    ::unsetenv("GASPOWER_OUTPUT_DIR");
    EXPECT_EQ(output_directory(s), fs::path("output"));
}

TEST(Runner, PowerFlowOfScenario) {
    const auto s = load_scenario(kScenarios / "gaslib9.scn");
    EXPECT_NEAR(run_powerflow(s).P[0], 0.7195469626174426, 1e-9);
    EXPECT_NEAR(run_powerflow(s, 7200.0).P[0], 1.648705188499976, 1e-9);
    EXPECT_THROW((void)run_powerflow(parse_scenario(kSmall)), Error);
}

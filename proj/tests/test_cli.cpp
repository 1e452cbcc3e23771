#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <unistd.h>

#include "lambda_lab/cli.hpp"
#include "lambda_lab/reference_values.hpp"

using namespace lambda_lab;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("lambda_lab_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const nlohmann::json& j) {
        const auto p = (dir_ / name).string();
        std::ofstream(p) << j.dump();
        return p;
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::pair<int, nlohmann::json> exec(const RunConfig& c) {
        std::ostringstream out, log;
        const int code = run(c, out, log);
        return {code, nlohmann::json::parse(out.str())};
    }

    fs::path dir_;
};

const nlohmann::json identity_json = {{"kmin", 1}, {"coeffs", {{1.0, 0.0}}}, {"rin", 0.0}, {"rout", 1.0}};

}  // namespace

TEST(CliParse, Lengths) {
    EXPECT_DOUBLE_EQ(parse_length("1/256"), 1.0 / 256);
    EXPECT_DOUBLE_EQ(parse_length("0.04"), 0.04);
    EXPECT_THROW(parse_length("1/0"), ValidationError);
    EXPECT_THROW(parse_length("abc"), ValidationError);
    const auto s = parse_schedule("0.04,0.02,1/100");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_DOUBLE_EQ(s[2], 0.01);
}

TEST_F(CliTest, Models) {
    RunConfig c;
    c.command = Command::models;
    c.beta = 0.5;
    const auto [code, j] = exec(c);
    EXPECT_EQ(code, 0);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["tool_version"], tool_version);
    EXPECT_NEAR(j["payload"]["lambda_bound"].get<double>(), reference::bound_half, 1e-11);

    c.beta = 1.5;
    const auto [bad, jb] = exec(c);
    EXPECT_EQ(bad, 2);
    EXPECT_EQ(jb["status"], "validation_error");
}

TEST_F(CliTest, LambdaMapIdentityAndErrors) {
    RunConfig c;
    c.command = Command::lambda_map;
    c.beta = 0.5;
    c.map_path = write("id.json", identity_json);
    const auto [code, j] = exec(c);
    ASSERT_EQ(code, 0);
    EXPECT_TRUE(j["payload"]["equality"].get<bool>());
    EXPECT_NEAR(j["payload"]["defect"].get<double>(), 0.0, 1e-9);
    EXPECT_EQ(j["payload"]["rigidity"]["form"], "affine");

    c.map_path = write("mob.json", {{"mobius", {{"C1", {0.0, 0.0}}, {"C2", {-1.0, 0.0}}, {"C3", {2.0, 0.0}}}}});
    const auto [cm, jm] = exec(c);
    ASSERT_EQ(cm, 0);
    EXPECT_NEAR(jm["payload"]["lambda"].get<double>(), reference::mobius_fixture_lambda, 1e-8);
    EXPECT_EQ(jm["payload"]["rigidity"]["form"], "mobius");

    c.map_path = write("odd.json", {{"kmin", 2}, {"coeffs", {{0.5, 0.0}}}, {"rin", 0.4}, {"rout", 1.0}});
    EXPECT_EQ(exec(c).first, 3);

    c.map_path = path("missing.json");
    EXPECT_EQ(exec(c).first, 2);
}

TEST_F(CliTest, RenormalizeOuter) {
    RunConfig c;
    c.command = Command::lambda_map;
    c.beta = 0.5;
    c.map_path = write("inv.json", {{"kmin", -1}, {"coeffs", {{0.5, 0.0}}}, {"rin", 0.4}, {"rout", 1.0}});
    EXPECT_EQ(exec(c).first, 2);
    c.renormalize_outer = true;
    const auto [code, j] = exec(c);
    ASSERT_EQ(code, 0);
    EXPECT_NEAR(j["payload"]["lambda"].get<double>(), reference::bound_half, 1e-9);
}

TEST_F(CliTest, BtProfileFiles) {
    RunConfig c;
    c.command = Command::bt_profile;
    c.beta = 0.5;
    c.n = 16;
    c.map_path = write("q.json", {{"kmin", 0}, {"coeffs", {{0.0, 0.0}, {1.0, 0.0}, {0.2, 0.0}}}, {"rin", 0.0}, {"rout", 1.0}});
    c.csv_path = path("p.csv");
    c.emit_svg = true;
    c.svg_path = path("p.svg");
    const auto [code, j] = exec(c);
    ASSERT_EQ(code, 0);
    EXPECT_EQ(j["payload"]["t"].size(), 16u);
    EXPECT_GT(j["payload"]["min_B"].get<double>(), 0.0);
    std::ifstream csv(c.csv_path);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "t,A,B");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 16);
    std::ifstream svg(c.svg_path);
    std::stringstream ss;
    ss << svg.rdbuf();
    EXPECT_NE(ss.str().find("<svg"), std::string::npos);
}

TEST_F(CliTest, LambdaPdeCoarseAnnulus) {
    RunConfig c;
    c.command = Command::lambda_pde;
    c.domain_path = write("ann.json", {{"variant", "annulus"}, {"beta", 0.5}});
    c.h = 1.0 / 128;
    c.schedule = std::vector<double>{0.08, 0.04};
    c.frames = 32;
    c.field_path = path("u.bin");
    c.csv_path = path("frames.csv");
    const auto [code, j] = exec(c);
    ASSERT_EQ(code, 0) << j.dump();
    EXPECT_NEAR(j["payload"]["report"]["lambda"].get<double>() / reference::bound_half, 1.0, 0.02);
    EXPECT_EQ(j["convergence"]["stages"].size(), 3u);
    EXPECT_TRUE(j["timings"].contains("total_seconds"));

    std::ifstream f(c.field_path, std::ios::binary);
    std::int64_t nx = 0, ny = 0;
    double hdr[3];
    f.read(reinterpret_cast<char*>(&nx), sizeof nx);
    f.read(reinterpret_cast<char*>(&ny), sizeof ny);
    f.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    EXPECT_GT(nx, 200);
    EXPECT_GT(ny, 200);
    EXPECT_DOUBLE_EQ(hdr[0], 1.0 / 128);
    EXPECT_EQ(fs::file_size(c.field_path), 16 + 24 + static_cast<std::uintmax_t>(nx * ny) * 8);

    c.init = "nonsense";
    EXPECT_EQ(exec(c).first, 2);
}

TEST_F(CliTest, ModulusAndMissingDomain) {
    RunConfig c;
    c.command = Command::modulus;
    c.domain_path = write("ann.json", {{"variant", "annulus"}, {"beta", 0.5}});
    const auto [code, j] = exec(c);
    ASSERT_EQ(code, 0);
    EXPECT_NEAR(j["payload"]["beta"].get<double>(), 0.5, 1e-3);
    c.domain_path = write("disk.json", {{"variant", "unit_disk"}});
    EXPECT_EQ(exec(c).first, 2);
    c.domain_path.clear();
    EXPECT_EQ(exec(c).first, 2);
}

TEST_F(CliTest, VerifyIsDeterministicApartFromTimings) {
    RunConfig c;
    c.command = Command::verify;
    c.suite = "paper";
    c.seed = 7;
    const auto [c1, j1] = exec(c);
    const auto [c2, j2] = exec(c);
    EXPECT_EQ(c1, 0);
    EXPECT_EQ(j1["payload"], j2["payload"]);
    c.suite = "everything";
    EXPECT_EQ(exec(c).first, 2);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kawahara/lab/run.hpp"

using namespace kawahara;
using namespace kawahara::lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("kawahara_lab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json manifest_of(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

const char* small_counterexample = "N_values = 16,32,64,128\ns_values = -1,-0.5,0\nepsilon = 0.1\n";

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
    const auto cfg = ExperimentConfig::parse("");
    EXPECT_EQ(cfg.number("alpha"), 1.0);
    EXPECT_EQ(cfg.number("beta"), 0.0);
    EXPECT_DOUBLE_EQ(cfg.number("L"), 64 * pi);
    EXPECT_EQ(cfg.integer("M"), 4096);
    EXPECT_EQ(cfg.number("epsilon"), 0.1);
    EXPECT_FALSE(cfg.has("b"));
    EXPECT_TRUE(cfg.overridden().empty());
}

TEST(Config, ParsesExpressionsAndComments) {
    const auto cfg = ExperimentConfig::parse("# header\nL = 8*pi  # torus\n\ndt = 0.1/4096\nN_values = 16, 32 ,64\n");
    EXPECT_DOUBLE_EQ(cfg.number("L"), 8 * pi);
    EXPECT_DOUBLE_EQ(cfg.number("dt"), 0.1 / 4096);
    EXPECT_EQ(cfg.list("N_values"), (std::vector<double>{16, 32, 64}));
    EXPECT_EQ(cfg.overridden().size(), 3u);
}

TEST(Config, RejectsUnknownKeysAndBadLines) {
    try {
        ExperimentConfig::parse("gamma = 3\n");
        FAIL();
    } catch (const InvalidParameters& e) {
        EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
    }
    EXPECT_THROW(ExperimentConfig::parse("alpha\n"), InvalidParameters);
    EXPECT_THROW(ExperimentConfig::parse("alpha = one").number("alpha"), InvalidParameters);
    EXPECT_THROW(ExperimentConfig::load("/nonexistent/file.conf"), InvalidParameters);
}

TEST(Config, ZeroAlphaRejectedBeforeAnyWork) {
    const auto dir = scratch_dir("alpha");
    try {
        run(Kind::solve, ExperimentConfig::parse("alpha = 0\n"), dir);
        FAIL();
    } catch (const InvalidParameters& e) {
        EXPECT_STREQ(e.what(), "alpha must be nonzero");
    }
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Config, ModulePreconditionsCheckedUpFront) {
    EXPECT_THROW(validate(Kind::counterexample, ExperimentConfig::parse("N_values = 16,32\n")), InvalidParameters);
    EXPECT_THROW(validate(Kind::verify_bilinear, ExperimentConfig::parse("s = -1.8\n")), InvalidParameters);
    EXPECT_THROW(validate(Kind::solve, ExperimentConfig::parse("M = 100\n")), InvalidParameters);
    EXPECT_THROW(validate(Kind::solve, ExperimentConfig::parse("T = 0.00015\ndt = 1e-4\n")), InvalidParameters);
    EXPECT_THROW(validate(Kind::converge_uniform, ExperimentConfig::parse("M = 64\ndata_kmax = 4\nt_values = 0.00015\n")),
                 InvalidParameters);
    EXPECT_THROW(validate(Kind::solve, ExperimentConfig::parse("M = 64\n")), InvalidParameters);  // kmax 8 vs grid
    EXPECT_THROW(validate(Kind::solve, ExperimentConfig::parse("kind = truncate\n")), InvalidParameters);
    EXPECT_THROW(validate(Kind::converge_pointwise, ExperimentConfig::parse("M = 64\ndata_kmax = 4\ndt = 1e-3\nt_max = 0.01\n")),
                 InvalidParameters);
    EXPECT_THROW(validate(Kind::strichartz_check, ExperimentConfig::parse("estimate = l6\n")), InvalidParameters);
}

TEST(Run, CounterexampleEchoesDerivedFields) {
    const auto dir = scratch_dir("derived");
    const auto m = run(Kind::counterexample, ExperimentConfig::parse(std::string(small_counterexample) + "s = -1.0\n"), dir);
    ASSERT_TRUE(m.completed) << m.reason;
    const auto j = manifest_of(dir);
    EXPECT_DOUBLE_EQ(j["derived"]["b"].get<double>(), 0.55);
    EXPECT_DOUBLE_EQ(j["derived"]["b_prime"].get<double>(), m.b_prime);
    EXPECT_DOUBLE_EQ(j["derived"]["s1"].get<double>(), m.s1);
    const NormParams np(-1.0, 0.1);
    EXPECT_DOUBLE_EQ(m.b_prime, np.b_prime());
    EXPECT_DOUBLE_EQ(m.s1, np.s1());
    EXPECT_EQ(j["config"]["s"], "-1.0");
}

TEST(Run, SolveWithZeroDataWritesZeros) {
    const auto dir = scratch_dir("zero");
    const auto cfg = ExperimentConfig::parse("data = zero\nM = 32\nL = pi\nT = 0.002\ndt = 1e-3\nrecord_every = 1\n");
    const auto m = run(Kind::solve, cfg, dir);
    ASSERT_TRUE(m.completed);
    std::ifstream in(dir / "trajectory.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,k,xi,re,im");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.substr(line.size() - 37), "0.000000000000e+00,0.000000000000e+00");
    }
    EXPECT_EQ(rows, 3u * 32u);
    EXPECT_EQ(manifest_of(dir)["status"], "completed");
}

TEST(Run, CounterexampleOneRowPerS) {
    const auto dir = scratch_dir("rows");
    ASSERT_TRUE(run(Kind::counterexample, ExperimentConfig::parse(small_counterexample), dir).completed);
    std::istringstream in(slurp(dir / "slopes.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s,epsilon,slope,residual,expected_slope");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].substr(0, 19), "-1.000000e+00,1.000");
}

TEST(Run, RerunsAreByteIdenticalAcrossThreads) {
    const auto a = scratch_dir("rerun_a"), b = scratch_dir("rerun_b");
    const auto cfg = ExperimentConfig::parse(small_counterexample);
    const auto ma = run(Kind::counterexample, cfg, a, 1);
    const auto mb = run(Kind::counterexample, cfg, b, 3);
    for (const auto& name : ma.artifacts) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    EXPECT_EQ(ma.run_id.substr(ma.run_id.find('-')), mb.run_id.substr(mb.run_id.find('-')));

    const auto ua = scratch_dir("uniform_a"), ub = scratch_dir("uniform_b");
    const auto ucfg = ExperimentConfig::parse("L = 4*pi\nM = 64\ndata_kmax = 3\ndt = 1e-3/64\nt_values = 0,1e-3,5e-4\n");
    run(Kind::converge_uniform, ucfg, ua, 1);
    run(Kind::converge_uniform, ucfg, ub, 2);
    EXPECT_EQ(slurp(ua / "uniform.csv"), slurp(ub / "uniform.csv"));
}

TEST(Run, ManifestListsEveryFile) {
    const auto dir = scratch_dir("complete");
    const auto m = run(Kind::counterexample, ExperimentConfig::parse(small_counterexample), dir, 1, true);
    std::set<std::string> on_disk, listed(m.artifacts.begin(), m.artifacts.end());
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "manifest.json") on_disk.insert(e.path().filename().string());
    EXPECT_EQ(on_disk, listed);
    EXPECT_TRUE(listed.count("points.svg"));
    const auto j = manifest_of(dir);
    EXPECT_EQ(j["artifacts"].size(), m.artifacts.size());
    EXPECT_GE(j["wall_time"].get<double>(), 0.0);
    EXPECT_EQ(j["run_id"], m.run_id);
}

TEST(Run, ModuleFailureWritesFailedManifest) {
    // Valid parameters, but an explicit step far beyond stability for this amplitude.
    const auto dir = scratch_dir("blowup");
    const auto cfg = ExperimentConfig::parse("M = 256\nL = pi\ndata_kmax = 40\ndata_amplitude = 1e6\ndt = 0.01\nT = 10\n");
    const auto m = run(Kind::solve, cfg, dir);
    ASSERT_FALSE(m.completed);
    EXPECT_NE(m.reason.find("non-finite"), std::string::npos) << m.reason;
    const auto j = manifest_of(dir);
    EXPECT_EQ(j["status"], "failed");
    EXPECT_EQ(j["reason"], m.reason);
    std::set<std::string> on_disk;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "manifest.json") on_disk.insert(e.path().filename().string());
    EXPECT_EQ(on_disk, std::set<std::string>(m.artifacts.begin(), m.artifacts.end()));
}

TEST(Run, ExploratoryPointwiseFlagged) {
    const auto dir = scratch_dir("exploratory");
    const auto cfg = ExperimentConfig::parse(
        "L = 4*pi\nM = 64\ns = -0.25\ndata_kmax = 3\ndt = 1e-3/16\nt_max = 0.008,0.004\nbound_cutoffs = 1,2\n");
    EXPECT_TRUE(run(Kind::converge_pointwise, cfg, dir).exploratory);
    EXPECT_EQ(manifest_of(dir)["exploratory"], true);
}

TEST(Plot, ErrorsOnEmptyAndMismatchedCsv) {
    const auto dir = scratch_dir("plot");
    fs::create_directories(dir);
    std::ofstream(dir / "empty.csv") << "N,error\n";
    try {
        emit_plot(dir / "empty.csv", PlotKind::ladder_decay);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_STREQ(e.what(), "no rows");
    }
    std::ofstream(dir / "wrong.csv") << "a,b\n1,2\n";
    try {
        emit_plot(dir / "wrong.csv", PlotKind::loglog_slope);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("s,N,lhs,norm_a,norm_b,ratio,ratio_constant"), std::string::npos);
    }
}

TEST(Plot, OnePanelPerS) {
    const auto dir = scratch_dir("panels");
    run(Kind::counterexample, ExperimentConfig::parse(small_counterexample), dir);
    const auto svg = slurp(emit_plot(dir / "points.csv", PlotKind::loglog_slope));
    std::size_t panels = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++panels;
    EXPECT_EQ(panels, 3u);
    EXPECT_NE(svg.find("s = -0.5"), std::string::npos);
}

TEST(Plot, FieldSnapshotHeatmap) {
    const auto dir = scratch_dir("snapshot");
    const auto cfg = ExperimentConfig::parse("M = 64\nL = 2*pi\ndata_kmax = 4\nT = 0.004\ndt = 1e-3\nrecord_every = 1\n");
    run(Kind::solve, cfg, dir);
    const auto svg = slurp(emit_plot(dir / "trajectory.csv", PlotKind::field_snapshot));
    std::size_t cells = 0;
    for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) ++cells;
    EXPECT_EQ(cells, 5u * 64u);
}

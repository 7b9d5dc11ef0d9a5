#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/serialize.hpp"

using namespace akm;
using namespace akm::cli;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("akm_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

struct CommandRun {
  int code;
  std::string log;
  std::string err;
};

CommandRun run(const std::string& command, CommonOptions opts) {
  std::ostringstream log, err;
  const int code = run_command(command, opts, log, err);
  return {code, log.str(), err.str()};
}

CommonOptions options(const std::filesystem::path& out, std::vector<std::string> overrides = {}) {
  CommonOptions o;
  o.out = out;
  o.overrides = std::move(overrides);
  return o;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST(RunConfig, ParsingAndOverrides) {
  RunConfig cfg({{"alpha", "0.1"}, {"D", "5"}, {"list", "1,2,3"}, {"flag", "false"}, {"name", "x"}});
  cfg.parse("# comment\n alpha = 0.25  # trailing\n\nlist=0.5, 1.5\n");
  EXPECT_EQ(cfg.get_double("alpha"), 0.25);
  EXPECT_EQ(cfg.get_doubles("list"), (std::vector<double>{0.5, 1.5}));
  EXPECT_EQ(cfg.get_size("D"), 5u);
  cfg.set_assignment("D=7");
  EXPECT_EQ(cfg.get_size("D"), 7u);
  cfg.set("flag", "true");
  EXPECT_TRUE(cfg.get_bool("flag"));

  try {
    cfg.parse("alpha=1\nbogus=3\n", "file.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("file.cfg:2"), std::string::npos);
  }
  EXPECT_THROW(cfg.parse("novalue\n"), ConfigError);
  cfg.set("D", "x7");
  EXPECT_THROW(cfg.get_size("D"), ConfigError);
  cfg.set("alpha", "1e-3junk");
  EXPECT_THROW(cfg.get_double("alpha"), ConfigError);
}

TEST(RunConfig, FileThenFlags) {
  const auto path = std::filesystem::temp_directory_path() / "akm_cfg_test.cfg";
  std::ofstream(path) << "model = trig\nseed = 4\n";
  CommonOptions o;
  o.config = path;
  o.seed = 9;
  o.overrides = {"Q=12"};
  const RunConfig cfg = resolve_config(sysid_defaults(), o);
  EXPECT_EQ(cfg.get("model"), "trig");
  EXPECT_EQ(cfg.get_u64("seed"), 9u);
  EXPECT_EQ(cfg.get_size("Q"), 12u);
  o.limit = 5;
  EXPECT_THROW(resolve_config(sysid_defaults(), o), ConfigError);
}

TEST(Commands, UnknownCommandAndKey) {
  EXPECT_EQ(run("no-such-command", options(fresh_dir("unknown"))).code, kConfigError);
  const CommandRun r = run("grad-check", options(fresh_dir("badkey"), {"trails=5"}));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("trails"), std::string::npos);
}

TEST(SysidDemo, TmRecoversPolesAndBeatsTrig) {
  const auto tm_dir = fresh_dir("sysid_tm");
  ASSERT_EQ(run("sysid-demo", options(tm_dir)).code, kOk);
  const Json tm = read_json(tm_dir / "report.json");
  EXPECT_LT(tm.at("pole_max_abs_error").get<double>(), 1e-2);
  EXPECT_TRUE(std::filesystem::exists(tm_dir / "poles.csv"));
  EXPECT_TRUE(std::filesystem::exists(tm_dir / "response.csv"));
  EXPECT_EQ(read_lines(tm_dir / "response.csv").front(), "angle,abs_h,arg_h,abs_f,arg_f");
  EXPECT_EQ(read_lines(tm_dir / "frequency_data.csv").size(), 5001u);

  const auto trig_dir = fresh_dir("sysid_trig");
  ASSERT_EQ(run("sysid-demo", options(trig_dir, {"model=trig", "Q=200", "epochs=100"})).code, kOk);
  const Json trig = read_json(trig_dir / "report.json");
  EXPECT_TRUE(trig.at("pole_max_abs_error").is_null());
  EXPECT_GT(trig.at("relative_error").get<double>(), tm.at("relative_error").get<double>());
}

TEST(SysidDemo, ConfigErrors) {
  const CommandRun r = run("sysid-demo", options(fresh_dir("sysid_bad"), {"model=rational"}));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("model"), std::string::npos);
  EXPECT_EQ(run("sysid-demo", options(fresh_dir("sysid_bad2"), {"q=0"})).code, kConfigError);
}

TEST(SysidDemo, Reproducible) {
  const auto a = fresh_dir("sysid_rep_a"), b = fresh_dir("sysid_rep_b");
  const std::vector<std::string> short_run = {"epochs=30"};
  ASSERT_EQ(run("sysid-demo", options(a, short_run)).code, kOk);
  ASSERT_EQ(run("sysid-demo", options(b, short_run)).code, kOk);
  EXPECT_EQ(read_lines(a / "loss.csv"), read_lines(b / "loss.csv"));
  EXPECT_EQ(read_json(a / "report.json").at("model_state"), read_json(b / "report.json").at("model_state"));
}

TEST(KernelBound, DefaultsAndSingleCell) {
  const auto dir = fresh_dir("bound");
  ASSERT_EQ(run("kernel-bound", options(dir)).code, kOk);
  const Json report = read_json(dir / "report.json");
  EXPECT_EQ(report.at("violations").get<int>(), 0);
  EXPECT_EQ(report.at("cells").size(), 24u);
  EXPECT_EQ(read_lines(dir / "bounds.csv").front(), "a_abs,rho,D,bound,empirical_sup");

  const auto one = fresh_dir("bound_one");
  ASSERT_EQ(run("kernel-bound", options(one, {"a=0", "rho=0.9", "D=20"})).code, kOk);
  const Json cell = read_json(one / "report.json").at("cells").at(0);
  EXPECT_EQ(cell.at("bound").get<double>(), std::pow(0.9, 40) / (1.0 - 0.9 * 0.9));
  for (const char* key : {"rho", "a_abs", "D", "bound", "empirical_sup", "grid_size"}) EXPECT_TRUE(cell.contains(key)) << key;

  EXPECT_EQ(run("kernel-bound", options(fresh_dir("bound_bad"), {"rho=1.0"})).code, kConfigError);
}

TEST(RffCompare, ErrorsShrinkAndDiagonalIsExact) {
  const auto dir = fresh_dir("rff");
  ASSERT_EQ(run("rff-compare", options(dir, {"D=256,1024,4096"})).code, kOk);
  const Json rows = read_json(dir / "report.json").at("rows");
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.at("max_abs_error_diagonal").get<double>(), 0.0);
  EXPECT_LT(rows.at(2).at("max_abs_error").get<double>(), rows.at(0).at("max_abs_error").get<double>());
  EXPECT_EQ(run("rff-compare", options(fresh_dir("rff_bad"), {"sigma=0"})).code, kConfigError);
  EXPECT_EQ(run("rff-compare", options(fresh_dir("rff_bad2"), {"sigma=-1"})).code, kConfigError);
}

TEST(GradCheck, ExitCodes) {
  const auto dir = fresh_dir("grad");
  const CommandRun ok = run("grad-check", options(dir, {"trials=20"}));
  EXPECT_EQ(ok.code, kOk);
  EXPECT_EQ(read_json(dir / "report.json").at("results").size(), 8u);
  EXPECT_EQ(run("grad-check", options(fresh_dir("grad_bad"), {"trials=5", "corrupt_gradient=true"})).code, kGradientFailure);
  EXPECT_EQ(run("grad-check", options(fresh_dir("grad_zero"), {"trials=0"})).code, kConfigError);
}

TEST(TrainClassifier, SyntheticSmokeRun) {
  const auto dir = fresh_dir("clf");
  CommonOptions o = options(dir, {"data=synthetic", "D=20", "epochs=3", "batch=500"});
  o.limit = 3000;
  ASSERT_EQ(run("train-classifier", o).code, kOk);
  const Json report = read_json(dir / "report.json");
  EXPECT_EQ(report.at("rows_train").get<int>(), 2400);
  EXPECT_EQ(report.at("rows_test").get<int>(), 600);
  const auto confusion = report.at("confusion");
  ASSERT_EQ(confusion.size(), 7u);
  std::size_t total = 0;
  for (const auto& row : confusion) {
    EXPECT_EQ(row.size(), 7u);
    for (const auto& v : row) total += v.get<std::size_t>();
  }
  EXPECT_EQ(total, 600u);
  for (const char* key : {"best_accuracy", "reference_epoch", "wall_minutes"}) EXPECT_TRUE(report.contains(key)) << key;
  EXPECT_EQ(read_lines(dir / "accuracy.csv").size(), 5u);

  const auto again = fresh_dir("clf_again");
  o.out = again;
  ASSERT_EQ(run("train-classifier", o).code, kOk);
  EXPECT_EQ(read_json(again / "report.json").at("best_accuracy"), report.at("best_accuracy"));
  EXPECT_EQ(read_json(again / "report.json").at("best_train_loss"), report.at("best_train_loss"));
}

TEST(TrainClassifier, ZeroEpochsAndFixtureFile) {
  const auto dir = fresh_dir("clf_zero");
  CommonOptions o = options(dir, {"data=synthetic", "D=10", "epochs=0", "model=trig-rff"});
  o.limit = 500;
  ASSERT_EQ(run("train-classifier", o).code, kOk);
  const Json report = read_json(dir / "report.json");
  EXPECT_EQ(report.at("reference_epoch").get<int>(), 0);
  EXPECT_GE(report.at("best_accuracy").get<double>(), 0.0);

  const auto fixture = (std::filesystem::path(AKM_TEST_DATA_DIR) / "covtype_fixture.csv").string();
  CommonOptions f = options(fresh_dir("clf_fixture"), {"data=" + fixture, "D=4", "epochs=1", "model=arctan"});
  EXPECT_EQ(run("train-classifier", f).code, kOk);
}

TEST(TrainClassifier, Errors) {
  EXPECT_EQ(run("train-classifier", options(fresh_dir("clf_missing"), {"data=/nonexistent/covtype.data"})).code, kMissingData);
  EXPECT_EQ(run("train-classifier", options(fresh_dir("clf_model"), {"model=svm"})).code, kConfigError);
}

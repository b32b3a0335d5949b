#include "rsbl/experiment.hpp"
#include "rsbl/image_io.hpp"
#include "rsbl/signals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const char* kSmall = R"({
  "name": "small",
  "n": 32,
  "signals": ["f3"],
  "measurements": [{"kind": "subsample", "ratio": 0.3, "mask_seed": 4, "snr_db": 20, "noise_seed": 9}],
  "priors": [{"kind": "local", "vartheta": 1e-4}, {"kind": "residual", "vartheta": 1e-4}],
  "replicates": 2,
  "uq": {"enabled": true, "level": 0.99, "samples": 5, "seed": 3}
})";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rsbl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos) throw std::logic_error("pattern not found: " + from);
  return s.replace(at, from.size(), to);
}

TEST(Config, ParsesAndDefaults) {
  const auto c = rsbl::parse_config(kSmall);
  EXPECT_EQ(c.name, "small");
  EXPECT_EQ(c.dims, 1);
  EXPECT_EQ(c.n, 32);
  EXPECT_EQ(c.priors.size(), 2u);
  EXPECT_EQ(c.priors[1].kind, rsbl::TransformKind::residual);
  EXPECT_DOUBLE_EQ(c.priors[1].zeta, 0.25);
  EXPECT_EQ(c.hyper.convention, rsbl::GammaConvention::rate);
  EXPECT_EQ(c.hyper.max_outer_iters, 100);
  EXPECT_TRUE(c.separate);
  EXPECT_FALSE(c.joint);
  EXPECT_EQ(c.replicates, 2);
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"name\"", "\"nmae\": 1, \"name\"")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"mask_seed\"", "\"seeed\": 1, \"mask_seed\"")),
               std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"kind\": \"local\"", "\"kind\": \"local\", \"q\": 2")),
               std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"level\"", "\"lvl\": 1, \"level\"")), std::invalid_argument);
}

TEST(Config, RequiresSeeds) {
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, ", \"noise_seed\": 9", "")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"mask_seed\": 4, ", "")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, ", \"seed\": 3", "")), std::invalid_argument);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(rsbl::parse_config("{not json"), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"n\": 32", "\"n\": 31")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"ratio\": 0.3", "\"ratio\": 1.0")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"f3\"", "\"f9\"")), std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"kind\": \"local\"", "\"kind\": \"residual\"")),
               std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"signals\": [\"f3\"]", "\"signals\": [\"f3\", \"f4\"]")),
               std::invalid_argument);
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"replicates\": 2", "\"replicates\": 0")), std::invalid_argument);
}

TEST(Config, InfiniteSnr) {
  const auto c = rsbl::parse_config(replace(kSmall, "\"snr_db\": 20", "\"snr_db\": \"inf\""));
  EXPECT_TRUE(std::isinf(c.measurements[0].snr_db));
  EXPECT_THROW(rsbl::parse_config(replace(kSmall, "\"snr_db\": 20", "\"snr_db\": \"loud\"")), std::invalid_argument);
}

TEST(Config, BundledSuites) {
  const auto single_f123 = rsbl::bundled_suite("single_f123");
  EXPECT_EQ(single_f123.n, 128);
  EXPECT_EQ(single_f123.replicates, 10);
  EXPECT_EQ(single_f123.signals, (std::vector<std::string>{"f1", "f2", "f3"}));
  EXPECT_EQ(single_f123.measurements[1].kind, rsbl::ModelKind::blur);
  EXPECT_DOUBLE_EQ(single_f123.measurements[1].gamma, 0.03);
  const auto joint_f3 = rsbl::bundled_suite("joint_f3");
  EXPECT_TRUE(joint_f3.separate && joint_f3.joint);
  EXPECT_EQ(joint_f3.pairing, rsbl::Pairing::all);
  const auto images_h123 = rsbl::bundled_suite("images_h123");
  EXPECT_EQ(images_h123.dims, 2);
  EXPECT_EQ(images_h123.n, 64);
  EXPECT_EQ(images_h123.replicates, 5);
  EXPECT_THROW(rsbl::bundled_suite("no_such_suite"), std::invalid_argument);
}

TEST(Config, ShippedFilesMatchBundledSuites) {
  for (const std::string name : {"single_f123", "single_f456", "joint_f3", "images_h123"}) {
    const auto file = rsbl::load_config(fs::path(RSBL_SOURCE_DIR) / "configs" / (name + ".json"));
    const auto suite = rsbl::bundled_suite(name);
    EXPECT_EQ(file.name, suite.name);
    EXPECT_EQ(file.signals, suite.signals);
    EXPECT_EQ(file.replicates, suite.replicates);
    ASSERT_EQ(file.measurements.size(), suite.measurements.size());
    for (std::size_t i = 0; i < file.measurements.size(); ++i) {
      EXPECT_EQ(file.measurements[i].noise_seed, suite.measurements[i].noise_seed);
      EXPECT_EQ(file.measurements[i].mask_seed, suite.measurements[i].mask_seed);
    }
    ASSERT_EQ(file.priors.size(), suite.priors.size());
    for (std::size_t i = 0; i < file.priors.size(); ++i) EXPECT_EQ(file.priors[i].vartheta, suite.priors[i].vartheta);
  }
  EXPECT_THROW(rsbl::load_config(fs::path(RSBL_SOURCE_DIR) / "tests" / "data" / "invalid_config.json"),
               std::invalid_argument);
}

TEST(Config, RelativeImagePathResolvesAgainstConfig) {
  const fs::path dir = scratch("relpath");
  rsbl::save_pgm(dir / "img.pgm", {4, 4, Eigen::VectorXd::Constant(16, 0.5)});
  std::ofstream(dir / "c.json") << R"({"dims": 2, "n": 4, "image_file": "img.pgm",
    "measurements": [{"kind": "identity", "snr_db": 20, "noise_seed": 1}],
    "priors": [{"kind": "local", "vartheta": 1e-2}]})";
  const auto c = rsbl::load_config(dir / "c.json");
  ASSERT_TRUE(c.image_file.has_value());
  EXPECT_EQ(*c.image_file, dir / "img.pgm");
}

TEST(Pgm, AllWhiteIsOne) {
  std::stringstream ss;
  ss << "P5\n# comment\n4 4\n255\n" << std::string(16, '\xff');
  const auto img = rsbl::read_pgm(ss);
  EXPECT_EQ(img.width, 4);
  EXPECT_TRUE((img.pixels.array() == 1.0).all());
}

TEST(Pgm, RoundTripIsLossless) {
  rsbl::GrayImage img{5, 3, Eigen::VectorXd(15)};
  for (int i = 0; i < 15; ++i) img.pixels[i] = (17 * i % 256) / 255.0;
  std::stringstream ss;
  rsbl::write_pgm(ss, img);
  const auto back = rsbl::read_pgm(ss);
  EXPECT_EQ(back.width, 5);
  EXPECT_EQ(back.height, 3);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Pgm, Malformed) {
  std::stringstream ascii("P2\n2 2\n255\n0 0 0 0\n");
  EXPECT_THROW(rsbl::read_pgm(ascii), std::runtime_error);
  std::stringstream short_data("P5\n2 2\n255\n\x01\x02");
  EXPECT_THROW(rsbl::read_pgm(short_data), std::runtime_error);
  std::stringstream deep("P5\n2 2\n65535\n");
  EXPECT_THROW(rsbl::read_pgm(deep), std::runtime_error);
}

// Oracle: direct area integral of the piecewise-constant input over each output cell.
TEST(Pgm, BlockMeanDownscale) {
  const int side = 400, n = 128;
  rsbl::GrayImage img{side, side, Eigen::VectorXd(side * side)};
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) img.pixels[r * side + c] = ((r * 7 + c * 13) % 256) / 255.0;
  const auto small = rsbl::block_downscale(img, n);
  ASSERT_EQ(small.width, n);
  const double s = double(side) / n;
  auto overlap = [](double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); };
  double worst = 0;
  for (int i = 0; i < n; i += 9)
    for (int j = 0; j < n; j += 7) {
      double acc = 0;
      for (int r = int(i * s); r < std::min(side, int((i + 1) * s) + 1); ++r)
        for (int c = int(j * s); c < std::min(side, int((j + 1) * s) + 1); ++c)
          acc += overlap(i * s, (i + 1) * s, r, r + 1) * overlap(j * s, (j + 1) * s, c, c + 1) * img.pixels[r * side + c];
      worst = std::max(worst, std::abs(acc / (s * s) - small.pixels[i * n + j]));
    }
  EXPECT_LT(worst, 1e-12);
}

TEST(Pgm, LoadImageLayoutAndCrop) {
  const fs::path dir = scratch("layout");
  rsbl::GrayImage img{4, 4, Eigen::VectorXd(16)};
  for (int i = 0; i < 16; ++i) img.pixels[i] = i / 255.0;
  rsbl::save_pgm(dir / "a.pgm", img);
  const Eigen::VectorXd v = rsbl::load_image(dir / "a.pgm", 4, false);
  // Row r, column c of the file lands at r + n c.
  EXPECT_DOUBLE_EQ(v[1 + 4 * 2], (1 * 4 + 2) / 255.0);
  rsbl::save_pgm(dir / "wide.pgm", {6, 4, Eigen::VectorXd::Constant(24, 0.2)});
  EXPECT_THROW(rsbl::load_image(dir / "wide.pgm", 4, false), std::invalid_argument);
  EXPECT_NEAR(rsbl::load_image(dir / "wide.pgm", 2, true)[0], 0.2, 1e-15);
}

TEST(Pgm, RenderIsMinMaxNormalized) {
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(16, -3, 5);
  const auto img = rsbl::render_field(v, 4);
  EXPECT_EQ(img.pixels.minCoeff(), 0.0);
  EXPECT_EQ(img.pixels.maxCoeff(), 1.0);
}

std::map<std::string, std::string> read_summary(const fs::path& p) {
  std::map<std::string, std::string> kv;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

TEST(Experiment, ByteIdenticalReruns) {
  const auto c = rsbl::parse_config(kSmall);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  rsbl::run_experiment(c, a);
  rsbl::run_experiment(c, b);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = b / fs::relative(e.path(), a);
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path();
  }
  EXPECT_GT(files, 10);
  EXPECT_TRUE(fs::exists(a / "f3" / "residual_separate_r1_m0_band.csv"));
  EXPECT_TRUE(fs::exists(a / "f3" / "residual_separate_r1_m0_samples.csv"));
}

TEST(Experiment, SummaryMatchesEmittedCsvs) {
  const auto c = rsbl::parse_config(kSmall);
  const fs::path dir = scratch("summary");
  rsbl::run_experiment(c, dir);
  const auto kv = read_summary(dir / "summary.txt");
  EXPECT_EQ(kv.at("name"), "small");
  for (const std::string prior : {"local", "residual"})
    for (int rep = 0; rep < 2; ++rep) {
      const std::string tag = prior + "_separate_r" + std::to_string(rep);
      std::ifstream in(dir / "f3" / (tag + "_m0.csv"));
      std::string line;
      std::getline(in, line);
      ASSERT_EQ(line, "s,truth,map,abs_err");
      double sum = 0;
      int rows = 0;
      while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        double vals[4];
        for (double& v : vals) {
          std::getline(ss, cell, ',');
          v = std::stod(cell);
          ASSERT_TRUE(std::isfinite(v));
        }
        EXPECT_EQ(vals[3], std::abs(vals[2] - vals[1]));
        sum += vals[3];
        ++rows;
      }
      ASSERT_EQ(rows, 32);
      const double reported = std::stod(kv.at("mean_abs.f3." + prior + ".separate.r" + std::to_string(rep)));
      EXPECT_NEAR(reported, sum / rows, 1e-12);
    }
  EXPECT_TRUE(kv.count("mean_abs.f3.local.separate"));
  EXPECT_TRUE(kv.count("mean_abs.f3.residual.separate"));
}

TEST(Experiment, SingleMeasurementMatchesDirectRun) {
  auto c = rsbl::parse_config(kSmall);
  c.replicates = 1;
  c.uq.enabled = false;
  const auto result = rsbl::run_experiment(c);
  const auto truth = rsbl::sample_example(rsbl::SignalId::f3, rsbl::make_grid(32));
  const auto m = rsbl::acquire(truth, rsbl::make_model(c.measurements[0], 32, 1, 0), 20, 9);
  rsbl::HyperParams h = c.hyper;
  h.vartheta = 1e-4;
  const auto direct = rsbl::gsbl_run(m, rsbl::residual_transform(32, 0, 0.25), h);
  ASSERT_EQ(result.cells.size(), 2u);
  EXPECT_EQ(result.cells[1].estimates[0], direct.x_map[0]);
  EXPECT_EQ(result.average("f3", rsbl::TransformKind::residual, "separate"), result.cells[1].mean_abs);
  EXPECT_TRUE(std::isnan(result.average("f3", rsbl::TransformKind::residual, "joint")));
}

TEST(Experiment, TwoDimensionalOutputs) {
  const auto c = rsbl::parse_config(R"({"dims": 2, "n": 16, "signals": ["h2"],
    "measurements": [{"kind": "blur", "gamma": 0.05, "snr_db": 10, "noise_seed": 2}],
    "priors": [{"kind": "local", "vartheta": 1e-2}, {"kind": "residual", "vartheta": 1e-3}]})");
  const fs::path dir = scratch("twod");
  rsbl::run_experiment(c, dir);
  EXPECT_TRUE(fs::exists(dir / "h2" / "residual_separate_r0_m0.pgm"));
  EXPECT_TRUE(fs::exists(dir / "h2" / "truth.pgm"));
  std::ifstream in(dir / "h2" / "local_separate_r0_m0.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "s1,s2,truth,map,abs_err");
}

}  // namespace

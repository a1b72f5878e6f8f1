#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "doctest.h"
#include "io.hpp"
#include "json.hpp"
#include "loss_expr.hpp"

using namespace topograd;
using namespace topograd::cli;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("topograd-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "topograd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::vector<double> flatten(const std::vector<std::vector<std::string>>& rows) {
  std::vector<double> v;
  for (const auto& r : rows) {
    for (const auto& c : r) v.push_back(parse_double(c));
  }
  return v;
}

}  // namespace

TEST_CASE("numbers round-trip exactly") {
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-3.0) == "-3.0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(std::isinf(parse_double("inf")));
  CHECK(parse_double("-inf") < 0.0);
  CHECK(parse_double(" +2.5 ") == 2.5);
  CHECK_THROWS_AS(parse_double("2.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = parse_double(format_double(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("loss expressions") {
  auto one = parse_loss_expr("E(2,0,2;PD0)");
  REQUIRE(one.size() == 1);
  CHECK(one[0].spec == LossSpec{2.0, 0.0, 2, 0});
  CHECK(one[0].weight == 1.0);

  auto many = parse_loss_expr(" -E(2, 1, 1; PD1) + 0.5*E(1,0,2;PD0) - E(2,0,2;PD0)*3 ");
  REQUIRE(many.size() == 3);
  CHECK(many[0].weight == -1.0);
  CHECK(many[0].spec == LossSpec{2.0, 1.0, 1, 1});
  CHECK(many[1].weight == 0.5);
  CHECK(many[2].weight == -3.0);
  CHECK(parse_loss_expr(format_loss_expr(many)) == many);
  CHECK(format_loss_expr(one) == "E(2,0,2;PD0)");
  CHECK(parse_loss_expr("1e-1*E(0.5,0,1;PD0)")[0].weight == 0.1);

  for (const char* bad : {"", "E(2,0;PD0)", "E(2,0,0;PD0)", "E(2,0,1;PD-1)", "E(-1,0,1;PD0)",
                          "E(2,0,2;PD0) E(1,0,1;PD0)", "F(2,0,2;PD0)", "E(2,0,2;H0)", "2E(1,0,1;PD0)"}) {
    CHECK_THROWS_AS(parse_loss_expr(bad), std::invalid_argument);
  }
}

TEST_CASE("point and image files") {
  TempDir dir;
  write(dir / "pts.csv", "# comment\n0.5, 1\n\n2,3.25\n");
  const auto cloud = read_points(dir / "pts.csv");
  CHECK(cloud.size() == 2);
  CHECK(cloud(1, 1) == 3.25);
  write(dir / "back.csv", points_csv(cloud));
  CHECK(std::equal(cloud.coords().begin(), cloud.coords().end(), read_points(dir / "back.csv").coords().begin()));

  write(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_points(dir / "ragged.csv"), doctest::Contains("ragged.csv:2"), InputError);
  write(dir / "wide.csv", "1,2,3,4\n");
  CHECK_THROWS_AS(read_points(dir / "wide.csv"), InputError);
  CHECK_THROWS_WITH_AS(read_points(dir / "missing.csv"), doctest::Contains("missing.csv"), InputError);

  write(dir / "img.pgm", "P2\n# made by hand\n3 2\n4\n0 1 2\n3 4 4\n");
  const auto img = read_image(dir / "img.pgm");
  CHECK(img.rows() == 2);
  CHECK(img.cols() == 3);
  CHECK(img(0, 2) == 0.5);
  CHECK(img(1, 1) == 1.0);
  write(dir / "bad.pgm", "P2\n2 2\n4\n0 1 2\n");
  CHECK_THROWS_AS(read_image(dir / "bad.pgm"), InputError);
  write(dir / "over.pgm", "P2\n1 1\n4\n5\n");
  CHECK_THROWS_AS(read_image(dir / "over.pgm"), InputError);

  write(dir / "unit.csv", "0,0.25\n1,0.5\n");
  CHECK(read_image(dir / "unit.csv")(0, 1) == 0.25);
  write(dir / "wide_range.csv", "-1,0\n1,3\n");
  const auto scaled = read_image(dir / "wide_range.csv");
  CHECK(scaled(0, 0) == 0.0);
  CHECK(scaled(0, 1) == 0.25);
  CHECK(scaled(1, 1) == 1.0);
  write(dir / "round.csv", image_csv(scaled));
  const auto again = read_image(dir / "round.csv");
  CHECK(std::equal(again.values().begin(), again.values().end(), scaled.values().begin()));
}

TEST_CASE("diagram files round-trip bit-exactly") {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(40);
  for (auto& c : coords) c = u(rng);
  const auto diagram = reduce(rips_filtration(PointCloud(2, coords), 1), 1);
  write(dir / "d.csv", diagram_csv(diagram.pairs()));
  const auto back = read_diagram_csv(dir / "d.csv");
  REQUIRE(back.size() == static_cast<std::size_t>(diagram.size()));
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == diagram.pairs()[i]);
  const auto js = nlohmann::json::parse(diagram_json(diagram.pairs()));
  CHECK(js["pairs"].size() == back.size());
  CHECK(js["pairs"][0]["death"] == "inf");
}

TEST_CASE("persistence command") {
  TempDir dir;
  write(dir / "two.csv", "0,0\n1,0\n");
  auto r = invoke({"--out-dir", (dir / "o").string(), "persistence", (dir / "two.csv").string()});
  REQUIRE(r.code == 0);
  const auto text = read_file(dir / "o" / "diagram.csv");
  CHECK(text.find("0,0.0,inf,") != std::string::npos);
  CHECK(text.find("0,0.0,1.0,") != std::string::npos);
  const auto manifest = nlohmann::json::parse(read_file(dir / "o" / "manifest.json"));
  CHECK(manifest["command"] == "persistence");
  CHECK(manifest["config"]["filtration"] == "rips");
  CHECK(manifest["outputs"].size() == 1);

  write(dir / "flat.pgm", "P2\n4 3\n255\n9 9 9 9\n9 9 9 9\n9 9 9 9\n");
  r = invoke({"--out-dir", (dir / "p").string(), "persistence", (dir / "flat.pgm").string()});
  REQUIRE(r.code == 0);
  const auto pairs = read_diagram_csv(dir / "p" / "diagram.csv");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].dim == 0);
  CHECK(pairs[0].essential());

  write(dir / "empty.csv", "");
  r = invoke({"--out-dir", (dir / "e").string(), "persistence", (dir / "empty.csv").string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("empty.csv") != std::string::npos);

  r = invoke({"--out-dir", (dir / "w").string(), "persistence", (dir / "two.csv").string(), "--filtration",
           "lower-star"});
  CHECK(r.code != 0);

  r = invoke({"--out-dir", (dir / "j").string(), "--format", "json", "persistence", (dir / "two.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(read_file(dir / "j" / "diagram.json"))["pairs"].size() == 2);
}

TEST_CASE("optimize command") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string pts;
  for (int i = 0; i < 20; ++i) pts += format_double(u(rng)) + "," + format_double(u(rng)) + "\n";
  write(dir / "pts.csv", pts);

  auto r = invoke({"--out-dir", (dir / "zero").string(), "optimize", (dir / "pts.csv").string(), "--loss",
                "E(2,0,2;PD0)", "--steps", "0"});
  REQUIRE(r.code == 0);
  CHECK(flatten(read_csv_rows(dir / "zero" / "final.csv")) == flatten(read_csv_rows(dir / "pts.csv")));

  r = invoke({"--out-dir", (dir / "bad").string(), "optimize", (dir / "pts.csv").string(), "--loss", "E(2,0;PD0)"});
  CHECK(r.code != 0);
  CHECK(r.err.find("loss") != std::string::npos);

  const std::vector<std::string> recipe{"--seed", "0", "optimize", "--generate", "uniform-points:100",
                                        "--loss", "E(2,0,2;PD0)", "--lr", "0.2", "--steps", "100",
                                        "--snapshot-every", "50"};
  auto with_dir = [&](const std::string& name) {
    auto args = recipe;
    args.insert(args.begin(), {"--out-dir", (dir / name).string()});
    return args;
  };
  REQUIRE(invoke(with_dir("fig1")).code == 0);
  const auto curve = read_csv_rows(dir / "fig1" / "loss_curve.csv");
  REQUIRE(curve.size() == 102);  // header + 101 values
  CHECK(parse_double(curve.back()[1]) <= 0.1 * parse_double(curve[1][1]));
  CHECK(fs::exists(dir / "fig1" / "snapshots" / "step_000050.csv"));
  CHECK(fs::exists(dir / "fig1" / "snapshots" / "step_000100.csv"));

  REQUIRE(invoke(with_dir("again")).code == 0);
  CHECK(read_file(dir / "fig1" / "loss_curve.csv") == read_file(dir / "again" / "loss_curve.csv"));
  CHECK(read_file(dir / "fig1" / "final.csv") == read_file(dir / "again" / "final.csv"));

  r = invoke({"--out-dir", (dir / "img").string(), "optimize", "--generate", "bump-image:12", "--loss",
           "E(1,0,2;PD0)", "--steps", "20"});
  REQUIRE(r.code == 0);
  CHECK(read_csv_rows(dir / "img" / "final.csv").size() == 12);

  r = invoke({"--out-dir", (dir / "both").string(), "optimize", (dir / "pts.csv").string(), "--generate",
           "uniform-points:5", "--loss", "E(1,0,2;PD0)"});
  CHECK(r.code != 0);
}

TEST_CASE("regress command") {
  TempDir dir;
  auto r = invoke({"--out-dir", (dir / "r").string(), "--threads", "2", "regress", "--beta", "three-values", "--penalty",
                "top1,l1", "--n", "20,30", "--iterations", "50", "--lambdas", "3", "--test-samples", "50"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv_rows(dir / "r" / "mse_table.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "n");
  CHECK(rows[1][0] == "20");
  CHECK(rows[1][1] == "top1");
  CHECK(rows[4][0] == "30");
  CHECK(rows[4][1] == "l1");

  r = invoke({"--out-dir", (dir / "s").string(), "regress", "--beta", "three-values", "--penalty", "top1,l1", "--n",
           "20,30", "--iterations", "50", "--lambdas", "3", "--test-samples", "50"});
  REQUIRE(r.code == 0);
  CHECK(read_file(dir / "r" / "mse_table.csv") == read_file(dir / "s" / "mse_table.csv"));

  r = invoke({"--out-dir", (dir / "x").string(), "regress", "--penalty", "lasso"});
  CHECK(r.code != 0);
  r = invoke({"--out-dir", (dir / "y").string(), "regress", "--penalty", "image-top"});
  CHECK(r.code != 0);
}

TEST_CASE("features command") {
  TempDir dir;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> px(0, 255);
  std::string pgm = "P2\n28 28\n255\n";
  for (int i = 0; i < 28 * 28; ++i) pgm += std::to_string(px(rng)) + (i % 28 == 27 ? "\n" : " ");
  write(dir / "img.pgm", pgm);
  auto r = invoke({"--out-dir", (dir / "f").string(), "features", (dir / "img.pgm").string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv_rows(dir / "f" / "features.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size() == 400);
  CHECK(rows[1].size() == 400);
  CHECK(rows[0][25] == "d0_k1_p0_q0");
}

TEST_CASE("attack command") {
  TempDir dir;
  auto r = invoke({"--out-dir", (dir / "a").string(), "attack", "--target", "same-as-prediction", "--count", "3",
                "--train-per-class", "5", "--size", "12"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv_rows(dir / "a" / "attack.csv");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][4] == "1");  // success
    CHECK(rows[i][5] == "0");  // steps
    CHECK(parse_double(rows[i][8]) == 0.0);
  }
  const auto manifest = nlohmann::json::parse(read_file(dir / "a" / "manifest.json"));
  CHECK(manifest["results"]["success_rate"] == 1.0);
}

TEST_CASE("selftest and usage") {
  auto r = invoke({"selftest", "--trials", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS wasserstein") != std::string::npos);
  CHECK(invoke({}).code != 0);
  CHECK(invoke({"bogus"}).code != 0);
  CHECK(invoke({"--help"}).code == 0);
}

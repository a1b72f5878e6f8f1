#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "io.hpp"
#include "json.hpp"
#include "loss_expr.hpp"
#include "topograd/classifier.hpp"
#include "topograd/error.hpp"
#include "topograd/optimize.hpp"
#include "topograd/parallel.hpp"
#include "topograd/study.hpp"

#ifndef TOPOGRAD_VERSION
#define TOPOGRAD_VERSION "unknown"
#endif

namespace topograd::cli {

namespace {

using nlohmann::json;

/// Bad argument combinations found after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = "topograd-out";
  std::string format = "csv";
  int threads = 1;
};

/// Per-run bookkeeping: collects outputs and writes the manifest.
class Run {
 public:
  Run(std::string command, const Globals& globals, int argc, const char* const* argv)
      : command_(std::move(command)), globals_(globals), start_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
  }

  fs::path path(const std::string& name) const { return fs::path(globals_.out_dir) / name; }

  void emit(const std::string& name, std::string_view content) {
    write_file_atomic(path(name), content);
    outputs_.push_back(path(name).string());
  }

  void input(const std::string& p) { inputs_.push_back(p); }

  /// Rows of numbers or strings; CSV or a JSON array of records per --format.
  void table(const std::string& stem, const std::vector<std::string>& header,
             const std::vector<std::vector<json>>& rows) {
    if (globals_.format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json rec = json::object();
        for (std::size_t i = 0; i < header.size(); ++i) rec[header[i]] = finite_or_text(row[i]);
        arr.push_back(std::move(rec));
      }
      emit(stem + ".json", arr.dump(1) + "\n");
      return;
    }
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += cell(row[i]);
      }
      out += '\n';
    }
    emit(stem + ".csv", out);
  }

  void finish(json config, json results) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest{{"command", command_},
                  {"argv", argv_},
                  {"version", TOPOGRAD_VERSION},
                  {"seed", globals_.seed},
                  {"threads", globals_.threads},
                  {"format", globals_.format},
                  {"config", std::move(config)},
                  {"inputs", inputs_},
                  {"outputs", outputs_},
                  {"results", std::move(results)},
                  {"wall_seconds", seconds}};
    write_file_atomic(path("manifest.json"), manifest.dump(2) + "\n");
  }

 private:
  static json finite_or_text(const json& v) {
    if (v.is_number_float() && !std::isfinite(v.get<double>())) return format_double(v.get<double>());
    return v;
  }
  static std::string cell(const json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  std::string command_;
  Globals globals_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> argv_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

OrderOptions order_options(const std::string& tie_break, std::uint64_t seed) {
  return {tie_break == "random" ? TieBreak::random : TieBreak::deterministic, seed};
}

Direction parse_direction(const std::string& s) {
  return s == "superlevel" ? Direction::superlevel : Direction::sublevel;
}

bool is_image_input(const std::string& kind, const std::string& path) {
  if (kind != "auto") return kind == "image";
  auto ext = fs::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".pgm";
}

// ---------------------------------------------------------------- persistence

struct PersistenceArgs {
  std::string input;
  std::string kind = "auto";
  std::string filtration;
  double threshold = 0.0;
  int max_dim = 1;
  std::string direction = "sublevel";
  std::string tie_break = "deterministic";
  bool keep_zero = false;
};

void add_persistence(CLI::App& app, PersistenceArgs& a) {
  app.add_option("input", a.input, "Points CSV, PGM (P2) image or CSV image")->required();
  app.add_option("--input-kind", a.kind, "How to read the input")
      ->check(CLI::IsMember({"auto", "points", "image"}))
      ->capture_default_str();
  app.add_option("--filtration", a.filtration,
                 "rips | weak-alpha for points, lower-star for images (default: rips / lower-star)")
      ->check(CLI::IsMember({"rips", "weak-alpha", "lower-star"}));
  app.add_option("--threshold", a.threshold, "Rips edge length cutoff (<= 0: none)")->capture_default_str();
  app.add_option("--max-dim", a.max_dim, "Highest homology dimension")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  app.add_option("--direction", a.direction, "Image filtration direction")
      ->check(CLI::IsMember({"sublevel", "superlevel"}))
      ->capture_default_str();
  app.add_option("--tie-break", a.tie_break, "Order of simplices with equal values")
      ->check(CLI::IsMember({"deterministic", "random"}))
      ->capture_default_str();
  app.add_flag("--keep-zero", a.keep_zero, "Also write pairs with birth == death");
}

int cmd_persistence(const PersistenceArgs& a, const Globals& g, Run& run, std::ostream& out) {
  run.input(a.input);
  const auto order = order_options(a.tie_break, g.seed);
  const bool image = is_image_input(a.kind, a.input);
  std::string filt_name = a.filtration.empty() ? (image ? "lower-star" : "rips") : a.filtration;
  std::optional<Filtration> filt;
  if (image) {
    if (filt_name != "lower-star") throw UsageError("images take the lower-star filtration");
    filt = grid_filtration(read_image(a.input), parse_direction(a.direction), order);
  } else {
    const auto cloud = read_points(a.input);
    if (filt_name == "lower-star") throw UsageError("point clouds take rips or weak-alpha");
    if (filt_name == "rips") {
      filt = rips_filtration(cloud, a.max_dim, a.threshold, order);
    } else {
      if (cloud.dim() != 2) throw UsageError("weak-alpha needs planar points");
      filt = weak_alpha_filtration(cloud, order);
    }
  }
  const auto diagram = reduce(*filt, std::min(a.max_dim, filt->complex().max_dimension()));
  std::vector<PersistencePair> pairs;
  for (const auto& p : diagram.pairs()) {
    if (a.keep_zero || !p.zero_persistence()) pairs.push_back(p);
  }
  if (g.format == "json") {
    run.emit("diagram.json", diagram_json(pairs));
  } else {
    run.emit("diagram.csv", diagram_csv(pairs));
  }
  json per_dim = json::object();
  for (int k = 0; k <= a.max_dim; ++k) {
    int finite = 0, essential = 0;
    for (const auto& p : pairs) {
      if (p.dim == k) (p.essential() ? essential : finite)++;
    }
    per_dim[std::to_string(k)] = {{"finite", finite}, {"essential", essential}};
  }
  run.finish({{"input", a.input},
              {"input_kind", image ? "image" : "points"},
              {"filtration", filt_name},
              {"threshold", a.threshold},
              {"max_dim", a.max_dim},
              {"direction", a.direction},
              {"tie_break", a.tie_break},
              {"keep_zero", a.keep_zero}},
             {{"pairs", pairs.size()}, {"by_dimension", per_dim}});
  out << pairs.size() << " pairs -> " << run.path(g.format == "json" ? "diagram.json" : "diagram.csv").string()
      << "\n";
  return 0;
}

// ------------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string input;
  std::string kind = "auto";
  std::string generate;
  std::string loss;
  int steps = 100;
  std::optional<double> lr;
  std::string filtration = "weak-alpha";
  double threshold = 0.0;
  std::string direction = "superlevel";
  bool backtracking = false;
  int snapshot_every = 0;
  std::string tie_break = "deterministic";
  bool keep_zero = false;
  std::string essential = "skip";
};

std::string check_loss(const std::string& text) {
  try {
    parse_loss_expr(text);
    return {};
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
}

void add_optimize(CLI::App& app, OptimizeArgs& a) {
  app.add_option("input", a.input, "Points CSV or image (PGM / CSV)");
  app.add_option("--input-kind", a.kind, "How to read the input")
      ->check(CLI::IsMember({"auto", "points", "image"}))
      ->capture_default_str();
  app.add_option("--generate", a.generate,
                 "Synthetic input instead of a file: uniform-points:N, bump-image:N or annulus-image:N");
  app.add_option("--loss", a.loss, "Objective, e.g. \"E(2,0,2;PD0)\" or \"-E(2,0,2;PD0) + 0.5*E(1,0,1;PD1)\"")
      ->required()
      ->check(check_loss);
  app.add_option("--steps", a.steps, "Gradient steps")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--lr", a.lr, "Step size (default 0.01 for points, 0.1 for images)")
      ->check(CLI::PositiveNumber);
  app.add_option("--filtration", a.filtration, "Point cloud filtration")
      ->check(CLI::IsMember({"rips", "weak-alpha"}))
      ->capture_default_str();
  app.add_option("--threshold", a.threshold, "Rips edge length cutoff (<= 0: none)")->capture_default_str();
  app.add_option("--direction", a.direction, "Image filtration direction")
      ->check(CLI::IsMember({"sublevel", "superlevel"}))
      ->capture_default_str();
  app.add_flag("--backtracking", a.backtracking, "Halve the step until the loss does not increase");
  app.add_option("--snapshot-every", a.snapshot_every, "Write the parameters every N steps (0: off)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tie-break", a.tie_break, "Order of simplices with equal values")
      ->check(CLI::IsMember({"deterministic", "random"}))
      ->capture_default_str();
  app.add_flag("--keep-zero", a.keep_zero, "Rank zero-persistence pairs in the losses");
  app.add_option("--essential", a.essential, "Essential classes inside a sum")
      ->check(CLI::IsMember({"skip", "cap"}))
      ->capture_default_str();
}

struct Generated {
  bool image = false;
  PointCloud cloud;
  ScalarField field;
};

Generated generate_input(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  int n = 0;
  try {
    n = colon == std::string::npos ? 0 : std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    n = 0;
  }
  if (n < 1) throw UsageError("--generate needs a positive size, e.g. uniform-points:100");
  Generated g;
  if (kind == "uniform-points") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> coords(2 * static_cast<std::size_t>(n));
    for (auto& c : coords) c = u(rng);
    g.cloud = PointCloud(2, std::move(coords));
  } else if (kind == "bump-image") {
    g.image = true;
    g.field = bump_image(n, n, 1.0, 0.1, seed);
  } else if (kind == "annulus-image") {
    if (n < 5) throw UsageError("annulus-image needs a size of at least 5");
    g.image = true;
    const auto ring = annulus_image(n, n, 0.2 * n, 0.4 * n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<double> v(ring.data(), ring.data() + ring.size());
    for (auto& x : v) x += noise(rng);
    g.field = ScalarField(n, n, std::move(v));
  } else {
    throw UsageError("unknown generator '" + kind + "'");
  }
  return g;
}

int cmd_optimize(const OptimizeArgs& a, const Globals& g, Run& run, std::ostream& out) {
  if (a.input.empty() == a.generate.empty()) throw UsageError("give either an input file or --generate");
  Generated in;
  if (!a.generate.empty()) {
    in = generate_input(a.generate, g.seed);
  } else {
    run.input(a.input);
    in.image = is_image_input(a.kind, a.input);
    if (in.image) {
      in.field = read_image(a.input);
    } else {
      in.cloud = read_points(a.input);
    }
  }

  OptimizationConfig cfg;
  cfg.terms = parse_loss_expr(a.loss);
  cfg.steps = a.steps;
  cfg.step_size = a.lr.value_or(in.image ? 0.1 : 0.01);
  cfg.seed = g.seed;
  cfg.tie_break = a.tie_break == "random" ? TieBreak::random : TieBreak::deterministic;
  cfg.loss = {a.keep_zero, a.essential == "cap" ? EssentialMode::cap : EssentialMode::skip};
  cfg.backtracking = a.backtracking;
  cfg.snapshot_interval = a.snapshot_every;
  cfg.direction = parse_direction(a.direction);
  cfg.rips_threshold = a.threshold;
  std::string filt_name = a.filtration;
  if (in.image) {
    cfg.filtration = OptimizerFiltration::lower_star;
    filt_name = "lower-star";
  } else {
    cfg.filtration = a.filtration == "rips" ? OptimizerFiltration::rips : OptimizerFiltration::weak_alpha;
    if (cfg.filtration == OptimizerFiltration::weak_alpha && in.cloud.dim() != 2) {
      throw UsageError("weak-alpha needs planar points");
    }
  }

  const auto result = in.image ? optimize_scalar_field(in.field, cfg) : optimize_point_cloud(in.cloud, cfg);
  auto params_csv = [&](const std::vector<double>& params) {
    return in.image ? image_csv(ScalarField(in.field.rows(), in.field.cols(), params))
                    : points_csv(PointCloud(in.cloud.dim(), params));
  };
  const auto initial = in.image ? std::vector<double>(in.field.values().begin(), in.field.values().end())
                                : std::vector<double>(in.cloud.coords().begin(), in.cloud.coords().end());
  run.emit("initial.csv", params_csv(initial));
  run.emit("final.csv", params_csv(result.final_params));
  if (a.snapshot_every > 0) {
    for (const auto& snap : result.snapshots) {
      std::ostringstream name;
      name << "snapshots/step_" << std::setw(6) << std::setfill('0') << snap.step << ".csv";
      run.emit(name.str(), params_csv(snap.params));
    }
  }
  std::vector<std::vector<json>> rows;
  for (std::size_t t = 0; t < result.loss.size(); ++t) rows.push_back({static_cast<int>(t), result.loss[t]});
  run.table("loss_curve", {"step", "loss"}, rows);

  const double first = result.loss.front(), last = result.loss.back();
  run.finish({{"input", a.input},
              {"generate", a.generate},
              {"input_kind", in.image ? "image" : "points"},
              {"loss", format_loss_expr(cfg.terms)},
              {"steps", cfg.steps},
              {"lr", cfg.step_size},
              {"filtration", filt_name},
              {"threshold", a.threshold},
              {"direction", a.direction},
              {"backtracking", a.backtracking},
              {"snapshot_every", a.snapshot_every},
              {"tie_break", a.tie_break},
              {"keep_zero", a.keep_zero},
              {"essential", a.essential}},
             {{"initial_loss", first}, {"final_loss", last}});
  out << "loss " << format_double(first) << " -> " << format_double(last) << " after " << cfg.steps
      << " steps\n";
  return 0;
}

// -------------------------------------------------------------------- regress

struct RegressArgs {
  std::string beta = "three-values";
  std::vector<std::string> penalties;
  int p = 100;
  std::vector<int> n;
  double sigma = 0.05;
  int runs = 1;
  int test_samples = 1000;
  int lambdas = 16;
  std::vector<double> lambda_range{1e-4, 10.0};
  int folds = 5;
  int iterations = 2000;
};

void add_regress(CLI::App& app, RegressArgs& a) {
  app.add_option("--beta", a.beta, "True weights")
      ->check(CLI::IsMember({"three-values", "sawtooth", "boxcar", "noisy-circle"}))
      ->capture_default_str();
  app.add_option("--penalty", a.penalties,
                 "Comma-separated penalties: ols l1 l2 tv tv2 top1 top2 top1-level top2-level image-top "
                 "(default depends on --beta)")
      ->delimiter(',');
  app.add_option("--p", a.p, "Number of features (ignored for noisy-circle)")
      ->check(CLI::Range(6, 100000))
      ->capture_default_str();
  app.add_option("--n", a.n, "Comma-separated training sample sizes (default 60; 128 for noisy-circle)")
      ->delimiter(',');
  app.add_option("--sigma", a.sigma, "Noise standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--runs", a.runs, "Repetitions with fresh data")->check(CLI::Range(1, 100000))->capture_default_str();
  app.add_option("--test-samples", a.test_samples, "Held-out samples for the prediction MSE")
      ->check(CLI::Range(1, 10000000))
      ->capture_default_str();
  app.add_option("--lambdas", a.lambdas, "Size of the logarithmic lambda grid")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  app.add_option("--lambda-range", a.lambda_range, "Grid endpoints lo,hi")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  app.add_option("--folds", a.folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  app.add_option("--iterations", a.iterations, "Gradient iterations per fit")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();
}

int cmd_regress(const RegressArgs& a, const Globals& g, Run& run, std::ostream& out) {
  RegressionStudy study;
  study.beta = *parse_beta_kind(a.beta);
  study.p = a.p;
  study.sigma = a.sigma;
  study.runs = a.runs;
  study.test_samples = a.test_samples;
  study.folds = a.folds;
  study.solver.iterations = a.iterations;
  study.seed = g.seed;
  study.threads = g.threads;
  if (!(a.lambda_range[0] > 0.0) || !(a.lambda_range[1] >= a.lambda_range[0])) {
    throw UsageError("--lambda-range needs 0 < lo <= hi");
  }
  study.lambdas = log_grid(a.lambda_range[0], a.lambda_range[1], a.lambdas);
  const bool circle = study.beta == BetaKind::circle_image;
  study.sample_sizes = a.n.empty() ? std::vector<int>{circle ? 128 : 60} : a.n;
  if (a.penalties.empty()) {
    if (circle) {
      study.penalties = {Penalty::ols, Penalty::l2, Penalty::image_top};
    } else if (study.beta == BetaKind::three_values) {
      study.penalties = {Penalty::ols, Penalty::l1, Penalty::l2, Penalty::top1, Penalty::top2};
    } else {
      study.penalties = {Penalty::ols, Penalty::tv, Penalty::tv2, Penalty::top1_level, Penalty::top2_level};
    }
  } else {
    study.penalties.clear();
    for (const auto& name : a.penalties) {
      const auto p = parse_penalty(name);
      if (!p) throw UsageError("unknown penalty '" + name + "'");
      study.penalties.push_back(*p);
    }
  }
  try {
    study.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto rows = run_regression_study(study);
  std::vector<std::vector<json>> table;
  json results = json::array();
  for (const auto& r : rows) {
    const std::string name(penalty_name(r.penalty));
    table.push_back({r.n, name, r.runs, r.mse_mean, r.mse_std, r.cv_mse_mean, r.beta_mse_mean, r.lambda_median});
    results.push_back({{"n", r.n}, {"penalty", name}, {"mse_mean", r.mse_mean}});
    out << "n=" << r.n << " " << std::left << std::setw(11) << name << " mse " << format_double(r.mse_mean)
        << "\n";
  }
  run.table("mse_table",
            {"n", "penalty", "runs", "mse_mean", "mse_std", "cv_mse_mean", "beta_mse_mean", "lambda_median"},
            table);
  std::vector<std::string> penalty_names;
  for (auto p : study.penalties) penalty_names.emplace_back(penalty_name(p));
  run.finish({{"beta", a.beta},
              {"penalties", penalty_names},
              {"p", circle ? 256 : study.p},
              {"n", study.sample_sizes},
              {"sigma", study.sigma},
              {"runs", study.runs},
              {"test_samples", study.test_samples},
              {"lambdas", study.lambdas},
              {"folds", study.folds},
              {"iterations", study.solver.iterations}},
             {{"rows", results}});
  return 0;
}

// ------------------------------------------------------------------- features

struct FeaturesArgs {
  std::vector<std::string> inputs;
  std::string tie_break = "deterministic";
};

void add_features(CLI::App& app, FeaturesArgs& a) {
  app.add_option("inputs", a.inputs, "Images (PGM or CSV), one feature row each")->required();
  app.add_option("--tie-break", a.tie_break, "Order of simplices with equal values")
      ->check(CLI::IsMember({"deterministic", "random"}))
      ->capture_default_str();
}

std::vector<std::string> feature_header() {
  std::vector<std::string> h(kFeatureCount);
  for (int d = 0; d < kDirectionCount; ++d) {
    for (int k = 0; k < 2; ++k) {
      for (int p = 0; p < kFeatureExponents; ++p) {
        for (int q = 0; q < kFeatureExponents; ++q) {
          h[feature_index(d, k, p, q)] = "d" + std::to_string(d) + "_k" + std::to_string(k) + "_p" +
                                         std::to_string(p) + "_q" + std::to_string(q);
        }
      }
    }
  }
  return h;
}

int cmd_features(const FeaturesArgs& a, const Globals& g, Run& run, std::ostream& out) {
  std::vector<ScalarField> images;
  for (const auto& path : a.inputs) {
    run.input(path);
    images.push_back(read_image(path));
  }
  const auto order = order_options(a.tie_break, g.seed);
  std::vector<std::vector<double>> features(images.size());
  parallel_for(static_cast<int>(images.size()), g.threads,
               [&](int i) { features[i] = topo_features(images[i], order); });
  std::vector<std::vector<json>> rows;
  for (const auto& f : features) rows.emplace_back(f.begin(), f.end());
  run.table("features", feature_header(), rows);
  run.finish({{"inputs", a.inputs}, {"tie_break", a.tie_break}}, {{"rows", rows.size()}});
  out << rows.size() << " x " << kFeatureCount << " features\n";
  return 0;
}

// --------------------------------------------------------------------- attack

struct AttackArgs {
  std::vector<std::string> inputs;
  int train_per_class = 40;
  int size = 16;
  double noise = 0.05;
  int count = 50;
  std::string target = "next";
  double lr = 0.01;
  int steps = 20;
  bool save_images = false;
};

void add_attack(CLI::App& app, AttackArgs& a) {
  app.add_option("inputs", a.inputs, "Images to attack (default: synthetic test shapes)");
  app.add_option("--train-per-class", a.train_per_class, "Training shapes per class")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  app.add_option("--size", a.size, "Side of the synthetic shape images")
      ->check(CLI::Range(12, 4096))
      ->capture_default_str();
  app.add_option("--noise", a.noise, "Pixel noise of the synthetic shapes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--count", a.count, "Synthetic test images to attack")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  app.add_option("--target", a.target,
                 "same-as-prediction, next (prediction + 1), random, or a class index 0..2")
      ->check(CLI::IsMember({"same-as-prediction", "next", "random", "0", "1", "2"}))
      ->capture_default_str();
  app.add_option("--lr", a.lr, "Signed step size per pixel")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--steps", a.steps, "Maximum attack steps")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_flag("--save-images", a.save_images, "Write attacked images as CSV");
}

int cmd_attack(const AttackArgs& a, const Globals& g, Run& run, std::ostream& out) {
  const auto train = shape_dataset(a.train_per_class, a.size, a.noise, g.seed);
  std::vector<std::vector<double>> train_features(train.images.size());
  parallel_for(static_cast<int>(train.images.size()), g.threads,
               [&](int i) { train_features[i] = topo_features(train.images[i]); });
  const auto model = train_classifier(train_features, train.labels, kShapeClasses);
  const double train_accuracy = accuracy(model, train_features, train.labels);

  std::vector<ScalarField> images;
  std::vector<int> labels;
  if (a.inputs.empty()) {
    const auto test = shape_dataset((a.count + kShapeClasses - 1) / kShapeClasses, a.size, a.noise, g.seed + 1);
    images.assign(test.images.begin(), test.images.begin() + a.count);
    labels.assign(test.labels.begin(), test.labels.begin() + a.count);
  } else {
    for (const auto& path : a.inputs) {
      run.input(path);
      images.push_back(read_image(path));
      labels.push_back(-1);
    }
  }

  struct Outcome {
    int prediction = 0;
    int target = 0;
    AttackResult result;
    double linf = 0.0;
  };
  std::vector<Outcome> outcomes(images.size());
  const AttackOptions options{a.lr, a.steps};
  parallel_for(static_cast<int>(images.size()), g.threads, [&](int i) {
    auto& o = outcomes[i];
    o.prediction = model.predict(topo_features(images[i]));
    if (a.target == "same-as-prediction") {
      o.target = o.prediction;
    } else if (a.target == "next") {
      o.target = (o.prediction + 1) % kShapeClasses;
    } else if (a.target == "random") {
      std::mt19937_64 rng(g.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1)));
      o.target = (o.prediction + 1 + std::uniform_int_distribution<int>(0, kShapeClasses - 2)(rng)) % kShapeClasses;
    } else {
      o.target = std::stoi(a.target);
    }
    o.result = gradient_attack(model, images[i], o.target, options);
    for (Index p = 0; p < images[i].size(); ++p) {
      o.linf = std::max(o.linf, std::abs(o.result.image.values()[p] - images[i].values()[p]));
    }
  });

  std::vector<std::vector<json>> rows;
  int successes = 0, correct = 0, labelled = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    successes += o.result.success;
    if (labels[i] >= 0) {
      ++labelled;
      correct += o.prediction == labels[i];
    }
    rows.push_back({static_cast<int>(i), labels[i], o.prediction, o.target, o.result.success ? 1 : 0,
                    o.result.steps, o.result.loss.front(), o.result.loss.back(), o.linf});
    if (a.save_images) {
      std::ostringstream name;
      name << "attacked/image_" << std::setw(4) << std::setfill('0') << i << ".csv";
      run.emit(name.str(), image_csv(o.result.image));
    }
  }
  run.table("attack",
            {"index", "label", "prediction", "target", "success", "steps", "initial_loss", "final_loss", "linf"},
            rows);
  const double rate = static_cast<double>(successes) / static_cast<double>(outcomes.size());
  json results{{"train_accuracy", train_accuracy}, {"success_rate", rate}, {"attacked", outcomes.size()}};
  if (labelled > 0) results["test_accuracy"] = static_cast<double>(correct) / labelled;
  run.finish({{"inputs", a.inputs},
              {"train_per_class", a.train_per_class},
              {"size", a.size},
              {"noise", a.noise},
              {"count", a.count},
              {"target", a.target},
              {"lr", a.lr},
              {"steps", a.steps},
              {"save_images", a.save_images}},
             results);
  out << "train accuracy " << format_double(train_accuracy);
  if (labelled > 0) out << ", test accuracy " << format_double(static_cast<double>(correct) / labelled);
  out << ", attack success " << successes << "/" << outcomes.size() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistence diagrams, diagram losses and their gradients", "topograd"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", TOPOGRAD_VERSION);

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for outputs and the manifest")->capture_default_str();
  app.add_option("--format", g.format, "Tables and diagrams as csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  PersistenceArgs pa;
  auto* persistence = app.add_subcommand("persistence", "Write the persistence diagram of points or an image");
  add_persistence(*persistence, pa);
  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "Gradient descent on a diagram loss");
  add_optimize(*optimize, oa);
  RegressArgs ra;
  auto* regress = app.add_subcommand("regress", "Penalized regression study on synthetic data");
  add_regress(*regress, ra);
  FeaturesArgs fa;
  auto* features = app.add_subcommand("features", "Directional persistence features of images");
  add_features(*features, fa);
  AttackArgs aa;
  auto* attack = app.add_subcommand("attack", "Gradient attack on a classifier over the features");
  add_attack(*attack, aa);
  int trials = 50;
  auto* selftest = app.add_subcommand("selftest", "Check the engine against independent oracles");
  selftest->add_option("--trials", trials, "Random cases per suite")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*selftest) return run_selftest(trials, g.seed, out) ? 0 : 1;
    const auto* sub = app.get_subcommands().front();
    Run run(sub->get_name(), g, argc, argv);
    if (*persistence) return cmd_persistence(pa, g, run, out);
    if (*optimize) return cmd_optimize(oa, g, run, out);
    if (*regress) return cmd_regress(ra, g, run, out);
    if (*features) return cmd_features(fa, g, run, out);
    if (*attack) return cmd_attack(aa, g, run, out);
  } catch (const UsageError& e) {
    err << "topograd: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const std::exception& e) {
    err << "topograd: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace topograd::cli

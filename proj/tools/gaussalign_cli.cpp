// gaussalign command-line interface: Gaussian fitting, optimal transport and
// IGW alignment solvers, clustering/MDS/CKA analysis, and the multimarginal
// scaling benchmark. Every subcommand emits a machine-readable JSON report.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaussalign/cluster.hpp"
#include "gaussalign/errors.hpp"
#include "gaussalign/gaussian.hpp"
#include "gaussalign/igw.hpp"
#include "gaussalign/io.hpp"
#include "gaussalign/multimarginal.hpp"
#include "gaussalign/solver_config.hpp"
#include "gaussalign/spectral.hpp"
#include "gaussalign/synthetic.hpp"
#include "gaussalign/transport.hpp"

namespace {

using nlohmann::json;
namespace ga = gaussalign;
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json gaussian_json(const ga::Gaussian& g) {
  return json{{"mean", to_json(g.mean)}, {"cov", to_json(g.cov)}};
}

json certificate_json(const ga::SospReport& report) {
  return json{{"grad_norm", report.grad_norm},
              {"hess_min_eig_estimate", report.hess_min_eig_estimate},
              {"factor_rank", report.factor_rank},
              {"certified_global", report.certified_global}};
}

// Shared report envelope. Timings are emitted only on request so that two
// runs with the same argv, inputs, and seed are byte-identical; a summary
// always goes to stderr.
struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  json timings = json::object();
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;

  void add_input(const std::string& path) { inputs[path] = ga::file_digest(path); }
};

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_path;
  bool emit_timings = false;
};

std::uint64_t resolve_seed(const GlobalOptions& opts) {
  if (opts.seed_set) return opts.seed;
  if (const char* env = std::getenv("GAUSSALIGN_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ga::InvalidInputError("GAUSSALIGN_SEED is not an unsigned integer");
    }
  }
  return 0;
}

int resolve_threads(const GlobalOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void check_finite(const json& node, const std::string& where) {
  if (node.is_number_float() && !std::isfinite(node.get<double>())) {
    throw ga::Error("non-finite value in report payload at " + where);
  }
  if (node.is_array() || node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      check_finite(*it, where);
    }
  }
}

void emit(const Report& report, const GlobalOptions& opts) {
  json doc;
  doc["schema"] = "gaussalign/1";
  doc["command"] = report.command;
  doc["inputs"] = report.inputs;
  doc["seed"] = report.seed;
  doc["result"] = report.result;
  doc["warnings"] = report.warnings;
  if (opts.emit_timings) doc["timings"] = report.timings;
  check_finite(doc["result"], "result");

  const std::string text = doc.dump(2) + "\n";
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw ga::InvalidInputError("cannot write report to " + opts.out_path);
    out << text;
  } else {
    std::cout << text;
  }
  if (!report.timings.empty()) {
    std::cerr << report.command << " timings: " << report.timings.dump() << "\n";
  }
}

ga::Gaussian load_gaussian(Report& report, const std::string& path) {
  report.add_input(path);
  return ga::read_gaussian_json(path);
}

std::vector<ga::Gaussian> load_gaussians(Report& report,
                                         const std::vector<std::string>& paths) {
  std::vector<ga::Gaussian> out;
  out.reserve(paths.size());
  for (const std::string& p : paths) out.push_back(load_gaussian(report, p));
  return out;
}

Eigen::VectorXd weights_or_uniform(const std::vector<double>& flags, int n) {
  if (flags.empty()) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
    w(n - 1) = 1.0 - w.head(n - 1).sum();
    return w;
  }
  if (static_cast<int>(flags.size()) != n) {
    throw ga::InvalidInputError("--weights count does not match the input count");
  }
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = flags[i];
  return w;
}

// --- subcommand payload builders -------------------------------------------

struct FitArgs {
  std::string input;
  std::string out;
  double ridge = ga::kDefaultRidge;
  bool header = false;
};

void run_fit(const FitArgs& args, Report& report) {
  report.add_input(args.input);
  const Eigen::MatrixXd samples = ga::read_csv_matrix(args.input, args.header);
  const ga::Gaussian g = ga::fit_gaussian(samples, args.ridge);
  ga::write_gaussian_json(args.out, g);
  report.result = {{"dim", g.dim()},
                   {"count", samples.rows()},
                   {"ridge", args.ridge},
                   {"written", args.out},
                   {"written_digest", ga::file_digest(args.out)}};
}

struct PairArgs {
  std::string a;
  std::string b;
  std::string action = "distance";
  double t = 0.5;
};

void run_w2(const PairArgs& args, Report& report) {
  const ga::Gaussian g1 = load_gaussian(report, args.a);
  const ga::Gaussian g2 = load_gaussian(report, args.b);
  if (args.action == "distance") {
    report.result = {{"distance", ga::bw_distance(g1, g2)}};
  } else if (args.action == "map") {
    const ga::AffineMap map = ga::bw_map(g1, g2);
    report.result = {{"matrix", to_json(map.matrix)},
                     {"pivot", to_json(map.pivot)},
                     {"offset", to_json(map.offset)},
                     {"distance", ga::bw_distance(g1, g2)}};
  } else if (args.action == "interpolate") {
    const ga::AffineMap map = ga::bw_map(g1, g2);
    const ga::Gaussian mid = ga::displacement_interpolation(g1, map, args.t);
    report.result = {{"t", args.t}, {"gaussian", gaussian_json(mid)}};
  } else {
    throw CLI::ValidationError("--action must be distance, map, or interpolate");
  }
}

struct IgwArgs {
  std::string a;
  std::string b;
  std::string method = "rgd";
  ga::SolverConfig cfg = ga::igw_rgd_defaults();
};

json bounds_json(const ga::IgwBounds& b) {
  return json{{"xi", b.xi},
              {"lower_sq", b.lower_sq},
              {"upper_sq", b.upper_sq},
              {"lower", b.lower},
              {"upper", b.upper}};
}

void run_igw(const IgwArgs& args, Report& report) {
  const ga::Gaussian g1 = load_gaussian(report, args.a);
  const ga::Gaussian g2 = load_gaussian(report, args.b);
  if (args.method == "bounds") {
    report.result = {{"bounds", bounds_json(ga::igw_bounds(g1, g2))}};
  } else if (args.method == "closed") {
    const std::optional<double> value = ga::igw_closed_form(g1, g2);
    if (!value) {
      throw ga::UnsupportedInputError(
          "igw: no closed form applies to this pair; use --method rgd");
    }
    report.result = {{"distance", *value},
                     {"bounds", bounds_json(ga::igw_bounds(g1, g2))}};
  } else if (args.method == "rgd") {
    ga::SolverConfig cfg = args.cfg;
    cfg.seed = report.seed;
    const ga::IgwRgdResult res = ga::igw_distance_rgd(g1, g2, cfg);
    report.result = {{"distance", res.distance},
                     {"gamma", res.gamma.gamma},
                     {"iterations", res.total_iterations},
                     {"bounds", bounds_json(res.bounds)},
                     {"frame_rows", res.gamma.c.rows()},
                     {"frame_cols", res.gamma.c.cols()}};
  } else {
    throw CLI::ValidationError("--method must be closed, rgd, or bounds");
  }
}

struct BarycenterArgs {
  std::vector<std::string> inputs;
  std::vector<double> weights;
  int dim = 0;
};

void run_igw_barycenter(const BarycenterArgs& args, Report& report) {
  std::vector<ga::Gaussian> gs = load_gaussians(report, args.inputs);
  int d_target = args.dim;
  for (const ga::Gaussian& g : gs) d_target = std::max(d_target, g.dim());
  const Eigen::VectorXd w = weights_or_uniform(args.weights, static_cast<int>(gs.size()));
  const ga::Gaussian bar =
      ga::igw_barycenter(ga::make_weighted_collection(std::move(gs), w), d_target);
  report.result = {{"dim", bar.dim()},
                   {"spectrum", to_json(Eigen::VectorXd(bar.cov.diagonal()))},
                   {"gaussian", gaussian_json(bar)}};
}

struct MmotArgs {
  std::vector<std::string> inputs;
  std::vector<double> weights;
  bool barycenter_requested = false;
  ga::SolverConfig cfg = ga::mmot_rtr_defaults();
};

void run_mmot(const MmotArgs& args, Report& report) {
  std::vector<ga::Gaussian> gs = load_gaussians(report, args.inputs);
  ga::SolverConfig cfg = args.cfg;
  cfg.seed = report.seed;
  const ga::MultiCoupling mc = ga::mm_ot_solve(gs, cfg);
  report.result = {{"p", mc.marginal_count()},
                   {"dim", mc.dim()},
                   {"cost", mc.cost},
                   {"objective", ga::mm_ot_objective(mc)},
                   {"certificate", certificate_json(*mc.certificate)}};
  for (const std::string& w : mc.warnings) report.warnings.push_back(w);
  if (args.barycenter_requested || !args.weights.empty()) {
    const Eigen::VectorXd w =
        weights_or_uniform(args.weights, mc.marginal_count());
    const ga::Gaussian bar = ga::barycenter_from_mm(mc, w);
    report.result["barycenter"] = gaussian_json(bar);
    report.result["barycenter_weights"] = to_json(w);
  }
}

void run_mm_igw(const std::vector<std::string>& inputs, Report& report) {
  std::vector<ga::Gaussian> gs = load_gaussians(report, inputs);
  const ga::MultiCoupling mc = ga::mm_igw_closed_form(gs);
  json pairwise = json::array();
  for (int i = 0; i < mc.marginal_count(); ++i) {
    for (int j = i + 1; j < mc.marginal_count(); ++j) {
      const double gbw = *ga::igw_closed_form(gs[i], gs[j]);
      pairwise.push_back({{"i", i}, {"j", j}, {"igw_sq", gbw * gbw}});
    }
  }
  report.result = {{"p", mc.marginal_count()},
                   {"dim", mc.dim()},
                   {"cost", mc.cost},
                   {"pairwise", pairwise}};
}

struct ClusterArgs {
  std::string dir;
  int k = 3;
  std::string mode = "closed";
  std::string matrix_out;
  double ridge = ga::kDefaultRidge;
  bool header = false;
  ga::SolverConfig cfg = ga::igw_rgd_defaults();
};

ga::PairwiseMode parse_mode(const std::string& mode) {
  if (mode == "closed") return ga::PairwiseMode::kClosed;
  if (mode == "rgd") return ga::PairwiseMode::kRgd;
  if (mode == "upper") return ga::PairwiseMode::kUpper;
  if (mode == "lower") return ga::PairwiseMode::kLower;
  throw CLI::ValidationError("--mode must be closed, rgd, upper, or lower");
}

void run_cluster(const ClusterArgs& args, Report& report, int threads) {
  std::vector<std::string> names;
  std::vector<ga::Gaussian> gs;
  std::vector<fs::path> entries;
  for (const auto& entry : fs::directory_iterator(args.dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".json" || ext == ".csv") entries.push_back(entry.path());
  }
  std::sort(entries.begin(), entries.end());
  for (const fs::path& path : entries) {
    report.add_input(path.string());
    if (path.extension() == ".json") {
      gs.push_back(ga::read_gaussian_json(path.string()));
    } else {
      gs.push_back(ga::fit_gaussian(ga::read_csv_matrix(path.string(), args.header),
                                    args.ridge));
    }
    names.push_back(path.filename().string());
  }
  if (gs.empty()) {
    throw ga::EmptyInputError("cluster: no .json or .csv entities in " + args.dir);
  }

  ga::SolverConfig cfg = args.cfg;
  cfg.seed = report.seed;
  const ga::DistanceMatrix dm =
      ga::pairwise_igw_matrix(gs, cfg, parse_mode(args.mode), threads);
  if (!args.matrix_out.empty()) {
    ga::write_csv_matrix(args.matrix_out, dm.entries);
    report.result["matrix_file"] = args.matrix_out;
  }

  const ga::ClusterResult res = ga::kmeans_igw(gs, args.k, report.seed, cfg);
  json centers = json::array();
  for (const ga::Gaussian& c : res.centers) {
    centers.push_back(to_json(Eigen::VectorXd(c.cov.diagonal())));
  }
  report.result["entities"] = names;
  report.result["labels"] = res.labels;
  report.result["inertia"] = res.inertia;
  report.result["iterations"] = res.iterations;
  report.result["k"] = args.k;
  report.result["center_spectra"] = centers;
}

struct MdsArgs {
  std::string matrix;
  int dim = 2;
  std::string csv_out;
};

void run_mds(const MdsArgs& args, Report& report) {
  report.add_input(args.matrix);
  ga::DistanceMatrix dm{ga::read_csv_matrix(args.matrix)};
  if (dm.entries.rows() != dm.entries.cols()) {
    throw ga::DimensionError("mds: distance matrix must be square");
  }
  const ga::MdsEmbedding embedding = ga::classical_mds(dm, args.dim);
  if (!args.csv_out.empty()) {
    ga::write_csv_matrix(args.csv_out, embedding.coordinates);
    report.result["csv_file"] = args.csv_out;
  }
  report.result["coordinates"] = to_json(embedding.coordinates);
  report.result["negative_mass"] = embedding.negative_mass;
}

struct CkaArgs {
  std::string x;
  std::string y;
  bool center = false;
  bool header = false;
};

void run_cka(const CkaArgs& args, Report& report) {
  report.add_input(args.x);
  report.add_input(args.y);
  const Eigen::MatrixXd x = ga::read_csv_matrix(args.x, args.header);
  const Eigen::MatrixXd y = ga::read_csv_matrix(args.y, args.header);
  report.result = {{"cka", ga::cka(x, y, args.center)}, {"centered", args.center}};
}

struct BenchArgs {
  std::vector<int> p_list = {3, 5, 10, 50, 100};
  int dim = 3;
  double ridge = 0.1;
  ga::SolverConfig cfg = ga::mmot_rtr_defaults();
};

void run_bench_mmot(const BenchArgs& args, Report& report) {
  json rows = json::array();
  json times = json::array();
  for (const int p : args.p_list) {
    const std::vector<ga::Gaussian> gs =
        ga::random_covariance_ensemble(p, args.dim, args.ridge, report.seed);
    ga::SolverConfig cfg = args.cfg;
    cfg.seed = report.seed;
    const auto start = Clock::now();
    const ga::MultiCoupling mc = ga::mm_ot_solve(gs, cfg);
    const double elapsed = seconds_since(start);
    rows.push_back({{"p", p},
                    {"dim", args.dim},
                    {"k", args.dim + 1},
                    {"cost", mc.cost},
                    {"objective", ga::mm_ot_objective(mc)},
                    {"certificate", certificate_json(*mc.certificate)}});
    times.push_back({{"p", p}, {"seconds", elapsed}});
    for (const std::string& w : mc.warnings) {
      report.warnings.push_back("p=" + std::to_string(p) + ": " + w);
    }
  }
  report.result["entries"] = rows;
  report.timings["per_p"] = times;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian optimal transport and IGW alignment toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed (fallback: GAUSSALIGN_SEED, then 0)")
      ->each([&global](const std::string&) { global.seed_set = true; });
  app.add_option("--threads", global.threads,
                 "Worker threads for pairwise fills (default: hardware)");
  app.add_option("--out", global.out_path, "Write the JSON report to a file");
  app.add_flag("--timings", global.emit_timings,
               "Include wall-clock timings in the report (off keeps reports "
               "byte-identical across runs)");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a Gaussian to a point cloud CSV");
  fit_cmd->add_option("--input", fit.input, "Samples, one row per point")->required();
  fit_cmd->add_option("--out", fit.out, "Output Gaussian JSON path")->required();
  fit_cmd->add_option("--ridge", fit.ridge, "Ridge added to the covariance diagonal");
  fit_cmd->add_flag("--csv-header", fit.header, "Skip the first CSV line");

  PairArgs w2;
  CLI::App* w2_cmd = app.add_subcommand("w2", "2-Wasserstein distance/map/interpolation");
  w2_cmd->add_option("--a", w2.a, "First Gaussian JSON")->required();
  w2_cmd->add_option("--b", w2.b, "Second Gaussian JSON")->required();
  w2_cmd->add_option("--action", w2.action, "distance | map | interpolate");
  w2_cmd->add_option("--t", w2.t, "Interpolation time in [0,1]");

  IgwArgs igw;
  CLI::App* igw_cmd = app.add_subcommand("igw", "IGW distance between two Gaussians");
  igw_cmd->add_option("--a", igw.a, "First Gaussian JSON")->required();
  igw_cmd->add_option("--b", igw.b, "Second Gaussian JSON")->required();
  igw_cmd->add_option("--method", igw.method, "closed | rgd | bounds");
  igw_cmd->add_option("--max-iters", igw.cfg.max_iters, "RGD iteration budget");
  igw_cmd->add_option("--grad-tol", igw.cfg.grad_tol, "RGD gradient tolerance");
  igw_cmd->add_option("--restarts", igw.cfg.restarts, "Extra random inits");
  igw_cmd->add_option("--step-init", igw.cfg.step_init, "Initial trial step");

  BarycenterArgs igw_bar;
  CLI::App* igw_bar_cmd =
      app.add_subcommand("igw-barycenter", "IGW barycenter of centered Gaussians");
  igw_bar_cmd->add_option("--inputs", igw_bar.inputs, "Gaussian JSON files")
      ->required()
      ->expected(-1);
  igw_bar_cmd->add_option("--weights", igw_bar.weights, "Barycenter weights")
      ->expected(-1);
  igw_bar_cmd->add_option("--dim", igw_bar.dim, "Output dimension (default: max input)");

  MmotArgs mmot;
  CLI::App* mmot_cmd =
      app.add_subcommand("mmot", "Multimarginal OT via low-rank factorization");
  mmot_cmd->add_option("--inputs", mmot.inputs, "Gaussian JSON files")
      ->required()
      ->expected(-1);
  mmot_cmd->add_option("--weights", mmot.weights, "Also compute this weighted barycenter")
      ->expected(-1);
  mmot_cmd->add_flag("--barycenter", mmot.barycenter_requested,
                     "Compute the uniform-weight barycenter");
  mmot_cmd->add_option("--max-iters", mmot.cfg.max_iters, "Trust-region budget");
  mmot_cmd->add_option("--grad-tol", mmot.cfg.grad_tol, "Gradient tolerance");
  mmot_cmd->add_option("--restarts", mmot.cfg.restarts, "Negative-curvature escapes");

  std::vector<std::string> mm_igw_inputs;
  CLI::App* mm_igw_cmd =
      app.add_subcommand("mm-igw", "Closed-form multimarginal IGW (centered inputs)");
  mm_igw_cmd->add_option("--inputs", mm_igw_inputs, "Gaussian JSON files")
      ->required()
      ->expected(-1);

  ClusterArgs cluster;
  CLI::App* cluster_cmd = app.add_subcommand(
      "cluster", "k-means++ under the IGW distance over a directory of entities");
  cluster_cmd->add_option("--dir", cluster.dir, "Directory of Gaussian JSON / CSV files")
      ->required();
  cluster_cmd->add_option("--k", cluster.k, "Cluster count");
  cluster_cmd->add_option("--mode", cluster.mode, "closed | rgd | upper | lower");
  cluster_cmd->add_option("--matrix-out", cluster.matrix_out,
                          "Write the pairwise distance matrix CSV here");
  cluster_cmd->add_option("--ridge", cluster.ridge, "Ridge for CSV entities");
  cluster_cmd->add_flag("--csv-header", cluster.header, "Skip CSV headers");

  MdsArgs mds;
  CLI::App* mds_cmd = app.add_subcommand("mds", "Classical MDS of a distance matrix CSV");
  mds_cmd->add_option("--matrix", mds.matrix, "Square distance matrix CSV")->required();
  mds_cmd->add_option("--dim", mds.dim, "Embedding dimension");
  mds_cmd->add_option("--csv-out", mds.csv_out, "Write coordinates CSV here");

  CkaArgs cka_args;
  CLI::App* cka_cmd = app.add_subcommand("cka", "Gram-correlation between embeddings");
  cka_cmd->add_option("--x", cka_args.x, "First embedding CSV (rows = samples)")->required();
  cka_cmd->add_option("--y", cka_args.y, "Second embedding CSV")->required();
  cka_cmd->add_flag("--center", cka_args.center, "Column-center before the Gram products");
  cka_cmd->add_flag("--csv-header", cka_args.header, "Skip CSV headers");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench-mmot", "Multimarginal OT scaling sweep on a seeded random ensemble");
  bench_cmd->add_option("--p-list", bench.p_list, "Marginal counts to sweep")
      ->expected(-1);
  bench_cmd->add_option("--dim", bench.dim, "Marginal dimension");
  bench_cmd->add_option("--ridge", bench.ridge, "Diagonal ridge of the ensemble");
  bench_cmd->add_option("--max-iters", bench.cfg.max_iters, "Trust-region budget");
  bench_cmd->add_option("--grad-tol", bench.cfg.grad_tol, "Gradient tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Report report;
  try {
    report.seed = resolve_seed(global);
    const int threads = resolve_threads(global);
    const auto start = Clock::now();

    if (*fit_cmd) {
      report.command = "fit";
      run_fit(fit, report);
    } else if (*w2_cmd) {
      report.command = "w2";
      run_w2(w2, report);
    } else if (*igw_cmd) {
      report.command = "igw";
      run_igw(igw, report);
    } else if (*igw_bar_cmd) {
      report.command = "igw-barycenter";
      run_igw_barycenter(igw_bar, report);
    } else if (*mmot_cmd) {
      report.command = "mmot";
      run_mmot(mmot, report);
    } else if (*mm_igw_cmd) {
      report.command = "mm-igw";
      run_mm_igw(mm_igw_inputs, report);
    } else if (*cluster_cmd) {
      report.command = "cluster";
      run_cluster(cluster, report, threads);
    } else if (*mds_cmd) {
      report.command = "mds";
      run_mds(mds, report);
    } else if (*cka_cmd) {
      report.command = "cka";
      run_cka(cka_args, report);
    } else if (*bench_cmd) {
      report.command = "bench-mmot";
      run_bench_mmot(bench, report);
    }

    report.timings["total_seconds"] = seconds_since(start);
    emit(report, global);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const ga::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

#include "gaussalign/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "gaussalign/errors.hpp"
#include "gaussalign/igw.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double pair_distance(const Gaussian& a, const Gaussian& b, const SolverConfig& cfg,
                     PairwiseMode mode, std::uint64_t pair_seed, int i, int j) {
  switch (mode) {
    case PairwiseMode::kClosed: {
      std::optional<double> value = igw_closed_form(a, b);
      if (!value) {
        std::ostringstream msg;
        msg << "pairwise_igw_matrix: no closed form applies to pair (" << i << ", "
            << j << "); use the rgd or bound modes";
        throw UnsupportedInputError(msg.str());
      }
      return *value;
    }
    case PairwiseMode::kRgd: {
      SolverConfig pair_cfg = cfg;
      pair_cfg.seed = pair_seed;
      return igw_distance_rgd(a, b, pair_cfg).distance;
    }
    case PairwiseMode::kUpper:
      return igw_bounds(a, b).upper;
    case PairwiseMode::kLower:
      return igw_bounds(a, b).lower;
  }
  throw Error("pairwise_igw_matrix: unknown mode");
}

}  // namespace

DistanceMatrix pairwise_igw_matrix(const std::vector<Gaussian>& gaussians,
                                   const SolverConfig& cfg, PairwiseMode mode,
                                   int threads) {
  const int n = static_cast<int>(gaussians.size());
  if (n == 0) throw EmptyInputError("pairwise_igw_matrix: empty input list");

  DistanceMatrix dm;
  dm.entries = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(pairs.size())));
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto fill_range = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t idx = begin; idx < end; ++idx) {
        const auto [i, j] = pairs[idx];
        const std::uint64_t pair_seed =
            splitmix64(cfg.seed ^ splitmix64((static_cast<std::uint64_t>(i) << 32) |
                                             static_cast<std::uint64_t>(j)));
        const double value =
            pair_distance(gaussians[i], gaussians[j], cfg, mode, pair_seed, i, j);
        dm.entries(i, j) = value;
        dm.entries(j, i) = value;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    fill_range(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (pairs.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = static_cast<std::size_t>(w) * chunk;
      const std::size_t end = std::min(begin + chunk, pairs.size());
      if (begin >= end) break;
      pool.emplace_back(fill_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return dm;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  std::vector<Eigen::VectorXd> centers;
  double inertia = 0.0;
  int iterations = 0;
};

// One k-means++ seeding plus Lloyd iterations on padded sorted spectra,
// where the centered IGW distance is the plain l2 distance.
LloydRun lloyd_once(const std::vector<Eigen::VectorXd>& spectra, int k,
                    std::mt19937_64& rng) {
  const int n = static_cast<int>(spectra.size());
  const int d = static_cast<int>(spectra.front().size());

  std::vector<Eigen::VectorXd> centers;
  centers.reserve(k);
  std::uniform_int_distribution<int> first(0, n - 1);
  centers.push_back(spectra[first(rng)]);
  Eigen::VectorXd d_sq(n);
  while (static_cast<int>(centers.size()) < k) {
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) {
        best = std::min(best, (spectra[i] - c).squaredNorm());
      }
      d_sq(i) = best;
    }
    const double total = d_sq.sum();
    int pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> unif(0.0, total);
      double target = unif(rng);
      for (; pick < n - 1; ++pick) {
        target -= d_sq(pick);
        if (target <= 0.0) break;
      }
    } else {
      pick = first(rng);
    }
    centers.push_back(spectra[pick]);
  }

  auto assign = [&](std::vector<int>& labels) {
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (spectra[i] - centers[0]).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (spectra[i] - centers[c]).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      labels[i] = best;
      inertia += best_d;
    }
    return inertia;
  };

  LloydRun run;
  double prev_inertia = std::numeric_limits<double>::infinity();
  std::vector<int> labels(n, -1);
  int iter = 0;
  for (; iter < 100; ++iter) {
    std::vector<int> new_labels(n, -1);
    const double inertia = assign(new_labels);
    if (inertia > prev_inertia * (1.0 + 1e-9) + 1e-12) {
      throw Error("kmeans_igw: inertia increased across a Lloyd iteration");
    }
    prev_inertia = inertia;
    run.inertia = inertia;
    const bool stable = (new_labels == labels) && iter > 0;
    labels = std::move(new_labels);
    if (stable) break;

    // Center update: uniform-weight spectrum average per cluster.
    std::vector<int> counts(k, 0);
    std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(d));
    for (int i = 0; i < n; ++i) {
      counts[labels[i]]++;
      sums[labels[i]] += spectra[i];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers[c] = sums[c] / counts[c];
      } else {
        // Reseed an empty cluster from the farthest point.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double dist = (spectra[i] - centers[labels[i]]).squaredNorm();
          if (dist > far_d) {
            far_d = dist;
            far = i;
          }
        }
        centers[c] = spectra[far];
      }
    }
  }

  run.labels = std::move(labels);
  run.centers = std::move(centers);
  run.iterations = iter;
  return run;
}

}  // namespace

ClusterResult kmeans_igw(const std::vector<Gaussian>& gaussians, int k,
                         std::uint64_t seed, const SolverConfig& cfg) {
  const int n = static_cast<int>(gaussians.size());
  if (n == 0) throw EmptyInputError("kmeans_igw: empty input list");
  if (k < 1 || k > n) {
    std::ostringstream msg;
    msg << "kmeans_igw: k = " << k << " outside [1, " << n << "]";
    throw InvalidInputError(msg.str());
  }
  int d = 0;
  for (const Gaussian& g : gaussians) {
    if (!g.centered(1e-12)) {
      throw UnsupportedInputError("kmeans_igw: inputs must be centered");
    }
    d = std::max(d, g.dim());
  }

  std::vector<Eigen::VectorXd> spectra;
  spectra.reserve(n);
  for (const Gaussian& g : gaussians) spectra.push_back(padded_spectrum(g, d));

  // Several seeding restarts, best inertia kept; all draws come from one
  // seeded generator, so results are a pure function of the seed.
  std::mt19937_64 rng(seed);
  const int attempts = std::max(1, cfg.restarts + 1);
  LloydRun best;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    LloydRun run = lloyd_once(spectra, k, rng);
    if (attempt == 0 || run.inertia < best.inertia) best = std::move(run);
    if (best.inertia == 0.0) break;
  }

  ClusterResult result;
  result.seed = seed;
  result.labels = best.labels;
  result.inertia = best.inertia;
  result.iterations = best.iterations;
  result.centers.reserve(k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd spectrum = best.centers[c].cwiseMax(0.0);
    std::sort(spectrum.data(), spectrum.data() + spectrum.size(),
              std::greater<double>());
    result.centers.push_back(
        Gaussian{Eigen::VectorXd::Zero(d), Eigen::MatrixXd(spectrum.asDiagonal())});
  }
  return result;
}

MdsEmbedding classical_mds(const DistanceMatrix& dm, int out_dim) {
  if (out_dim < 1) throw RangeError("classical_mds: out_dim must be >= 1");
  const int n = dm.size();
  if (n == 0) throw EmptyInputError("classical_mds: empty distance matrix");

  const Eigen::MatrixXd d_sq = dm.entries.cwiseProduct(dm.entries);
  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) -
                            Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd b = -0.5 * j * d_sq * j;
  SpectralDecomposition eig = sym_eig(b);

  MdsEmbedding out;
  const int kept = std::min(out_dim, n);
  out.coordinates = Eigen::MatrixXd::Zero(n, out_dim);
  for (int c = 0; c < kept; ++c) {
    const double lambda = eig.eigenvalues(c);
    if (lambda > 0.0) {
      out.coordinates.col(c) = eig.eigenvectors.col(c) * std::sqrt(lambda);
    }
  }
  for (int c = 0; c < n; ++c) {
    if (eig.eigenvalues(c) < 0.0) out.negative_mass += -eig.eigenvalues(c);
  }
  return out;
}

double cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, bool center_columns) {
  if (x.rows() != y.rows()) {
    std::ostringstream msg;
    msg << "cka: row counts differ (" << x.rows() << " vs " << y.rows() << ")";
    throw InvalidInputError(msg.str());
  }
  Eigen::MatrixXd xc = x;
  Eigen::MatrixXd yc = y;
  if (center_columns) {
    xc.rowwise() -= x.colwise().mean();
    yc.rowwise() -= y.colwise().mean();
  }
  const double gram_x = (xc.transpose() * xc).norm();
  const double gram_y = (yc.transpose() * yc).norm();
  if (gram_x == 0.0 || gram_y == 0.0) {
    throw InvalidInputError("cka: undefined for a zero Gram matrix");
  }
  return (yc.transpose() * xc).squaredNorm() / (gram_x * gram_y);
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) {
    throw DimensionError("adjusted_rand_index: label vectors differ in length");
  }
  const std::size_t n = a.size();
  if (n == 0) throw EmptyInputError("adjusted_rand_index: empty labelings");

  std::map<std::pair<int, int>, long long> table;
  std::map<int, long long> row_sums;
  std::map<int, long long> col_sums;
  for (std::size_t i = 0; i < n; ++i) {
    table[{a[i], b[i]}]++;
    row_sums[a[i]]++;
    col_sums[b[i]]++;
  }
  auto choose2 = [](long long m) { return 0.5 * m * (m - 1); };

  double sum_cells = 0.0;
  for (const auto& [key, count] : table) sum_cells += choose2(count);
  double sum_rows = 0.0;
  for (const auto& [key, count] : row_sums) sum_rows += choose2(count);
  double sum_cols = 0.0;
  for (const auto& [key, count] : col_sums) sum_cols += choose2(count);

  const double total = choose2(static_cast<long long>(n));
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both labelings trivial
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace gaussalign

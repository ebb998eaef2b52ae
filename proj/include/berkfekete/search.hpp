#pragma once

// Numerical maximization of (F,F)_g over N-point spherical configurations
// (archimedean only): coordinate-wise local search with strict-improvement
// acceptance, step decay, and deterministic parallel restarts.
//
// Points live in one of two stereographic charts (value, or 1/value) with
// re-centering whenever a proposal leaves the unit disk of its chart, so no
// coordinate ever blows up near infinity.

#include <berkfekete/bounds.hpp>

#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

namespace berkfekete {

struct SearchConfig {
  int n_points = 4;
  int iterations = 10000;
  int restarts = 8;
  double initial_step = 0.5;
  double step_decay = 0.95;
  std::uint64_t seed = 0;
  bool include_structured_seeds = true;

  void validate() const {
    if (n_points < 2) throw precondition_error("SearchConfig: N >= 2");
    if (iterations < 1 || restarts < 1) throw precondition_error("SearchConfig: positive budget");
    if (!(initial_step > 0)) throw precondition_error("SearchConfig: positive step");
    if (!(step_decay > 0) || !(step_decay < 1))
      throw precondition_error("SearchConfig: decay in (0,1)");
  }
};

namespace detail {

// a point of the chordal sphere in one of two charts
struct ChartPoint {
  std::complex<double> v;
  bool inverted = false;

  // homogeneous coordinates (p0, p1) with z = p1/p0
  std::pair<std::complex<double>, std::complex<double>> homogeneous() const {
    if (inverted) return {v, {1.0, 0.0}};
    return {{1.0, 0.0}, v};
  }
  void recenter() {
    if (std::abs(v) > 1.0) {
      v = std::complex<double>(1.0, 0.0) / v;
      inverted = !inverted;
    }
  }
  ProjPoint to_proj() const {
    if (inverted) {
      if (v == std::complex<double>(0.0, 0.0)) return ProjPoint::infinity();
      return ProjPoint::affine_cplx(std::complex<double>(1.0, 0.0) / v);
    }
    return ProjPoint::affine_cplx(v);
  }
};

inline double chart_chordal(const ChartPoint& a, const ChartPoint& b) {
  auto [a0, a1] = a.homogeneous();
  auto [b0, b1] = b.homogeneous();
  double wedge = std::abs(a0 * b1 - a1 * b0);
  return wedge / std::sqrt((std::norm(a0) + std::norm(a1)) * (std::norm(b0) + std::norm(b1)));
}

// g evaluated through homogeneous coordinates (weights in scope only read
// the classical point, so to_proj is enough)
inline double chart_weight(const Weight& g, const ChartPoint& a) {
  return g.eval(BerkPoint::classical(a.to_proj()));
}

inline double pair_phi(const ChartPoint& a, const ChartPoint& b, double ga, double gb) {
  return std::log(chart_chordal(a, b)) - ga - gb;
}

struct RestartResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<ChartPoint> pts;
};

inline RestartResult run_restart(const Weight& g, const SearchConfig& cfg,
                                 std::vector<ChartPoint> pts, std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = cfg.n_points;

  std::vector<double> gv(n);
  for (int i = 0; i < n; ++i) gv[i] = chart_weight(g, pts[i]);
  auto row_energy = [&](int i, const ChartPoint& p, double gp) {
    double s = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double ch = chart_chordal(p, pts[j]);
      if (ch < 1e-12) return -std::numeric_limits<double>::infinity();  // collision
      s += std::log(ch) - gp - gv[j];
    }
    return s;
  };

  double step = cfg.initial_step;
  for (int it = 0; it < cfg.iterations; ++it) {
    int i = it % n;
    ChartPoint prop = pts[i];
    prop.v += step * std::complex<double>(gauss(rng), gauss(rng));
    prop.recenter();
    double gp = chart_weight(g, prop);
    double before = row_energy(i, pts[i], gv[i]);
    double after = row_energy(i, prop, gp);
    if (after > before) {
      pts[i] = prop;
      gv[i] = gp;
    }
    if ((it + 1) % n == 0) step *= cfg.step_decay;
  }

  RestartResult out;
  out.value = 0;
  for (int i = 0; i < n; ++i) out.value += row_energy(i, pts[i], gv[i]);
  out.pts = std::move(pts);
  return out;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (idx + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::vector<ChartPoint> random_config(int n, std::uint64_t sd) {
  std::mt19937_64 rng(sd);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ChartPoint> pts(n);
  for (auto& p : pts) {
    // uniform on the sphere via a random unit 3-vector
    double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    double nn = std::sqrt(x * x + y * y + z * z);
    if (nn == 0) {
      p = {{0.0, 0.0}, false};
      continue;
    }
    x /= nn;
    y /= nn;
    z /= nn;
    if (z <= 0)
      p = {{x / (1.0 - z), y / (1.0 - z)}, false};
    else
      p = {{x / (1.0 + z), -y / (1.0 + z)}, true};
  }
  return pts;
}

inline std::vector<ChartPoint> unity_config(int n) {
  std::vector<ChartPoint> pts(n);
  for (int k = 0; k < n; ++k)
    pts[k] = {std::polar(1.0, 2 * std::numbers::pi * k / n), false};
  return pts;
}

inline unsigned max_threads() {
  if (const char* env = std::getenv("BERKFEKETE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace detail

struct SearchResult {
  Divisor best;
  double best_value = 0;
  double ratio = 0;
  BoundReport bound_report;
  SearchConfig config;
};

// Maximize (F,F)_g over N-point configurations.  Restarts run in parallel,
// each on its own RNG stream derived from (seed, restart index); the merge
// takes the maximum, ties resolved by lowest index, so results are
// deterministic for a fixed config.
inline SearchResult fekete_maximize(const Weight& g, const SearchConfig& cfg) {
  cfg.validate();
  if (g.mode.is_padic())
    throw unsupported_mode_error("fekete_maximize: exact mode has no continuous search space");
  if (!g.holder) throw precondition_error("fekete_maximize: weight needs Holder data");
  const FieldMode mode = FieldMode::archimedean();

  // seed configurations: roots of unity first (when enabled), then random
  std::vector<std::vector<detail::ChartPoint>> seeds;
  if (cfg.include_structured_seeds) seeds.push_back(detail::unity_config(cfg.n_points));
  for (int r = static_cast<int>(seeds.size()); r < cfg.restarts; ++r)
    seeds.push_back(detail::random_config(cfg.n_points, detail::stream_seed(cfg.seed, 1000 + r)));

  std::vector<detail::RestartResult> results(seeds.size());
  const unsigned workers = std::min<unsigned>(detail::max_threads(), seeds.size());
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        size_t idx = next.fetch_add(1);
        if (idx >= seeds.size()) return;
        results[idx] =
            detail::run_restart(g, cfg, seeds[idx], detail::stream_seed(cfg.seed, idx));
      }
    });
  }
  for (auto& t : pool) t.join();

  size_t best_idx = 0;
  for (size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[best_idx].value) best_idx = i;

  // one polishing restart from the winner (the "previous best" seed)
  if (cfg.include_structured_seeds) {
    auto polish = detail::run_restart(g, cfg, results[best_idx].pts,
                                      detail::stream_seed(cfg.seed, 999983));
    if (polish.value > results[best_idx].value) results[best_idx] = std::move(polish);
  }

  const auto& win = results[best_idx];
  std::vector<ProjPoint> pts;
  pts.reserve(win.pts.size());
  for (const auto& p : win.pts) pts.push_back(p.to_proj());

  SearchResult out;
  out.config = cfg;
  out.best = Divisor::of_points(pts);
  out.best_value = win.value;
  double n = static_cast<double>(cfg.n_points);
  out.ratio = win.value / (n * std::log(n));
  out.bound_report = holder_bound_check(g, out.best, mode);
  if (!out.bound_report.holds)
    throw std::runtime_error("fekete_maximize: returned configuration violates the Holder bound");
  return out;
}

struct RatioReportRow {
  long long n = 0;
  double best_value = 0;
  double ratio = 0;
  double bound_ratio = 0;
};

inline std::vector<RatioReportRow> ratio_report(const Weight& g, const std::vector<int>& n_list,
                                                SearchConfig base) {
  std::vector<RatioReportRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    SearchConfig cfg = base;
    cfg.n_points = n;
    auto res = fekete_maximize(g, cfg);
    double kappa = g.holder->kappa;
    double cprime = g.holder->C;  // archimedean C' = C
    RatioReportRow row;
    row.n = n;
    row.best_value = res.best_value;
    row.ratio = res.ratio;
    row.bound_ratio = kappa + 2.0 * (cprime + std::pow(double(n), 1.0 - kappa) + g.sup_abs) /
                                  std::log(double(n));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace berkfekete

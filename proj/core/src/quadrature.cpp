#include "bsep/quadrature.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <thread>
#include <utility>

#include <boost/random/sobol.hpp>

#include "bsep/error.hpp"

namespace bsep {

namespace {

constexpr std::size_t kMaxDimension = 16;

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussRule compute_rule(int n) {
  GaussRule r;
  if (n == 1) return {{0.0}, {2.0}};
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    r.nodes[idx] = x;
    r.weights[idx] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double legendre(int m, double x) {
  switch (m) {
    case 2:
      return 0.5 * (3 * x * x - 1);
    case 3:
      return 0.5 * (5 * x * x * x - 3 * x);
    default:
      return 1.0;
  }
}

struct Cell {
  std::vector<double> lo;
  std::vector<double> hi;
  double estimate = 0.0;
  double error = 0.0;
  double scale = 0.0;  ///< typical |density|, inherited by mixed children
  std::size_t split_axis = 0;
  bool final = false;
};

class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(const IntegrandSpec& spec, const AdaptiveOptions& opt)
      : spec_(spec), opt_(opt), d_(spec.dimension), g3_(gauss_legendre(3)), g4_(gauss_legendre(4)) {
    n4_ = 1;
    n3_ = 1;
    for (std::size_t i = 0; i < d_; ++i) {
      n4_ *= 4;
      n3_ *= 3;
    }
  }

  IntegrationResult run() {
    Cell root{spec_.lo, spec_.hi};
    evaluate(root, 0.0);
    cells_.push_back(std::move(root));

    auto cmp = [this](std::size_t a, std::size_t b) { return cells_[a].error < cells_[b].error; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    if (!cells_[0].final) heap.push(0);

    double total = cells_[0].estimate;
    // Cells at the size floor keep their error; once that alone exceeds the
    // tolerance, refine the rest down to a small share of it and stop.
    double refinable = cells_[0].final ? 0.0 : cells_[0].error;
    double frozen = cells_[0].final ? cells_[0].error : 0.0;
    bool budget_hit = false;
    while (!heap.empty() && refinable + frozen > tolerance(total) &&
           refinable > 0.05 * tolerance(total)) {
      if (evals_ >= opt_.max_evals) {
        budget_hit = true;
        break;
      }
      const std::size_t idx = heap.top();
      heap.pop();
      Cell parent = std::move(cells_[idx]);
      cells_[idx] = Cell{};
      total -= parent.estimate;
      refinable -= parent.error;

      const std::size_t ax = parent.split_axis;
      const double mid = 0.5 * (parent.lo[ax] + parent.hi[ax]);
      Cell left{parent.lo, parent.hi};
      Cell right{parent.lo, parent.hi};
      left.hi[ax] = mid;
      right.lo[ax] = mid;
      for (Cell* c : {&left, &right}) {
        evaluate(*c, parent.scale);
        total += c->estimate;
        const bool keep = !c->final;
        (keep ? refinable : frozen) += c->error;
        cells_.push_back(std::move(*c));
        if (keep) heap.push(cells_.size() - 1);
      }
      // Guard against drift from repeated subtraction.
      refinable = std::max(refinable, 0.0);
    }

    std::vector<double> est;
    std::vector<double> errs;
    est.reserve(cells_.size());
    errs.reserve(cells_.size());
    for (const Cell& c : cells_) {
      if (c.lo.empty()) continue;
      est.push_back(c.estimate);
      errs.push_back(c.error);
    }
    IntegrationResult out;
    out.estimate = pairwise_sum(est);
    out.error_estimate = pairwise_sum(errs);
    out.evaluations = evals_;
    out.engine = Engine::adaptive;
    out.converged = !budget_hit && out.error_estimate <= tolerance(out.estimate) * (1 + 1e-9);
    return out;
  }

 private:
  double tolerance(double total) const {
    return std::max(opt_.abs_tol, opt_.rel_tol * std::abs(total));
  }

  bool inside(std::span<const double> x) const { return !spec_.indicator || spec_.indicator(x); }

  double density(std::span<const double> x) {
    ++evals_;
    return spec_.density(x);
  }

  // Tensor-product node x for multi-index k (base n) of the given rule.
  void node(const Cell& c, const GaussRule& g, std::size_t k, std::array<double, kMaxDimension>& x,
            double& w, std::array<std::size_t, kMaxDimension>& digits) const {
    const std::size_t n = g.nodes.size();
    w = 1.0;
    for (std::size_t a = 0; a < d_; ++a) {
      const std::size_t i = k % n;
      k /= n;
      digits[a] = i;
      const double half = 0.5 * (c.hi[a] - c.lo[a]);
      x[a] = c.lo[a] + half * (1.0 + g.nodes[i]);
      w *= g.weights[i] * half;
    }
  }

  double volume(const Cell& c) const {
    double v = 1.0;
    for (std::size_t a = 0; a < d_; ++a) v *= c.hi[a] - c.lo[a];
    return v;
  }

  bool splittable(const Cell& c, std::size_t a) const {
    return c.hi[a] - c.lo[a] > opt_.size_floor * (spec_.hi[a] - spec_.lo[a]);
  }

  std::size_t widest_axis(const Cell& c) const {
    std::size_t best = 0;
    double w = -1.0;
    for (std::size_t a = 0; a < d_; ++a) {
      const double rel = (c.hi[a] - c.lo[a]) / (spec_.hi[a] - spec_.lo[a]);
      if (rel > w) {
        w = rel;
        best = a;
      }
    }
    return best;
  }

  void evaluate(Cell& c, double inherited_scale) {
    std::array<double, kMaxDimension> x{};
    std::array<std::size_t, kMaxDimension> digits{};
    const std::span<const double> xs(x.data(), d_);

    // Indicator samples: vertices, centre, then the 4-point nodes.
    std::size_t in_count = 0;
    std::size_t total_count = 0;
    std::vector<bool> vertex_in;
    if (spec_.indicator) {
      const std::size_t nv = std::size_t{1} << d_;
      vertex_in.resize(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t a = 0; a < d_; ++a) x[a] = (v >> a) & 1u ? c.hi[a] : c.lo[a];
        vertex_in[v] = inside(xs);
        in_count += vertex_in[v];
      }
      for (std::size_t a = 0; a < d_; ++a) x[a] = 0.5 * (c.lo[a] + c.hi[a]);
      in_count += inside(xs);
      total_count = nv + 1;
    }

    std::vector<double> f4(n4_, 0.0);
    std::vector<bool> node_in(n4_, true);
    double gl4 = 0.0;
    double max_f = 0.0;
    double sum_in_f = 0.0;
    std::size_t in_nodes = 0;
    for (std::size_t k = 0; k < n4_; ++k) {
      double w = 0.0;
      node(c, g4_, k, x, w, digits);
      if (spec_.indicator) {
        node_in[k] = inside(xs);
        ++total_count;
        in_count += node_in[k];
      }
      if (node_in[k]) {
        f4[k] = density(xs);
        gl4 += w * f4[k];
        max_f = std::max(max_f, std::abs(f4[k]));
        sum_in_f += f4[k];
        ++in_nodes;
      }
    }
    const double vol = volume(c);

    if (spec_.indicator && in_count == 0) {
      c.estimate = 0.0;
      c.error = 0.0;
      c.final = true;
      return;
    }

    const bool mixed = spec_.indicator && in_count != total_count;
    if (!mixed) {
      double gl3 = 0.0;
      for (std::size_t k = 0; k < n3_; ++k) {
        double w = 0.0;
        node(c, g3_, k, x, w, digits);
        gl3 += w * density(xs);
      }
      c.estimate = gl4;
      c.error = std::abs(gl4 - gl3);
      c.scale = max_f;
      c.split_axis = null_rule_axis(c, f4);
      if (!splittable(c, c.split_axis)) c.final = true;
      return;
    }

    // Mixed cell: keep the masked estimate but count it all as error.
    const double frac = static_cast<double>(in_count) / static_cast<double>(total_count);
    c.scale = in_nodes > 0 ? max_f : inherited_scale;
    c.estimate = gl4;
    c.error = std::max(std::abs(gl4), frac * vol * c.scale);

    std::array<std::size_t, kMaxDimension> disagree{};
    for (std::size_t v = 0; v < vertex_in.size(); ++v) {
      for (std::size_t a = 0; a < d_; ++a) {
        const std::size_t u = v ^ (std::size_t{1} << a);
        if (u > v && vertex_in[u] != vertex_in[v]) ++disagree[a];
      }
    }
    std::size_t best = d_;
    for (std::size_t a = 0; a < d_; ++a) {
      if (!splittable(c, a) || disagree[a] == 0) continue;
      if (best == d_ || disagree[a] > disagree[best] ||
          (disagree[a] == disagree[best] &&
           (c.hi[a] - c.lo[a]) / (spec_.hi[a] - spec_.lo[a]) >
               (c.hi[best] - c.lo[best]) / (spec_.hi[best] - spec_.lo[best]))) {
        best = a;
      }
    }
    if (best == d_) {
      const std::size_t w = widest_axis(c);
      if (splittable(c, w)) best = w;
    }
    if (best == d_) {
      // Below the size floor: inside fraction times mean inside density.
      const double mean_f = in_nodes > 0 ? sum_in_f / static_cast<double>(in_nodes) : c.scale;
      c.estimate = frac * mean_f * vol;
      c.error = std::min(frac, 1.0 - frac) * std::abs(mean_f) * vol;
      c.final = true;
      return;
    }
    c.split_axis = best;
  }

  std::size_t null_rule_axis(const Cell& c, const std::vector<double>& f4) const {
    std::array<double, kMaxDimension> s2{};
    std::array<double, kMaxDimension> s3{};
    std::array<std::size_t, kMaxDimension> digits{};
    for (std::size_t k = 0; k < n4_; ++k) {
      std::size_t kk = k;
      double wprod = 1.0;
      for (std::size_t a = 0; a < d_; ++a) {
        digits[a] = kk % 4;
        kk /= 4;
        wprod *= g4_.weights[digits[a]];
      }
      for (std::size_t a = 0; a < d_; ++a) {
        const double xa = g4_.nodes[digits[a]];
        s2[a] += wprod * legendre(2, xa) * f4[k];
        s3[a] += wprod * legendre(3, xa) * f4[k];
      }
    }
    // Null rules on the existing nodes: quadratic and cubic content per axis.
    std::array<double, kMaxDimension> score{};
    for (std::size_t a = 0; a < d_; ++a) score[a] = std::abs(s2[a]) + std::abs(s3[a]);
    std::size_t best = widest_axis(c);
    double best_score = std::abs(score[best]) * 1.0000001;
    for (std::size_t a = 0; a < d_; ++a) {
      if (!splittable(c, a)) continue;
      if (std::abs(score[a]) > best_score) {
        best_score = std::abs(score[a]);
        best = a;
      }
    }
    if (!splittable(c, best)) {
      for (std::size_t a = 0; a < d_; ++a) {
        if (splittable(c, a)) return a;
      }
    }
    return best;
  }

  const IntegrandSpec& spec_;
  AdaptiveOptions opt_;
  std::size_t d_;
  const GaussRule& g3_;
  const GaussRule& g4_;
  std::size_t n3_ = 1;
  std::size_t n4_ = 1;
  std::uint64_t evals_ = 0;
  std::vector<Cell> cells_;
};

void check_spec(const IntegrandSpec& spec) {
  if (spec.dimension == 0 || spec.dimension > kMaxDimension) {
    fail(ErrorKind::invalid_argument, "integrand dimension must be in 1.." +
                                          std::to_string(kMaxDimension));
  }
  if (spec.lo.size() != spec.dimension || spec.hi.size() != spec.dimension) {
    fail(ErrorKind::invalid_argument, "box bounds do not match the dimension");
  }
  for (std::size_t a = 0; a < spec.dimension; ++a) {
    if (!(spec.hi[a] > spec.lo[a]) || !std::isfinite(spec.hi[a] - spec.lo[a])) {
      fail(ErrorKind::invalid_argument, "box must be bounded with lo < hi on every axis");
    }
  }
  if (!spec.density) fail(ErrorKind::invalid_argument, "integrand has no density");
}

// Random lower-triangular (unit diagonal) binary matrix acting on 32-bit
// digit vectors, most significant digit first, followed by a digital shift.
struct LinearScramble {
  std::array<std::uint32_t, 32> rows{};
  std::uint32_t shift = 0;

  std::uint32_t apply(std::uint32_t x) const {
    std::uint32_t y = 0;
    for (int k = 0; k < 32; ++k) {
      const std::uint32_t bit = std::popcount(x & rows[static_cast<std::size_t>(k)]) & 1u;
      y |= bit << (31 - k);
    }
    return y ^ shift;
  }
};

LinearScramble make_scramble(std::mt19937_64& rng) {
  LinearScramble s;
  for (int k = 0; k < 32; ++k) {
    // Row k may only see digits 0..k (bits 31..31-k); digit k itself is kept.
    const std::uint32_t allowed = k == 31 ? 0xffffffffu : ~((std::uint32_t{1} << (31 - k)) - 1u);
    const std::uint32_t own = std::uint32_t{1} << (31 - k);
    s.rows[static_cast<std::size_t>(k)] = (static_cast<std::uint32_t>(rng()) & allowed) | own;
  }
  s.shift = static_cast<std::uint32_t>(rng() >> 32);
  return s;
}

double run_replicate(const IntegrandSpec& spec, std::uint64_t m, std::uint64_t seed, unsigned r) {
  const std::size_t d = spec.dimension;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::vector<LinearScramble> scr;
  scr.reserve(d);
  for (std::size_t a = 0; a < d; ++a) scr.push_back(make_scramble(rng));

  boost::random::sobol_engine<std::uint32_t, 32, boost::random::default_sobol_table> eng(d);
  std::array<double, kMaxDimension> x{};
  const std::span<const double> xs(x.data(), d);
  std::vector<double> values(static_cast<std::size_t>(m), 0.0);
  for (std::uint64_t i = 0; i < m; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      // The engine starts after the all-zero point; put it back first.
      const std::uint32_t raw = i == 0 ? 0u : eng();
      const double u = (static_cast<double>(scr[a].apply(raw)) + 0.5) * 0x1p-32;
      x[a] = spec.lo[a] + (spec.hi[a] - spec.lo[a]) * u;
    }
    if (spec.indicator && !spec.indicator(xs)) continue;
    values[static_cast<std::size_t>(i)] = spec.density(xs);
  }
  double vol = 1.0;
  for (std::size_t a = 0; a < d; ++a) vol *= spec.hi[a] - spec.lo[a];
  return vol * pairwise_sum(values) / static_cast<double>(m);
}

}  // namespace

IntegrandSpec IntegrandSpec::box(std::vector<double> lo, std::vector<double> hi, Density density,
                                 Indicator indicator) {
  IntegrandSpec s;
  s.dimension = lo.size();
  s.substitutions.assign(lo.size(), Substitution::identity);
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  s.density = std::move(density);
  s.indicator = std::move(indicator);
  return s;
}

std::string_view to_string(Engine e) { return e == Engine::adaptive ? "adaptive" : "qmc"; }

const GaussRule& gauss_legendre(int n) {
  static const std::vector<GaussRule> rules = [] {
    std::vector<GaussRule> out;
    for (int k = 1; k <= 32; ++k) out.push_back(compute_rule(k));
    return out;
  }();
  if (n < 1 || n > 32) fail(ErrorKind::invalid_argument, "Gauss-Legendre order must be 1..32");
  return rules[static_cast<std::size_t>(n - 1)];
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

IntegrationResult integrate_adaptive(const IntegrandSpec& spec, const AdaptiveOptions& opt) {
  check_spec(spec);
  if (!(opt.rel_tol >= 1e-14) && !(opt.abs_tol > 0.0)) {
    fail(ErrorKind::invalid_argument, "rel_tol must be positive");
  }
  return AdaptiveIntegrator(spec, opt).run();
}

IntegrationResult integrate_qmc(const IntegrandSpec& spec, const QmcOptions& opt) {
  check_spec(spec);
  if (opt.replicates < 2) fail(ErrorKind::invalid_argument, "qmc needs at least 2 replicates");
  const std::uint64_t m = std::max<std::uint64_t>(1, opt.n_points / opt.replicates);
  std::vector<double> est(opt.replicates, 0.0);

  const unsigned threads = std::max(1u, std::min(opt.threads, opt.replicates));
  if (threads == 1) {
    for (unsigned r = 0; r < opt.replicates; ++r) est[r] = run_replicate(spec, m, opt.seed, r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (unsigned r = t; r < opt.replicates; r += threads) {
          est[r] = run_replicate(spec, m, opt.seed, r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  const double mean = pairwise_sum(est) / opt.replicates;
  double ss = 0.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  const double var = ss / (opt.replicates - 1);

  IntegrationResult out;
  out.estimate = mean;
  out.error_estimate = std::sqrt(var / opt.replicates);
  out.evaluations = m * opt.replicates;
  out.engine = Engine::qmc;
  out.seed = opt.seed;
  return out;
}

IntegrandSpec apply_substitution(const IntegrandSpec& spec, std::size_t axis, Substitution kind) {
  check_spec(spec);
  if (axis >= spec.dimension) fail(ErrorKind::invalid_argument, "substitution axis out of range");
  if (kind == Substitution::identity) return spec;

  IntegrandSpec out = spec;
  const double c = 0.5 * (spec.lo[axis] + spec.hi[axis]);
  const double h = 0.5 * (spec.hi[axis] - spec.lo[axis]);
  out.lo[axis] = -0.5 * std::numbers::pi;
  out.hi[axis] = 0.5 * std::numbers::pi;
  if (out.substitutions.size() != spec.dimension) {
    out.substitutions.assign(spec.dimension, Substitution::identity);
  }
  out.substitutions[axis] = kind;

  const std::size_t d = spec.dimension;
  out.density = [inner = spec.density, axis, c, h, d](std::span<const double> t) {
    std::array<double, kMaxDimension> x{};
    std::copy(t.begin(), t.end(), x.begin());
    x[axis] = c + h * std::sin(t[axis]);
    const double jac = h * std::cos(t[axis]);
    if (jac <= 0.0) return 0.0;
    return inner(std::span<const double>(x.data(), d)) * jac;
  };
  if (spec.indicator) {
    out.indicator = [inner = spec.indicator, axis, c, h, d](std::span<const double> t) {
      std::array<double, kMaxDimension> x{};
      std::copy(t.begin(), t.end(), x.begin());
      x[axis] = c + h * std::sin(t[axis]);
      return inner(std::span<const double>(x.data(), d));
    };
  }
  return out;
}

}  // namespace bsep

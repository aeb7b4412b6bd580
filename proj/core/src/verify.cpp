#include "bsep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bsep/bloore.hpp"
#include "bsep/error.hpp"
#include "bsep/metric.hpp"
#include "bsep/sepfun.hpp"

namespace bsep {

namespace {

using std::numbers::pi;

Check make_check(std::string name, double value, double expected, double deviation,
                 double tolerance) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.expected = expected;
  c.deviation = deviation;
  c.tolerance = tolerance;
  c.pass = std::isfinite(deviation) && deviation <= tolerance;
  return c;
}

Check relative_check(std::string name, double value, double expected, double tolerance) {
  return make_check(std::move(name), value, expected, std::abs(value - expected) / std::abs(expected),
                    tolerance);
}

std::vector<Scenario> scenarios(std::initializer_list<const char*> texts) {
  std::vector<Scenario> out;
  for (const char* t : texts) out.push_back(parse_scenario(t));
  return out;
}

const std::vector<Scenario>& bures_volume_scenarios() {
  static const auto v = scenarios({"bures:[(2,3)]:real", "bures:[(2,3)]:complex",
                                   "bures:[(2,3)]:quat", "bures:[(1,4),(2,3)]:real",
                                   "bures:[(1,4),(2,3)]:complex", "bures:[(1,4),(2,3)]:quat"});
  return v;
}

// Uniform on the diagonal simplex with every entry at least `floor`, and
// uniform off-diagonal coordinates in [-1, 1].
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  BloorePoint draw(const Scenario& s, double floor = 0.0) {
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 4> d{};
    double sum = 0.0;
    for (double& v : d) sum += (v = ex(rng_));
    const double scale = 1.0 - 4.0 * floor;
    BloorePoint p;
    p.rho11 = floor + scale * d[0] / sum;
    p.rho22 = floor + scale * d[1] / sum;
    p.rho33 = floor + scale * d[2] / sum;
    p.offdiag.resize(s.offdiag_dimension());
    for (double& x : p.offdiag) x = u(rng_);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Moves coordinate `i` of the chart by `h`; polar charts are perturbed in
// their own coordinates and mapped back.
BloorePoint shifted(const BloorePoint& p, const Scenario& s, Chart chart, std::size_t i, double h) {
  BloorePoint q = p;
  if (i == 0) {
    q.rho11 += h;
    return q;
  }
  if (i == 1) {
    q.rho22 += h;
    return q;
  }
  if (i == 2) {
    q.rho33 += h;
    return q;
  }
  std::size_t offset = 0;
  std::size_t j = i - 3;
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const std::size_t k = s.entry_coords(e);
    if (j < k) {
      if (chart == Chart::cartesian || k == 1) {
        q.offdiag[offset + j] += h;
      } else {
        const std::span<const double> cart(p.offdiag.data() + offset, k);
        auto polar = entry_to_polar(cart);
        polar[j] += h;
        const auto back = entry_from_polar(polar);
        std::copy(back.begin(), back.end(), q.offdiag.begin() + static_cast<std::ptrdiff_t>(offset));
      }
      return q;
    }
    j -= k;
    offset += k;
  }
  fail(ErrorKind::invalid_argument, "coordinate index out of range");
}

}  // namespace

std::string_view to_string(VerifyLevel level) {
  return level == VerifyLevel::quick ? "quick" : "full";
}

VerifyLevel parse_verify_level(std::string_view text) {
  if (text == "quick") return VerifyLevel::quick;
  if (text == "full") return VerifyLevel::full;
  fail(ErrorKind::invalid_argument, "unknown level '" + std::string(text) + "' (quick|full)");
}

bool CriterionResult::pass() const {
  return !skipped && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double CriterionResult::worst_ratio() const {
  double w = 0.0;
  for (const auto& c : checks) {
    w = std::max(w, c.tolerance > 0.0 ? c.deviation / c.tolerance : (c.pass ? 0.0 : INFINITY));
  }
  return w;
}

Verifier::Verifier(VerifyOptions opt) : opt_(opt) {}

std::string_view Verifier::title(int id) {
  switch (id) {
    case 1:
      return "volume elements: closed form vs metric pullback";
    case 2:
      return "separability functions: closed form vs numeric";
    case 3:
      return "total Bures volumes";
    case 4:
      return "separable Bures volumes and probabilities";
    case 5:
      return "HS separability probabilities";
    case 6:
      return "Dyson-index proportionality";
    case 7:
      return "symmetry and identity properties";
    case 8:
      return "property suites";
    default:
      return "?";
  }
}

CriterionResult Verifier::run(int id) {
  switch (id) {
    case 1:
      return density_elements();
    case 2:
      return separability_functions();
    case 3:
      return total_volumes();
    case 4:
      return separable_volumes();
    case 5:
      return hs_probabilities();
    case 6:
      return dyson();
    case 7:
      return symmetries();
    case 8:
      return properties();
    default:
      fail(ErrorKind::invalid_argument, "no criterion " + std::to_string(id));
  }
}

std::vector<CriterionResult> Verifier::run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run(id));
  return out;
}

const IntegrationResult& Verifier::total(const Scenario& s) {
  const std::string key = to_string(s);
  auto it = totals_.find(key);
  if (it == totals_.end()) it = totals_.emplace(key, total_volume(s, VolumeRoute::factorized, volume_opt_)).first;
  return it->second;
}

const IntegrationResult& Verifier::separable(const Scenario& s) {
  const std::string key = to_string(s);
  auto it = separables_.find(key);
  if (it == separables_.end()) {
    it = separables_.emplace(key, separable_volume(s, VolumeRoute::factorized, volume_opt_)).first;
  }
  return it->second;
}

CriterionResult Verifier::density_elements() {
  CriterionResult r{1, std::string(title(1)), {}, false};
  const auto list = scenarios({"bures:[(2,3)]:real", "bures:[(2,3)]:complex", "bures:[(2,3)]:quat",
                               "bures:[(1,4),(2,3)]:real", "bures:[(1,4),(2,3)]:complex",
                               "bures:[(1,4),(2,3)]:quat", "bures:[(1,2),(2,3)]:real"});
  const int n_points = opt_.level == VerifyLevel::quick ? 50 : 200;
  PointSampler sampler(opt_.seed);
  for (const auto& s : list) {
    std::vector<std::pair<double, double>> pairs;  // (numeric, closed)
    while (static_cast<int>(pairs.size()) < n_points) {
      const BloorePoint p = sampler.draw(s, 0.01);
      if (positivity_margin(p, s) < 1e-2) continue;
      pairs.emplace_back(volume_density_numeric(p, s).value, volume_density_closed(p, s).value);
    }
    // One-point pinning: the ratio at the first point rescales the rest.
    const double pin = pairs.front().first / pairs.front().second;
    double worst = 0.0;
    for (const auto& [num, closed] : pairs) worst = std::max(worst, std::abs(num / (pin * closed) - 1.0));
    r.checks.push_back(make_check(to_string(s) + " max rel err", worst, 0.0, worst, 1e-6));
    r.checks.push_back(make_check(to_string(s) + " pinning ratio", pin, 1.0, std::abs(pin - 1.0), 1e-6));
  }
  return r;
}

CriterionResult Verifier::separability_functions() {
  CriterionResult r{2, std::string(title(2)), {}, false};
  const bool quick = opt_.level == VerifyLevel::quick;
  const auto grid = quick ? std::vector<double>{0.3, 0.8, 1.0, 1.5} : mu_grid(25, 2.0);
  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    const Scenario& s = e.scenario;
    // The quick level keeps to one- and two-dimensional integrals.
    if (quick && s.entries.size() > 1) continue;
    double worst = 0.0;
    bool ok = true;
    for (double mu : grid) {
      const double closed = sep_function_closed(s, mu);
      const IntegrationResult n = sep_function_numeric(s, mu);
      const double diff = std::abs(n.estimate - closed);
      const double bound = std::max(1e-6 * std::abs(closed), 3.0 * n.error_estimate);
      ok = ok && diff <= bound;
      worst = std::max(worst, diff / bound);
    }
    Check c = make_check(to_string(s) + " |closed-numeric| / bound", worst, 0.0, worst, 1.0);
    c.pass = c.pass && ok;
    r.checks.push_back(c);
  }
  return r;
}

CriterionResult Verifier::total_volumes() {
  CriterionResult r{3, std::string(title(3)), {}, false};
  if (opt_.level == VerifyLevel::quick) {
    r.skipped = true;
    return r;
  }
  for (const auto& s : bures_volume_scenarios()) {
    const auto ref = find_reference(s, Quantity::total);
    const double tol = s.is_cross_pair() && s.quaternionic() ? 5e-3 : 1e-4;
    r.checks.push_back(relative_check(to_string(s) + " total (" + ref->expression + ")",
                                      total(s).estimate, ref->value, tol));
  }
  return r;
}

CriterionResult Verifier::separable_volumes() {
  CriterionResult r{4, std::string(title(4)), {}, false};
  if (opt_.level == VerifyLevel::quick) {
    r.skipped = true;
    return r;
  }
  for (const auto& s : bures_volume_scenarios()) {
    double tol = 1e-4;
    if (s.quaternionic()) tol = s.is_cross_pair() ? 5e-3 : 1e-3;
    if (s.is_cross_pair() && s.algebra == Algebra::complex) tol = 1e-3;
    const auto sep_ref = find_reference(s, Quantity::separable);
    const auto p_ref = find_reference(s, Quantity::probability);
    const IntegrationResult& sep = separable(s);
    const Probability p = separability_probability(sep, total(s));
    r.checks.push_back(relative_check(to_string(s) + " separable (" + sep_ref->expression + ")",
                                      sep.estimate, sep_ref->value, tol));
    r.checks.push_back(relative_check(to_string(s) + " probability (" + p_ref->expression + ")",
                                      p.value, p_ref->value, tol));
  }
  return r;
}

CriterionResult Verifier::hs_probabilities() {
  CriterionResult r{5, std::string(title(5)), {}, false};
  if (opt_.level == VerifyLevel::quick) {
    r.skipped = true;
    return r;
  }
  for (const auto& s : scenarios({"hs:[(2,3)]:real", "hs:[(2,3)]:complex", "hs:[(2,3)]:quat"})) {
    const auto ref = find_reference(s, Quantity::probability);
    const Probability p = separability_probability(separable(s), total(s));
    r.checks.push_back(relative_check(to_string(s) + " probability (" + ref->expression + ")", p.value,
                                      ref->value, 1e-5));
  }
  return r;
}

CriterionResult Verifier::dyson() {
  CriterionResult r{6, std::string(title(6)), {}, false};
  const auto grid = mu_grid(201, 2.0);
  const DysonReport hs = dyson_report(Metric::hs, Family::single_entry, grid);
  r.checks.push_back(make_check("hs single rc", hs.max_dev_rc, 0.0, hs.max_dev_rc, 1e-12));
  r.checks.push_back(make_check("hs single rq", hs.max_dev_rq, 0.0, hs.max_dev_rq, 1e-12));
  r.checks.push_back(make_check("hs single cq", hs.max_dev_cq, 0.0, hs.max_dev_cq, 1e-12));
  const DysonReport hs2 = dyson_report(Metric::hs, Family::two_entry, grid);
  r.checks.push_back(make_check("hs two-entry rc", hs2.max_dev_rc, 0.0, hs2.max_dev_rc, 1e-12));

  for (Family f : {Family::single_entry, Family::two_entry}) {
    const DysonReport b = dyson_report(Metric::bures, f, grid);
    const DysonPin pin = f == Family::single_entry ? kBuresDysonSingle : kBuresDysonTwo;
    const std::string tag = "bures " + std::string(to_string(f)) + " ";
    const std::array<std::pair<const char*, std::pair<double, double>>, 3> devs{{
        {"rc", {b.max_dev_rc, pin.rc}},
        {"rq", {b.max_dev_rq, pin.rq}},
        {"cq", {b.max_dev_cq, pin.cq}},
    }};
    for (const auto& [name, vals] : devs) {
      const auto [value, pinned] = vals;
      r.checks.push_back(relative_check(tag + name + " regression", value, pinned, 1e-12));
      Check positive = make_check(tag + name + " > 0", value, 0.0, value > 0.0 ? 0.0 : 1.0, 0.0);
      r.checks.push_back(positive);
      r.checks.push_back(make_check(tag + name + " <= bound", value, kBuresDysonBound, value,
                                    kBuresDysonBound));
    }
    // Curve ordering on (0,1): quat >= complex^2 >= real^4.
    double violation = 0.0;
    for (std::size_t i = 0; i < b.mu.size(); ++i) {
      if (b.mu[i] >= 1.0) continue;
      violation = std::max(violation, b.complex_pow2[i] - b.quat[i]);
      violation = std::max(violation, b.real_pow4[i] - b.complex_pow2[i]);
    }
    r.checks.push_back(make_check(tag + "dominance order", violation, 0.0, std::max(violation, 0.0),
                                  1e-15));
  }
  return r;
}

CriterionResult Verifier::symmetries() {
  CriterionResult r{7, std::string(title(7)), {}, false};
  const auto grid = mu_grid(201, 2.0);
  const bool quick = opt_.level == VerifyLevel::quick;

  for (const auto& e : catalog()) {
    if (!e.has_separability_function) continue;
    const Scenario& s = e.scenario;
    const double one = sep_function_closed(s, 1.0);
    double worst = 0.0;
    if (s.is_cross_pair()) {
      for (double mu : grid) {
        const double a = sep_function_closed(s, mu);
        worst = std::max(worst, std::abs(a - sep_function_closed(s, 1.0 / mu)) / one);
      }
      r.checks.push_back(make_check(to_string(s) + " S(mu) = S(1/mu)", worst, 0.0, worst, 1e-12));
      if (quick) continue;
      for (double mu : {0.4, 0.75}) {
        const IntegrationResult a = sep_function_numeric(s, mu);
        const IntegrationResult b = sep_function_numeric(s, 1.0 / mu);
        const double diff = std::abs(a.estimate - b.estimate);
        const double bound = 3.0 * (a.error_estimate + b.error_estimate);
        r.checks.push_back(make_check(to_string(s) + " numeric S(mu) = S(1/mu) at " +
                                          std::to_string(mu),
                                      diff, 0.0, diff, bound));
      }
    } else {
      for (double mu : grid) {
        if (mu >= 1.0) worst = std::max(worst, std::abs(sep_function_closed(s, mu) - one) / one);
      }
      r.checks.push_back(make_check(to_string(s) + " S constant for mu >= 1", worst, 0.0, worst, 1e-12));
    }
  }

  for (const char* alg : {"real", "complex", "quat"}) {
    const Scenario single = parse_scenario(std::string("bures:[(2,3)]:") + alg);
    const Scenario two = parse_scenario(std::string("bures:[(1,4),(2,3)]:") + alg);
    const double n1 = sep_function_closed(single, 1.0);
    const double n2 = sep_function_closed(two, 1.0);
    double worst = 0.0;
    for (double mu : grid) {
      if (mu >= 1.0) continue;
      worst = std::max(worst, std::abs(sep_function_closed(single, mu) / n1 -
                                       sep_function_closed(two, mu) / n2));
    }
    r.checks.push_back(make_check(std::string("bures ") + alg + " two-entry = single-entry on (0,1)",
                                  worst, 0.0, worst, 1e-12));
  }
  return r;
}

CriterionResult Verifier::properties() {
  CriterionResult r{8, std::string(title(8)), {}, false};
  const bool quick = opt_.level == VerifyLevel::quick;

  // Closed-form vs spectral indicators away from the boundary layer.
  {
    const int n = quick ? 1000 : 10000;
    PointSampler sampler(opt_.seed + 1);
    for (const auto& e : catalog()) {
      const Scenario& s = e.scenario;
      int disagreements = 0;
      for (int i = 0; i < n; ++i) {
        const BloorePoint p = sampler.draw(s);
        const double pm = positivity_margin(p, s);
        if (std::abs(pm) > 1e-9 && positivity_indicator(p, s, IndicatorRoute::closed_form) !=
                                       positivity_indicator(p, s, IndicatorRoute::eigen)) {
          ++disagreements;
        }
        if (std::abs(pm) > 1e-9 && std::abs(ppt_margin(p, s)) > 1e-9 &&
            ppt_indicator(p, s, IndicatorRoute::closed_form) != ppt_indicator(p, s, IndicatorRoute::eigen)) {
          ++disagreements;
        }
      }
      r.checks.push_back(make_check(to_string(s) + " indicator disagreements", disagreements, 0.0,
                                    disagreements, 0.0));
    }
  }

  // Tangent basis against central differences of rho.
  {
    PointSampler sampler(opt_.seed + 2);
    const double h = 1e-6;
    for (const auto& e : catalog()) {
      const Scenario& s = e.scenario;
      if (s.metric != Metric::bures) continue;  // tangents do not depend on the metric
      double worst = 0.0;
      for (int t = 0; t < (quick ? 3 : 10); ++t) {
        BloorePoint p;
        do {
          p = sampler.draw(s, 0.05);
        } while (positivity_margin(p, s) < 0.05);
        for (Chart chart : {Chart::cartesian, Chart::polar}) {
          const auto basis = tangent_basis(p, s, chart);
          for (std::size_t i = 0; i < basis.size(); ++i) {
            const ComplexMatrix fd = (build_rho(shifted(p, s, chart, i, h), s).dense() -
                                      build_rho(shifted(p, s, chart, i, -h), s).dense()) /
                                     (2.0 * h);
            worst = std::max(worst, max_abs_diff(fd, basis[i].dense()));
          }
        }
      }
      r.checks.push_back(make_check(shape_label(s) + " tangent basis vs finite differences", worst, 0.0,
                                    worst, 1e-9));
    }
  }

  // Unit 4-ball by qmc.
  {
    auto spec = IntegrandSpec::box(
        std::vector<double>(4, -1.0), std::vector<double>(4, 1.0),
        [](std::span<const double>) { return 1.0; },
        [](std::span<const double> x) {
          double r2 = 0.0;
          for (double v : x) r2 += v * v;
          return r2 <= 1.0;
        });
    const IntegrationResult ball = integrate_qmc(spec, {1u << 20, opt_.seed, 8, 1});
    r.checks.push_back(relative_check("qmc unit 4-ball volume (pi^2/2)", ball.estimate, pi * pi / 2, 2e-3));
  }

  // Factorized S·J against the direct integral.
  if (!quick) {
    for (const auto& s : scenarios({"hs:[(2,3)]:real", "bures:[(2,3)]:real", "bures:[(2,3)]:quat",
                                    "bures:[(1,4),(2,3)]:complex"})) {
      const IntegrationResult dt = total_volume(s, VolumeRoute::direct, volume_opt_);
      const IntegrationResult& ft = total(s);
      const double dtot = std::abs(dt.estimate - ft.estimate);
      r.checks.push_back(make_check(to_string(s) + " total S*J vs direct", dtot, 0.0, dtot,
                                    3.0 * (dt.error_estimate + ft.error_estimate)));
      const IntegrationResult ds = separable_volume(s, VolumeRoute::direct, volume_opt_);
      const IntegrationResult& fs = separable(s);
      const double dsep = std::abs(ds.estimate - fs.estimate);
      r.checks.push_back(make_check(to_string(s) + " separable S*J vs direct", dsep, 0.0, dsep,
                                    3.0 * (ds.error_estimate + fs.error_estimate)));
    }
  }
  return r;
}

}  // namespace bsep

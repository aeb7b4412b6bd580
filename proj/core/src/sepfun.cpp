#include "bsep/sepfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "bsep/bloore.hpp"
#include "bsep/error.hpp"
#include "bsep/metric.hpp"

namespace bsep {

namespace {

using std::numbers::pi;

constexpr double kPi2 = pi * pi;

Scenario make(Metric m, std::vector<EntryPair> pos, Algebra a, int zeroed = 0) {
  Scenario s{m, a, {}};
  for (EntryPair p : pos) s.entries.push_back({p, zeroed});
  return s;
}

std::vector<CatalogEntry> build_catalog() {
  const double zq = zeroed_quaternion_constant() / 8.0;
  std::vector<CatalogEntry> c;
  for (Metric m : {Metric::hs, Metric::bures}) {
    const bool bures = m == Metric::bures;
    c.push_back({make(m, {kEntry23}, Algebra::real)});
    c.push_back({make(m, {kEntry23}, Algebra::complex)});
    c.push_back({make(m, {kEntry23}, Algebra::quaternion)});
    c.push_back({make(m, {kEntry23}, Algebra::quaternion, 1), true, bures ? zq : 1.0});
    if (bures) c.push_back({make(m, {kEntry12, kEntry23}, Algebra::real), false});
    c.push_back({make(m, {kEntry14, kEntry23}, Algebra::real)});
    c.push_back({make(m, {kEntry14, kEntry23}, Algebra::complex), true, bures ? 4.0 : 1.0});
    if (bures) c.push_back({make(m, {kEntry14, kEntry23}, Algebra::quaternion)});
  }
  return c;
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    fail(ErrorKind::invalid_argument, "mu must be positive and finite");
  }
}

const CatalogEntry& require_sepfun(const Scenario& s) {
  const CatalogEntry& e = catalog_entry(s);
  if (!e.has_separability_function) {
    fail(ErrorKind::unsupported,
         to_string(s) + " has a non-factorizable volume element and no separability function; "
                        "use the direct volume integration instead");
  }
  return e;
}

double hs_closed(const Scenario& s, double mu) {
  if (s.is_cross_pair()) {
    const double m = std::min(mu, 1.0 / mu);
    return s.algebra == Algebra::real ? 4.0 * m : kPi2 * m * m;
  }
  const double m = std::min(mu, 1.0);
  if (s.zeroed() == 1) return 4.0 * pi * m * m * m / 3.0;
  switch (s.algebra) {
    case Algebra::real:
      return 2.0 * m;
    case Algebra::complex:
      return pi * m * m;
    case Algebra::quaternion:
      return kPi2 * m * m * m * m / 2.0;
  }
  return 0.0;
}

double bures_single(const Scenario& s, double mu) {
  if (s.zeroed() == 1) {
    const double c = zeroed_quaternion_constant();
    if (mu >= 1.0) return kPi2 * c / 8.0;
    return 0.25 * pi * c * (std::asin(mu) - mu * std::sqrt(1 - mu * mu));
  }
  switch (s.algebra) {
    case Algebra::real:
      return mu >= 1.0 ? pi : 2.0 * std::asin(mu);
    case Algebra::complex:
      return mu >= 1.0 ? 2.0 * pi : 2.0 * pi * (1 - std::sqrt(1 - mu * mu));
    case Algebra::quaternion:
      if (mu >= 1.0) return 4.0 * kPi2 / 3.0;
      return 2.0 / 3.0 * kPi2 * (-std::sqrt(1 - mu * mu) * mu * mu - 2 * std::sqrt(1 - mu * mu) + 2);
  }
  return 0.0;
}

double bures_cross(const Scenario& s, double mu) {
  const double pi4 = kPi2 * kPi2;
  switch (s.algebra) {
    case Algebra::real:
      if (mu == 1.0) return kPi2;
      return mu > 1.0 ? 2.0 * pi * std::asin(1.0 / mu) : 2.0 * pi * std::asin(mu);
    case Algebra::complex:
      if (mu == 1.0) return 16.0 * kPi2;
      if (mu > 1.0) return 16.0 * kPi2 * (1 - std::sqrt(mu * mu - 1) / mu);
      return 16.0 * kPi2 * (1 - std::sqrt(1 - mu * mu));
    case Algebra::quaternion: {
      if (mu == 1.0) return 16.0 * pi4 / 9.0;
      if (mu > 1.0) {
        const double q = std::sqrt(mu * mu - 1);
        return -8.0 * pi4 * (2 * (q - mu) * mu * mu + q) / (9.0 * mu * mu * mu);
      }
      const double q = std::sqrt(1 - mu * mu);
      return 8.0 / 9.0 * pi4 * (-q * mu * mu - 2 * q + 2);
    }
  }
  return 0.0;
}

std::vector<SepPiece> pieces_for(const Scenario& s) {
  const bool hs = s.metric == Metric::hs;
  if (s.is_cross_pair()) {
    if (hs) {
      return s.algebra == Algebra::real
                 ? std::vector<SepPiece>{{"0<=mu<=1", "4 mu"}, {"mu>1", "4/mu"}}
                 : std::vector<SepPiece>{{"0<=mu<=1", "pi^2 mu^2"}, {"mu>1", "pi^2/mu^2"}};
    }
    switch (s.algebra) {
      case Algebra::real:
        return {{"mu=1", "pi^2"}, {"mu>1", "2 pi acsc(mu)"}, {"0<mu<1", "2 pi asin(mu)"}};
      case Algebra::complex:
        return {{"mu=1", "16 pi^2"},
                {"mu>1", "16 pi^2 (1 - sqrt(mu^2-1)/mu)"},
                {"0<mu<1", "16 pi^2 (1 - sqrt(1-mu^2))"}};
      case Algebra::quaternion:
        return {{"mu=1", "16 pi^4/9"},
                {"mu>1", "-8 pi^4 (2 (sqrt(mu^2-1) - mu) mu^2 + sqrt(mu^2-1)) / (9 mu^3)"},
                {"0<mu<1", "8/9 pi^4 (2 - (mu^2+2) sqrt(1-mu^2))"}};
    }
  }
  if (hs) {
    if (s.zeroed() == 1) return {{"0<=mu<=1", "4 pi mu^3/3"}, {"mu>1", "4 pi/3"}};
    switch (s.algebra) {
      case Algebra::real:
        return {{"0<=mu<=1", "2 mu"}, {"mu>1", "2"}};
      case Algebra::complex:
        return {{"0<=mu<=1", "pi mu^2"}, {"mu>1", "pi"}};
      case Algebra::quaternion:
        return {{"0<=mu<=1", "pi^2 mu^4/2"}, {"mu>1", "pi^2/2"}};
    }
  }
  if (s.zeroed() == 1) {
    return {{"mu>=1", "pi^2 (4 - sqrt2 log(3+2 sqrt2)) / 8"},
            {"0<mu<1", "pi/4 (4 - sqrt2 log(3+2 sqrt2)) (asin(mu) - mu sqrt(1-mu^2))"}};
  }
  switch (s.algebra) {
    case Algebra::real:
      return {{"mu>=1", "pi"}, {"0<mu<1", "2 asin(mu)"}};
    case Algebra::complex:
      return {{"mu>=1", "2 pi"}, {"0<mu<1", "2 pi (1 - sqrt(1-mu^2))"}};
    case Algebra::quaternion:
      return {{"mu>=1", "4 pi^2/3"}, {"0<mu<1", "2/3 pi^2 (2 - (mu^2+2) sqrt(1-mu^2))"}};
  }
  return {};
}

/// Surface measure of the unit sphere S^{k-1}.
double sphere_measure(std::size_t k) {
  switch (k) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * pi;
    case 3:
      return 4.0 * pi;
    default:
      return 2.0 * kPi2;
  }
}

double weight_density(const BloorePoint& p, const Scenario& s, WeightSource src) {
  if (src == WeightSource::closed && has_closed_form(s)) {
    return volume_density_closed(p, s, Chart::cartesian).value;
  }
  return volume_density_numeric(p, s, Chart::cartesian).value;
}

// Reference point at mu with entry e placed at radius r[e] along its first axis.
BloorePoint radial_point(const Scenario& s, double mu, std::span<const double> r) {
  std::vector<double> off(s.offdiag_dimension(), 0.0);
  std::size_t offset = 0;
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    off[offset] = r[e];
    offset += s.entry_coords(e);
  }
  return symmetric_point_for_mu(mu, std::move(off));
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const Scenario& s) {
  for (const auto& e : catalog()) {
    if (e.scenario == s) return e;
  }
  fail(ErrorKind::unsupported, "scenario " + to_string(s) + " is not in the catalog");
}

double zeroed_quaternion_constant() { return 4.0 - std::sqrt(2.0) * std::log(3.0 + 2.0 * std::sqrt(2.0)); }

double sep_function_closed(const Scenario& s, double mu) {
  check_mu(mu);
  require_sepfun(s);
  if (s.metric == Metric::hs) return hs_closed(s, mu);
  return s.is_cross_pair() ? bures_cross(s, mu) : bures_single(s, mu);
}

double SeparabilityFunction::operator()(double mu) const {
  return sep_function_closed(scenario, mu) / divisor;
}

SeparabilityFunction separability_function(const Scenario& s) {
  require_sepfun(s);
  SeparabilityFunction f;
  f.scenario = s;
  f.pieces = pieces_for(s);
  f.normalization_value = sep_function_closed(s, 1.0);
  return f;
}

SeparabilityFunction normalize(const SeparabilityFunction& f) {
  const double at_one = f(1.0);
  if (!(at_one > 0.0)) fail(ErrorKind::invalid_argument, "cannot normalise: f(1) is not positive");
  SeparabilityFunction out = f;
  out.divisor = f.divisor * at_one;
  return out;
}

IntegrationResult sep_function_raw(const Scenario& s, double mu, const SepNumericOptions& opt) {
  check_mu(mu);
  require_sepfun(s);
  const std::size_t n = s.entries.size();

  if (opt.engine == Engine::qmc) {
    const std::size_t k = s.offdiag_dimension();
    const BloorePoint origin = symmetric_point_for_mu(mu, std::vector<double>(k, 0.0));
    const double w0 = weight_density(origin, s, opt.weights);
    auto point = [origin](std::span<const double> x) {
      BloorePoint p = origin;
      p.offdiag.assign(x.begin(), x.end());
      return p;
    };
    auto spec = IntegrandSpec::box(
        std::vector<double>(k, -1.0), std::vector<double>(k, 1.0),
        [=](std::span<const double> x) { return weight_density(point(x), s, opt.weights) / w0; },
        [=](std::span<const double> x) {
          return ppt_indicator(point(x), s, IndicatorRoute::eigen);
        });
    return integrate_qmc(spec, opt.qmc);
  }

  const BloorePoint origin = symmetric_point_for_mu(mu, std::vector<double>(s.offdiag_dimension(), 0.0));
  const double w0 = weight_density(origin, s, opt.weights);
  std::vector<double> measure(n);
  std::vector<double> power(n);
  for (std::size_t e = 0; e < n; ++e) {
    measure[e] = sphere_measure(s.entry_coords(e));
    power[e] = static_cast<double>(s.entry_coords(e) - 1);
  }
  auto density = [=](std::span<const double> r) {
    double v = weight_density(radial_point(s, mu, r), s, opt.weights) / w0;
    for (std::size_t e = 0; e < n; ++e) v *= measure[e] * std::pow(r[e], power[e]);
    return v;
  };
  auto indicator = [=](std::span<const double> r) {
    return ppt_indicator(radial_point(s, mu, r), s, IndicatorRoute::eigen);
  };
  IntegrandSpec spec = IntegrandSpec::box(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0),
                                          density, indicator);
  for (std::size_t a = 0; a < n; ++a) spec = apply_substitution(spec, a, Substitution::arcsine);
  return integrate_adaptive(spec, opt.adaptive);
}

IntegrationResult sep_function_numeric(const Scenario& s, double mu, const SepNumericOptions& opt) {
  IntegrationResult r = sep_function_raw(s, mu, opt);
  const double f = catalog_entry(s).convention_factor;
  r.estimate *= f;
  r.error_estimate *= f;
  return r;
}

double conjectured_S_real(double mu) { return 0.5 * (3.0 - mu * mu) * mu; }

double zeroed_quaternion_bures_literal(double mu) {
  check_mu(mu);
  const double r2 = std::sqrt(2.0);
  if (mu > 1.0) return kPi2 * zeroed_quaternion_constant() / 8.0;
  return 0.25 * pi * (mu * std::sqrt(std::max(0.0, 1 - mu * mu)) - std::asin(std::min(mu, 1.0))) *
         (r2 * std::log(3.0 + 2.0 * r2 - 4.0));
}

std::string_view to_string(Family f) { return f == Family::single_entry ? "single" : "two"; }

Family parse_family(std::string_view text) {
  if (text == "single" || text == "single-entry") return Family::single_entry;
  if (text == "two" || text == "two-entry") return Family::two_entry;
  fail(ErrorKind::invalid_argument, "unknown family '" + std::string(text) + "' (single|two)");
}

std::vector<double> mu_grid(std::size_t n, double mu_max) {
  if (n == 0 || !(mu_max > 0.0)) fail(ErrorKind::invalid_argument, "grid needs n >= 1 and mu_max > 0");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = mu_max * static_cast<double>(i + 1) / static_cast<double>(n);
  if (mu_max >= 1.0) {
    auto it = std::min_element(g.begin(), g.end(),
                               [](double a, double b) { return std::abs(a - 1) < std::abs(b - 1); });
    *it = 1.0;
  }
  return g;
}

bool DysonReport::has_quat() const {
  return !quat.empty() && std::none_of(quat.begin(), quat.end(), [](double v) { return std::isnan(v); });
}

std::string DysonReport::to_csv() const {
  std::ostringstream os;
  os << "mu,s_real_norm_pow4,s_complex_norm_pow2,s_quat_norm,dev_rc,dev_rq,dev_cq\n";
  char buf[64];
  auto put = [&](double v, bool last) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << (last ? '\n' : ',');
  };
  for (std::size_t i = 0; i < mu.size(); ++i) {
    put(mu[i], false);
    put(real_pow4[i], false);
    put(complex_pow2[i], false);
    put(quat[i], false);
    put(dev_rc[i], false);
    put(dev_rq[i], false);
    put(dev_cq[i], true);
  }
  return os.str();
}

DysonReport dyson_report(Metric metric, Family family, const std::vector<double>& grid) {
  const std::vector<EntryPair> pos = family == Family::single_entry
                                         ? std::vector<EntryPair>{kEntry23}
                                         : std::vector<EntryPair>{kEntry14, kEntry23};
  auto norm = [&](Algebra a) -> std::optional<SeparabilityFunction> {
    const Scenario s = make(metric, pos, a);
    for (const auto& e : catalog()) {
      if (e.scenario == s) return normalize(separability_function(s));
    }
    return std::nullopt;
  };
  const auto fr = norm(Algebra::real);
  const auto fc = norm(Algebra::complex);
  const auto fq = norm(Algebra::quaternion);

  DysonReport r;
  r.metric = metric;
  r.family = family;
  r.mu = grid;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double mu : grid) {
    const double a = std::pow((*fr)(mu), 4);
    const double b = std::pow((*fc)(mu), 2);
    const double c = fq ? (*fq)(mu) : nan;
    r.real_pow4.push_back(a);
    r.complex_pow2.push_back(b);
    r.quat.push_back(c);
    r.dev_rc.push_back(std::abs(a - b));
    r.dev_rq.push_back(std::abs(a - c));
    r.dev_cq.push_back(std::abs(b - c));
  }
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::isnan(x) ? x : std::max(m, x);
    return m;
  };
  r.max_dev_rc = sup(r.dev_rc);
  r.max_dev_rq = sup(r.dev_rq);
  r.max_dev_cq = sup(r.dev_cq);
  return r;
}

}  // namespace bsep

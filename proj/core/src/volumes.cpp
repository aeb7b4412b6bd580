#include "bsep/volumes.hpp"

#include <cmath>
#include <numbers>

#include "bsep/bloore.hpp"
#include "bsep/error.hpp"
#include "bsep/metric.hpp"
#include "bsep/sepfun.hpp"

namespace bsep {

namespace {

using std::numbers::pi;

double sphere_measure(std::size_t k) {
  constexpr double m[] = {0.0, 2.0, 2.0 * pi, 4.0 * pi, 2.0 * pi * pi};
  return m[std::min<std::size_t>(k, 4)];
}

void require_volumes(const Scenario& s) {
  if (!volumes_supported(s)) {
    fail(ErrorKind::unsupported, "volumes are not available for " + to_string(s));
  }
}

// (a, p, q) -> diagonal, with ρ11 + ρ44 = a and ρ22 + ρ33 = 1 - a = b.
std::array<double, 4> diagonal_from(double a, double b, double p, double q) {
  return {a * p, b * q, b * (1.0 - q), a * (1.0 - p)};
}

IntegrationResult scaled(IntegrationResult r, double f) {
  r.estimate *= f;
  r.error_estimate *= f;
  return r;
}

enum class Branch { mu, nu };

IntegrationResult jacobian(const Scenario& s, double t, Branch branch, const VolumeOptions& opt,
                           double abs_tol = 0.0) {
  if (!(t > 0.0)) fail(ErrorKind::invalid_argument, "mu must be positive");
  require_volumes(s);
  auto density = [s, t, branch](std::span<const double> x) {
    const double p = x[0];
    const double q = x[1];
    const double sp = std::sqrt(p * (1.0 - p));
    const double sq = std::sqrt(q * (1.0 - q));
    // Edge nodes rounded onto p or q in {0, 1}; the substituted weight there is nil.
    if (sp == 0.0 || sq == 0.0) return 0.0;
    if (branch == Branch::mu) {
      // a / (1 - a) = mu sqrt(Q/P); a (1-a) da/dmu written without 1/sqrt(P).
      const double den = sp + t * sq;
      const double a = t * sq / den;
      const double b = sp / den;
      return diagonal_factor(s, diagonal_from(a, b, p, q)) * a * b * b * sq / den;
    }
    const double den = sq + t * sp;
    const double a = sq / den;
    const double b = t * sp / den;
    return diagonal_factor(s, diagonal_from(a, b, p, q)) * a * a * b * sp / den;
  };
  IntegrandSpec spec = IntegrandSpec::box({0.0, 0.0}, {1.0, 1.0}, density);
  spec = apply_substitution(spec, 0, Substitution::arcsine);
  spec = apply_substitution(spec, 1, Substitution::arcsine);
  return integrate_adaptive(spec, {opt.inner_rel_tol, abs_tol, opt.max_evals, 1e-9});
}

// ∫ w(mu) J(mu) dmu over (0, ∞), split at mu = 1.
template <class Weight>
IntegrationResult factorized(const Scenario& s, Weight weight, const VolumeOptions& opt) {
  IntegrationResult total;
  total.engine = Engine::adaptive;
  // Near mu = 0 (or nu = 0) J needs deep refinement for a negligible share;
  // an absolute floor at the scale of J(1) keeps those nodes cheap.
  const double floor = opt.inner_rel_tol * std::abs(jacobian(s, 1.0, Branch::mu, opt).estimate);
  for (Branch branch : {Branch::mu, Branch::nu}) {
    std::uint64_t inner_evals = 0;
    bool inner_ok = true;
    auto density = [&](std::span<const double> x) {
      const double t = x[0];
      const IntegrationResult j = jacobian(s, t, branch, opt, floor);
      inner_evals += j.evaluations;
      inner_ok = inner_ok && j.converged;
      const double mu = branch == Branch::mu ? t : 1.0 / t;
      return weight(mu) * j.estimate;
    };
    IntegrandSpec spec = IntegrandSpec::box({0.0}, {1.0}, density);
    spec = apply_substitution(spec, 0, Substitution::arcsine);
    const IntegrationResult r = integrate_adaptive(spec, {opt.rel_tol, 0.0, opt.outer_max_evals, 1e-12});
    total.estimate += r.estimate;
    total.error_estimate += r.error_estimate + opt.inner_rel_tol * std::abs(r.estimate);
    total.evaluations += inner_evals;
    total.converged = total.converged && r.converged && inner_ok;
  }
  return total;
}

// Coordinates (a, p, q, r_1.., r_n) on the unit cube, all arcsine-substituted.
// The indicator is positivity for totals and PPT for separable volumes.
IntegrandSpec direct_spec(const Scenario& s, bool ppt) {
  const std::size_t n = s.entries.size();
  const std::size_t d = 3 + n;
  std::vector<double> measure(n);
  std::vector<double> power(n);
  for (std::size_t e = 0; e < n; ++e) {
    measure[e] = sphere_measure(s.entry_coords(e));
    power[e] = static_cast<double>(s.entry_coords(e) - 1);
  }
  auto point = [s, n](std::span<const double> x) {
    const double a = x[0];
    const auto diag = diagonal_from(a, 1.0 - a, x[1], x[2]);
    std::vector<double> off(s.offdiag_dimension(), 0.0);
    std::size_t offset = 0;
    for (std::size_t e = 0; e < n; ++e) {
      off[offset] = x[3 + e];
      offset += s.entry_coords(e);
    }
    return BloorePoint{diag[0], diag[1], diag[2], std::move(off)};
  };
  // Rounding can leave no room for ρ44 in extreme corners; their weight is nil.
  auto valid = [](const BloorePoint& p) {
    return p.rho11 > 0.0 && p.rho22 > 0.0 && p.rho33 > 0.0 && p.rho44() > 0.0;
  };
  auto density = [=](std::span<const double> x) {
    const BloorePoint p = point(x);
    if (!valid(p)) return 0.0;
    double v = volume_density_closed(p, s, Chart::cartesian).value * x[0] * (1.0 - x[0]);
    for (std::size_t e = 0; e < n; ++e) v *= measure[e] * std::pow(x[3 + e], power[e]);
    return v;
  };
  auto indicator = [=](std::span<const double> x) {
    const BloorePoint p = point(x);
    if (!valid(p)) return false;
    return ppt ? ppt_indicator(p, s) : positivity_indicator(p, s);
  };
  IntegrandSpec spec = IntegrandSpec::box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0),
                                          density, indicator);
  for (std::size_t a = 0; a < d; ++a) spec = apply_substitution(spec, a, Substitution::arcsine);
  return spec;
}

}  // namespace

std::string_view to_string(VolumeRoute r) { return r == VolumeRoute::factorized ? "S*J" : "direct"; }

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::total:
      return "total";
    case Quantity::separable:
      return "separable";
    case Quantity::probability:
      return "probability";
  }
  return "?";
}

bool volumes_supported(const Scenario& s) {
  for (const auto& e : catalog()) {
    if (e.scenario == s) return e.has_separability_function;
  }
  return false;
}

double diagonal_factor(const Scenario& s, const std::array<double, 4>& d) {
  require_volumes(s);
  if (s.metric == Metric::hs) {
    double v = 2.0 * std::pow(2.0, 0.5 * static_cast<double>(s.offdiag_dimension()));
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
      const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
      v *= std::pow(d[i] * d[j], 0.5 * static_cast<double>(s.entry_coords(e)));
    }
    return v;
  }
  const double inner = d[1] + d[2];
  const double outer = d[0] + d[3];
  if (s.is_cross_pair()) {
    switch (s.algebra) {
      case Algebra::real:
        return 0.125 / std::sqrt(outer * inner);
      case Algebra::complex:
        return 0.125 * std::sqrt(d[0] * d[1] * d[2] * d[3]) / (outer * inner);
      case Algebra::quaternion:
        return 0.125 * std::pow(d[0] * d[1] * d[2] * d[3], 1.5) / (outer * outer * inner * inner);
    }
  }
  const double k = static_cast<double>(s.entry_coords(0));
  return std::pow(d[1] * d[2], 0.5 * (k - 1.0)) /
         (8.0 * std::sqrt(d[0] * d[3]) * std::pow(inner, 0.5 * k));
}

IntegrationResult marginal_jacobian(const Scenario& s, double mu, const VolumeOptions& opt) {
  return jacobian(s, mu, Branch::mu, opt);
}

IntegrationResult marginal_jacobian_nu(const Scenario& s, double nu, const VolumeOptions& opt) {
  return jacobian(s, nu, Branch::nu, opt);
}

IntegrationResult total_volume(const Scenario& s, VolumeRoute route, const VolumeOptions& opt) {
  require_volumes(s);
  if (route == VolumeRoute::direct) {
    return scaled(integrate_adaptive(direct_spec(s, false), {opt.direct_rel_tol, 0.0, opt.max_evals, 1e-9}),
                  catalog_entry(s).convention_factor);
  }
  // With the constant weight S(1) the mu integral of J is the diagonal factor
  // over the whole simplex, one 3D integral in (a, p, q).
  const double full = sep_function_closed(s, 1.0);
  auto density = [s](std::span<const double> x) {
    const double a = x[0];
    const auto d = diagonal_from(a, 1.0 - a, x[1], x[2]);
    if (d[0] <= 0.0 || d[1] <= 0.0 || d[2] <= 0.0 || d[3] <= 0.0) return 0.0;
    return diagonal_factor(s, d) * a * (1.0 - a);
  };
  IntegrandSpec spec = IntegrandSpec::box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, density);
  for (std::size_t a = 0; a < 3; ++a) spec = apply_substitution(spec, a, Substitution::arcsine);
  IntegrationResult r = integrate_adaptive(spec, {opt.rel_tol, 0.0, opt.max_evals, 1e-9});
  r.estimate *= full;
  r.error_estimate *= full;
  return r;
}

IntegrationResult separable_volume(const Scenario& s, VolumeRoute route, const VolumeOptions& opt) {
  require_volumes(s);
  if (route == VolumeRoute::direct) {
    return scaled(integrate_qmc(direct_spec(s, true), opt.qmc), catalog_entry(s).convention_factor);
  }
  return factorized(s, [&s](double mu) { return sep_function_closed(s, mu); }, opt);
}

Probability separability_probability(const IntegrationResult& separable,
                                     const IntegrationResult& total) {
  if (!(std::abs(total.estimate) > 0.0)) {
    fail(ErrorKind::invalid_argument, "separability probability undefined: total volume is zero");
  }
  const double p = separable.estimate / total.estimate;
  const double rs = separable.estimate != 0.0 ? separable.error_estimate / separable.estimate : 0.0;
  const double rt = total.error_estimate / total.estimate;
  return {p, std::abs(p) * std::hypot(rs, rt)};
}

const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows = [] {
    const double p2 = pi * pi;
    const double c = kCatalan;
    auto sc = [](const char* text) { return parse_scenario(text); };
    return std::vector<ReferenceRow>{
        {sc("hs:[(2,3)]:real"), Quantity::probability, 3 * pi / 16, "3 pi/16"},
        {sc("hs:[(2,3)]:complex"), Quantity::probability, 1.0 / 3.0, "1/3"},
        {sc("hs:[(2,3)]:quat"), Quantity::probability, 0.1, "1/10"},
        {sc("bures:[(2,3)]:real"), Quantity::total, p2 / 12, "pi^2/12"},
        {sc("bures:[(2,3)]:real"), Quantity::separable, 0.3658435525, "0.3658435525"},
        {sc("bures:[(2,3)]:real"), Quantity::probability, 0.4448124200, "0.4448124200"},
        {sc("bures:[(2,3)]:complex"), Quantity::total, p2 * pi / 64, "pi^3/64"},
        {sc("bures:[(2,3)]:complex"), Quantity::separable, p2 * (4 * c - 6 + pi) / 64,
         "pi^2 (4C - 6 + pi)/64"},
        {sc("bures:[(2,3)]:complex"), Quantity::probability, (4 * c - 6 + pi) / pi,
         "(4C - 6 + pi)/pi"},
        {sc("bures:[(2,3)]:quat"), Quantity::total, p2 * p2 / 768, "pi^4/768"},
        {sc("bures:[(2,3)]:quat"), Quantity::separable, 0.012954754466, "0.012954754466"},
        {sc("bures:[(2,3)]:quat"), Quantity::probability, 0.10213883862, "0.10213883862"},
        {sc("bures:[(1,4),(2,3)]:real"), Quantity::total, p2 * pi / 64, "pi^3/64"},
        {sc("bures:[(1,4),(2,3)]:real"), Quantity::separable, 0.1473885131, "0.1473885131"},
        {sc("bures:[(1,4),(2,3)]:real"), Quantity::probability, 0.3042243652, "0.3042243652"},
        {sc("bures:[(1,4),(2,3)]:complex"), Quantity::total, p2 * p2 / 192, "pi^4/192"},
        {sc("bures:[(1,4),(2,3)]:complex"), Quantity::separable, 0.096915844, "0.096915844"},
        {sc("bures:[(1,4),(2,3)]:complex"), Quantity::probability, 0.19102778, "0.19102778"},
        {sc("bures:[(1,4),(2,3)]:quat"), Quantity::total, p2 * p2 * p2 / 245760, "pi^6/245760"},
        {sc("bures:[(1,4),(2,3)]:quat"), Quantity::separable, 0.000471134100, "0.000471134100"},
        {sc("bures:[(1,4),(2,3)]:quat"), Quantity::probability, 0.120436049, "0.120436049"},
    };
  }();
  return rows;
}

std::optional<ReferenceRow> find_reference(const Scenario& s, Quantity q) {
  for (const auto& r : reference_table()) {
    if (r.scenario == s && r.quantity == q) return r;
  }
  return std::nullopt;
}

VolumeReport volume_report(const Scenario& s, const VolumeOptions& opt, VolumeRoute route) {
  VolumeReport r;
  r.scenario = s;
  r.total_route = route;
  r.separable_route = route;
  r.total = total_volume(s, route, opt);
  r.separable = separable_volume(s, route, opt);
  r.probability = separability_probability(r.separable, r.total);
  r.reference = find_reference(s, Quantity::probability);
  if (r.reference) {
    r.rel_dev_from_reference = std::abs(r.probability.value - r.reference->value) / r.reference->value;
  }
  return r;
}

}  // namespace bsep

#include "bsep/metric.hpp"

#include <cmath>
#include <string>

#include "bsep/error.hpp"

namespace bsep {

double MetricTensor::determinant() const {
  if (g.rows() == 0) return 1.0;
  return g.partialPivLu().determinant();
}

bool MetricTensor::is_symmetric(double tol) const {
  return (g - g.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, g.cwiseAbs().maxCoeff());
}

std::vector<std::string> coordinate_labels(const Scenario& s, Chart chart) {
  std::vector<std::string> out{"rho11", "rho22", "rho33"};
  static constexpr const char* kCart[] = {"x", "y", "u", "v"};
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const std::string ij =
        std::to_string(s.entries[e].pos.row) + std::to_string(s.entries[e].pos.col);
    const std::size_t k = s.entry_coords(e);
    for (std::size_t c = 0; c < k; ++c) {
      if (chart == Chart::polar && k > 1) {
        out.push_back(c == 0 ? "r" + ij : "theta" + ij + "_" + std::to_string(c));
      } else {
        out.push_back(kCart[c] + ij);
      }
    }
  }
  return out;
}

namespace {

Quaternion unit_component(std::size_t c) {
  switch (c) {
    case 0:
      return {1, 0, 0, 0};
    case 1:
      return {0, 1, 0, 0};
    case 2:
      return {0, 0, 1, 0};
    default:
      return {0, 0, 0, 1};
  }
}

HermitianMatrix to_hermitian(const QuaternionMatrix4& q, const Scenario& s) {
  if (s.quaternionic()) return embed_quaternionic(q);
  HermitianMatrix out(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) out.set(i, j, Complex(q(i, j).w, q(i, j).x));
  }
  return out;
}

void require_interior(const BloorePoint& p, const Scenario& s) {
  validate(p, s);
  if (!(positivity_margin(p, s) > 0.0)) {
    fail(ErrorKind::invalid_argument, "point lies on or outside the positivity boundary of " +
                                          to_string(s));
  }
}

std::vector<QuaternionMatrix4> cartesian_tangents(const BloorePoint& p, const Scenario& s) {
  const auto d = p.diagonal();
  std::vector<QuaternionMatrix4> out;
  out.reserve(s.dimension());

  // Diagonal coordinates: ρ44 = 1 - ρ11 - ρ22 - ρ33 moves against each of them,
  // and every off-diagonal entry carries sqrt(ρ_ii ρ_jj).
  for (std::size_t m = 0; m < 3; ++m) {
    auto dd = [&](std::size_t i) { return (i == m ? 1.0 : 0.0) - (i == 3 ? 1.0 : 0.0); };
    QuaternionMatrix4 t;
    for (std::size_t i = 0; i < 4; ++i) t(i, i) = Quaternion(dd(i));
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
      const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
      const double scale = (dd(i) * d[j] + d[i] * dd(j)) / (2.0 * std::sqrt(d[i] * d[j]));
      const Quaternion v = scale * entry_value(p, s, e);
      t(i, j) = v;
      t(j, i) = v.conj();
    }
    out.push_back(t);
  }

  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
    const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
    const double amp = std::sqrt(d[i] * d[j]);
    for (std::size_t c = 0; c < s.entry_coords(e); ++c) {
      QuaternionMatrix4 t;
      const Quaternion v = amp * unit_component(c);
      t(i, j) = v;
      t(j, i) = v.conj();
      out.push_back(t);
    }
  }
  return out;
}

// Chain rule from Cartesian entry coordinates to polar ones.
std::vector<QuaternionMatrix4> to_chart(std::vector<QuaternionMatrix4> cart, const BloorePoint& p,
                                        const Scenario& s, Chart chart) {
  if (chart == Chart::cartesian) return cart;
  std::vector<QuaternionMatrix4> out(cart.begin(), cart.begin() + 3);
  std::size_t offset = 3;
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const std::size_t k = s.entry_coords(e);
    const auto polar = entry_to_polar(entry_coords(p, s, e));
    const auto jac = polar_jacobian(polar);
    for (std::size_t m = 0; m < k; ++m) {
      QuaternionMatrix4 t;
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
          Quaternion acc;
          for (std::size_t c = 0; c < k; ++c) acc += jac[c * k + m] * cart[offset + c](a, b);
          t(a, b) = acc;
        }
      }
      out.push_back(t);
    }
    offset += k;
  }
  return out;
}

double frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.array().conjugate()).real().sum();
}

}  // namespace

std::vector<HermitianMatrix> tangent_basis(const BloorePoint& p, const Scenario& s, Chart chart) {
  require_interior(p, s);
  const auto quat = to_chart(cartesian_tangents(p, s), p, s, chart);
  std::vector<HermitianMatrix> out;
  out.reserve(quat.size());
  for (const auto& q : quat) out.push_back(to_hermitian(q, s));
  return out;
}

MetricTensor bures_metric(const BloorePoint& p, const Scenario& s, Chart chart) {
  const auto tangents = tangent_basis(p, s, chart);
  const HermitianMatrix rho = build_rho(p, s);
  const Eigensystem es = eigensystem_hermitian(rho);
  const auto& lam = es.spectrum.eigenvalues;
  if (es.spectrum.min() < kMinEigenvalue) {
    fail(ErrorKind::near_singular, "Bures metric needs rho > 0; smallest eigenvalue is " +
                                       std::to_string(es.spectrum.min()) + " at " + to_string(s));
  }
  const auto n = static_cast<Eigen::Index>(lam.size());
  Eigen::MatrixXd inv_sum(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      inv_sum(i, j) = 1.0 / (lam[static_cast<std::size_t>(i)] + lam[static_cast<std::size_t>(j)]);
    }
  }

  std::vector<ComplexMatrix> rotated;
  rotated.reserve(tangents.size());
  for (const auto& t : tangents) rotated.push_back(es.vectors.adjoint() * t.dense() * es.vectors);

  const double scale = kBuresScale * (s.quaternionic() ? kQuaternionicMetricFactor : 1.0);
  const auto d = static_cast<Eigen::Index>(tangents.size());
  MetricTensor out{Eigen::MatrixXd(d, d), coordinate_labels(s, chart)};
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      const auto& ta = rotated[static_cast<std::size_t>(a)];
      const auto& tb = rotated[static_cast<std::size_t>(b)];
      const double v =
          scale * (ta.array() * tb.array().conjugate()).real().cwiseProduct(inv_sum.array()).sum();
      out.g(a, b) = v;
      out.g(b, a) = v;
    }
  }
  return out;
}

MetricTensor hs_metric(const BloorePoint& p, const Scenario& s, Chart chart) {
  const auto tangents = tangent_basis(p, s, chart);
  // The embedding doubles the trace; halve it so each quaternionic entry counts once.
  const double scale = s.quaternionic() ? 0.5 : 1.0;
  const auto d = static_cast<Eigen::Index>(tangents.size());
  MetricTensor out{Eigen::MatrixXd(d, d), coordinate_labels(s, chart)};
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      const double v = scale * frobenius_inner(tangents[static_cast<std::size_t>(a)].dense(),
                                               tangents[static_cast<std::size_t>(b)].dense());
      out.g(a, b) = v;
      out.g(b, a) = v;
    }
  }
  return out;
}

MetricTensor metric_tensor(const BloorePoint& p, const Scenario& s, Chart chart) {
  return s.metric == Metric::bures ? bures_metric(p, s, chart) : hs_metric(p, s, chart);
}

VolumeElementDensity volume_density_numeric(const BloorePoint& p, const Scenario& s, Chart chart) {
  const double det = metric_tensor(p, s, chart).determinant();
  return {std::sqrt(std::max(det, 0.0))};
}

bool has_closed_form(const Scenario& s) {
  if (s.metric == Metric::hs) return true;
  if (s.zeroed() != 0) return false;
  if (s.is_single_23() || s.is_cross_pair()) return true;
  return s.is_chain() && s.algebra == Algebra::real;
}

namespace {

double sq(double v) { return v * v; }

double offdiag_sq(const BloorePoint& p, const Scenario& s, std::size_t e) {
  double acc = 0.0;
  for (double c : entry_coords(p, s, e)) acc += c * c;
  return acc;
}

// Bures single (2,3) entry, in (ρ11, ρ22, x23.., mu).
double single_entry_element(const BloorePoint& p, const Scenario& s) {
  const double r11 = p.rho11;
  const double r22 = p.rho22;
  const double mu = mu_of(p).mu;
  const double mu2 = mu * mu;
  const double rr = offdiag_sq(p, s, 0);
  switch (s.algebra) {
    case Algebra::real:
      return std::sqrt(r11) * std::sqrt(1 - r11 - r22) * std::sqrt(r22) /
             (4 * std::sqrt(1 - rr) * (r22 * mu2 + r11) * std::sqrt(mu2 * sq(r22) + (1 - r11) * r11));
    case Algebra::complex:
      // As printed the expression is negative: dρ33/dmu < 0 flips the orientation.
      return std::abs(r11 * r22 * (r11 + r22 - 1) /
                      (4 * std::sqrt(1 - rr) * (r22 * mu2 + r11) * (-sq(r11) + r11 + mu2 * sq(r22))));
    case Algebra::quaternion: {
      const double a = -sq(r11) * sq(r22) * sq(r11 + r22 - 1);
      const double b =
          4 * std::sqrt(1 - rr) * (r22 * mu2 + r11) * sq(-sq(r11) + r11 + mu2 * sq(r22));
      return std::abs(a / b);
    }
  }
  return 0.0;
}

// Real [(1,2),(2,3)] element, in (ρ11, ρ22, x12, x23, mu).
double chain_element(const BloorePoint& p, const Scenario& s) {
  const double r11 = p.rho11;
  const double r22 = p.rho22;
  const double mu2 = mu_of(p).nu;
  const double x12 = entry_coords(p, s, 0)[0];
  const double x23 = entry_coords(p, s, 1)[0];
  const double k = -sq(r11) + r11 + mu2 * sq(r22);
  const double a = -sq(r11) * sq(r22) * (r11 + r22 - 1) * ((mu2 - 1) * r22 + 1);
  const double b = sq(r22 * mu2 + r11);
  const double c = sq(x12) + sq(x23) - 1;
  const double d = (r11 + r22) * (sq(x12) * r22 * sq(r22 * mu2 + r11) - ((mu2 - 1) * r22 + 1) * k);
  const double e = -sq(x23) * r22 * (r11 + r22 - 1) * k;
  return 0.25 * std::sqrt(a / (b * c * (d + e)));
}

// Bures [(1,4),(2,3)], in (ρ11, ρ22, ρ33) and the native off-diagonal chart.
double cross_pair_element(const BloorePoint& p, const Scenario& s, bool include_chart_factor) {
  const double r11 = p.rho11;
  const double r22 = p.rho22;
  const double r33 = p.rho33;
  const auto c14 = entry_coords(p, s, 0);
  const auto c23 = entry_coords(p, s, 1);
  switch (s.algebra) {
    case Algebra::real: {
      const double x14 = c14[0];
      const double x23 = c23[0];
      return 0.125 * std::sqrt(-1 / ((sq(x14) - 1) * (sq(x23) - 1) * (r22 + r33 - 1) * (r22 + r33)));
    }
    case Algebra::complex: {
      const double r14 = entry_to_polar(c14)[0];
      const double r23 = entry_to_polar(c23)[0];
      const double f_offdiag = include_chart_factor ? sq(r14) * sq(r23) : 1.0;
      const double f = -f_offdiag * r11 * r22 * r33 * (r11 + r22 + r33 - 1);
      const double g = (sq(r14) - 1) * (sq(r23) - 1) * sq(r22 + r33 - 1) * sq(r22 + r33);
      return 0.125 * std::sqrt(f / g);
    }
    case Algebra::quaternion: {
      const auto h14 = entry_to_polar(c14);
      const auto h23 = entry_to_polar(c23);
      const double r14 = h14[0];
      const double r23 = h23[0];
      const double f_offdiag =
          include_chart_factor ? sq(std::sin(h14[1])) * std::sin(h14[2]) * sq(std::sin(h23[1])) *
                                     std::sin(h23[2]) * std::pow(r14, 3) * std::pow(r23, 3)
                               : 1.0;
      const double f = f_offdiag * std::pow(r11, 1.5) * std::pow(r22, 1.5) *
                       std::pow(-r11 - r22 - r33 + 1, 1.5) * std::pow(r33, 1.5);
      const double g = std::sqrt(1 - sq(r14)) * std::sqrt(1 - sq(r23)) * sq(r22 + r33 - 1) *
                       sq(r22 + r33);
      // Printed under a square root; the pullback (and the quoted total volume)
      // require the ratio itself.
      return 0.125 * f / g;
    }
  }
  return 0.0;
}

double hs_cartesian_density(const BloorePoint& p, const Scenario& s) {
  const auto d = p.diagonal();
  double v = 2.0 * std::pow(2.0, 0.5 * static_cast<double>(s.offdiag_dimension()));
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
    const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
    v *= std::pow(d[i] * d[j], 0.5 * static_cast<double>(s.entry_coords(e)));
  }
  return v;
}

double chart_factor(const BloorePoint& p, const Scenario& s) {
  double f = 1.0;
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    f *= polar_volume_factor(entry_to_polar(entry_coords(p, s, e)));
  }
  return f;
}

}  // namespace

double reference_volume_element(const BloorePoint& p, const Scenario& s, bool include_chart_factor) {
  validate(p, s);
  if (s.metric != Metric::bures || !has_closed_form(s)) {
    fail(ErrorKind::unsupported, "no published volume element for " + to_string(s));
  }
  if (s.is_single_23()) return single_entry_element(p, s);
  if (s.is_chain()) return chain_element(p, s);
  return cross_pair_element(p, s, include_chart_factor);
}

VolumeElementDensity volume_density_closed(const BloorePoint& p, const Scenario& s, Chart chart) {
  validate(p, s);
  if (!has_closed_form(s)) {
    fail(ErrorKind::unsupported, "no closed-form volume element for " + to_string(s));
  }
  double cart = 0.0;
  if (s.metric == Metric::hs) {
    cart = hs_cartesian_density(p, s);
  } else if (s.is_cross_pair()) {
    cart = reference_volume_element(p, s, false);
  } else {
    const MuValue mu = mu_of(p);
    cart = reference_volume_element(p, s) / std::abs(drho33_dmu(p.rho11, p.rho22, mu.mu));
  }
  return {chart == Chart::polar ? cart * chart_factor(p, s) : cart};
}

}  // namespace bsep

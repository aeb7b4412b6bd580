#include "bsep/bloore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bsep/error.hpp"

namespace bsep {

MuValue mu_of(const BloorePoint& p) {
  const double nu = (p.rho11 * p.rho44()) / (p.rho22 * p.rho33);
  return {std::sqrt(nu), nu};
}

double rho33_for_mu(double rho11, double rho22, double mu) {
  return rho11 * (1.0 - rho11 - rho22) / (mu * mu * rho22 + rho11);
}

double drho33_dmu(double rho11, double rho22, double mu) {
  const double den = mu * mu * rho22 + rho11;
  return -2.0 * mu * rho22 * rho11 * (1.0 - rho11 - rho22) / (den * den);
}

BloorePoint point_from_mu(double rho11, double rho22, double mu, std::vector<double> offdiag) {
  return {rho11, rho22, rho33_for_mu(rho11, rho22, mu), std::move(offdiag)};
}

BloorePoint symmetric_point_for_mu(double mu, std::vector<double> offdiag) {
  // ρ11 = ρ44 = a/2 and ρ22 = ρ33 = (1-a)/2 give mu = a / (1 - a).
  const double a = mu / (1.0 + mu);
  return {0.5 * a, 0.5 * (1.0 - a), 0.5 * (1.0 - a), std::move(offdiag)};
}

void validate(const BloorePoint& p, const Scenario& s) {
  const auto d = p.diagonal();
  for (double v : d) {
    if (!(v > 0.0)) {
      fail(ErrorKind::invalid_argument,
           "diagonal entries must be strictly positive and sum below 1");
    }
  }
  if (p.offdiag.size() != s.offdiag_dimension()) {
    fail(ErrorKind::invalid_argument,
         "scenario " + to_string(s) + " needs " + std::to_string(s.offdiag_dimension()) +
             " off-diagonal coordinates, got " + std::to_string(p.offdiag.size()));
  }
}

std::span<const double> entry_coords(const BloorePoint& p, const Scenario& s, std::size_t e) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < e; ++i) offset += s.entry_coords(i);
  return std::span<const double>(p.offdiag).subspan(offset, s.entry_coords(e));
}

Quaternion entry_value(const BloorePoint& p, const Scenario& s, std::size_t e) {
  const auto c = entry_coords(p, s, e);
  std::array<double, 4> q{};
  std::copy(c.begin(), c.end(), q.begin());
  return {q[0], q[1], q[2], q[3]};
}

QuaternionMatrix4 build_rho_quaternionic(const BloorePoint& p, const Scenario& s) {
  validate(p, s);
  const auto d = p.diagonal();
  QuaternionMatrix4 h;
  for (std::size_t i = 0; i < 4; ++i) h(i, i) = Quaternion(d[i]);
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
    const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
    const Quaternion v = std::sqrt(d[i] * d[j]) * entry_value(p, s, e);
    h(i, j) = v;
    h(j, i) = v.conj();
  }
  return h;
}

HermitianMatrix build_rho(const BloorePoint& p, const Scenario& s) {
  if (s.quaternionic()) return embed_quaternionic(build_rho_quaternionic(p, s));
  validate(p, s);
  const auto d = p.diagonal();
  HermitianMatrix rho = HermitianMatrix::diagonal({d.begin(), d.end()});
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const auto i = static_cast<std::size_t>(s.entries[e].pos.row - 1);
    const auto j = static_cast<std::size_t>(s.entries[e].pos.col - 1);
    const Quaternion q = entry_value(p, s, e);
    rho.set(i, j, std::sqrt(d[i] * d[j]) * Complex(q.w, q.x));
  }
  return rho;
}

namespace {

double sum_sq(std::span<const double> c) {
  double acc = 0.0;
  for (double v : c) acc += v * v;
  return acc;
}

double entry_sq(const BloorePoint& p, const Scenario& s, EntryPair pos) {
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    if (s.entries[e].pos == pos) return sum_sq(entry_coords(p, s, e));
  }
  return 0.0;
}

bool has_closed_positivity(const Scenario& s) {
  return s.entries.size() == 1 || s.is_cross_pair() || s.is_chain();
}

bool has_closed_ppt(const Scenario& s) {
  return s.entries.size() == 1 || s.is_cross_pair();
}

double min_eigen(const HermitianMatrix& m) { return eigenvalues_hermitian(m).min(); }

}  // namespace

double positivity_margin(const BloorePoint& p, const Scenario& s) {
  validate(p, s);
  if (s.is_cross_pair()) {
    return std::min(1.0 - entry_sq(p, s, kEntry14), 1.0 - entry_sq(p, s, kEntry23));
  }
  if (has_closed_positivity(s)) return 1.0 - sum_sq(p.offdiag);
  return min_eigen(build_rho(p, s));
}

double ppt_margin(const BloorePoint& p, const Scenario& s) {
  validate(p, s);
  const double nu = mu_of(p).nu;
  if (s.is_cross_pair()) {
    const double q14 = entry_sq(p, s, kEntry14);
    const double q23 = entry_sq(p, s, kEntry23);
    return std::min({1.0 - q14, 1.0 - q23, nu - q23, 1.0 / nu - q14});
  }
  if (s.entries.size() == 1) {
    const double q = sum_sq(p.offdiag);
    const EntryPair pos = s.entries.front().pos;
    // Partial transposition moves ρ23 to the (1,4) slot and vice versa; ρ12
    // only trades places with its conjugate.
    if (pos == kEntry23) return std::min(1.0 - q, nu - q);
    if (pos == kEntry14) return std::min(1.0 - q, 1.0 / nu - q);
    return 1.0 - q;
  }
  const HermitianMatrix rho = build_rho(p, s);
  return std::min(min_eigen(rho), min_eigen(partial_transpose(rho)));
}

bool positivity_indicator(const BloorePoint& p, const Scenario& s, IndicatorRoute route) {
  if (route == IndicatorRoute::closed_form && has_closed_positivity(s)) {
    return positivity_margin(p, s) >= 0.0;
  }
  return is_psd(build_rho(p, s));
}

bool ppt_indicator(const BloorePoint& p, const Scenario& s, IndicatorRoute route) {
  if (route == IndicatorRoute::closed_form && has_closed_ppt(s)) {
    return ppt_margin(p, s) >= 0.0;
  }
  const HermitianMatrix rho = build_rho(p, s);
  return is_psd(rho) && is_psd(partial_transpose(rho));
}

std::vector<double> entry_to_polar(std::span<const double> cart) {
  const std::size_t k = cart.size();
  std::vector<double> out(k, 0.0);
  if (k == 0) return out;
  if (k == 1) {
    out[0] = cart[0];
    return out;
  }
  out[0] = std::sqrt(sum_sq(cart));
  // θ_m for m < k-1 from the tail norm; the last angle spans the full circle.
  for (std::size_t m = 0; m + 2 < k; ++m) {
    double tail = 0.0;
    for (std::size_t i = m + 1; i < k; ++i) tail += cart[i] * cart[i];
    out[m + 1] = std::atan2(std::sqrt(tail), cart[m]);
  }
  double last = std::atan2(cart[k - 1], cart[k - 2]);
  if (last < 0.0) last += 2.0 * std::numbers::pi;
  out[k - 1] = last;
  return out;
}

std::vector<double> entry_from_polar(std::span<const double> polar) {
  const std::size_t k = polar.size();
  std::vector<double> out(k, 0.0);
  if (k == 0) return out;
  if (k == 1) {
    out[0] = polar[0];
    return out;
  }
  double prefix = polar[0];
  for (std::size_t i = 0; i + 1 < k; ++i) {
    out[i] = prefix * std::cos(polar[i + 1]);
    prefix *= std::sin(polar[i + 1]);
  }
  out[k - 1] = prefix;
  return out;
}

std::vector<double> polar_jacobian(std::span<const double> polar) {
  const std::size_t k = polar.size();
  std::vector<double> jac(k * k, 0.0);
  if (k == 1) {
    jac[0] = 1.0;
    return jac;
  }
  const double r = polar[0];
  // c_i = r · Π_{m<i} sin θ_m · f_i, with f_i = cos θ_i (i < k-1) or 1.
  auto angle = [&](std::size_t m) { return polar[m + 1]; };
  for (std::size_t i = 0; i < k; ++i) {
    const bool last = i + 1 == k;
    const double fi = last ? 1.0 : std::cos(angle(i));
    double prod = 1.0;
    for (std::size_t m = 0; m < i; ++m) prod *= std::sin(angle(m));
    jac[i * k + 0] = prod * fi;
    for (std::size_t m = 0; m + 1 < k; ++m) {
      double d = 0.0;
      if (m < i) {
        double others = 1.0;
        for (std::size_t l = 0; l < i; ++l) others *= (l == m) ? std::cos(angle(l)) : std::sin(angle(l));
        d = r * others * fi;
      } else if (m == i && !last) {
        d = -r * prod * std::sin(angle(i));
      }
      jac[i * k + m + 1] = d;
    }
  }
  return jac;
}

double polar_volume_factor(std::span<const double> polar) {
  const std::size_t k = polar.size();
  if (k <= 1) return 1.0;
  double v = std::pow(polar[0], static_cast<double>(k - 1));
  for (std::size_t m = 1; m + 1 < k; ++m) {
    v *= std::pow(std::sin(polar[m]), static_cast<double>(k - 1 - m));
  }
  return std::abs(v);
}

BloorePoint swap_cross_pair(const BloorePoint& p, const Scenario& s) {
  if (!s.is_cross_pair()) {
    fail(ErrorKind::invalid_argument, "swap_cross_pair needs the [(1,4),(2,3)] shape");
  }
  BloorePoint out{p.rho22, p.rho11, p.rho44(), {}};
  // Entries are sorted, so entry 0 is (1,4) and entry 1 is (2,3).
  const auto c14 = entry_coords(p, s, 0);
  const auto c23 = entry_coords(p, s, 1);
  out.offdiag.assign(c23.begin(), c23.end());
  out.offdiag.insert(out.offdiag.end(), c14.begin(), c14.end());
  return out;
}

}  // namespace bsep

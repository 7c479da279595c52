#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "sobq/common.hpp"

namespace sobq {

/// Dispersion data (alpha, beta) and the phase phi(xi); the single source of
/// truth for all symbol evaluations.
struct PhaseSymbol {
  double alpha = 1.0;
  int beta = 1;  // +1 or -1

  PhaseSymbol() = default;
  PhaseSymbol(double a, int b) : alpha(a), beta(b) {
    if (!(alpha > 0.0) || alpha > 1.0) throw invalid_symbol_error("alpha must lie in (0,1]");
    if (beta != 1 && beta != -1) throw invalid_symbol_error("beta must be +1 or -1");
  }

  double ab() const { return alpha * beta; }

  /// phi(xi) = sqrt(xi^6 + alpha*beta*xi^4 + alpha^2*xi^2).
  double phase(double xi) const {
    double x2 = xi * xi;
    double rad = x2 * (x2 * x2 + ab() * x2 + alpha * alpha);
    if (rad < 0.0) throw invalid_symbol_error("negative radicand in phase");
    return std::sqrt(rad);
  }

  /// d(phi)/d(mu) for mu > 0.
  double phase_derivative(double mu) const {
    double m2 = mu * mu;
    return (3.0 * m2 * m2 + 2.0 * ab() * m2 + alpha * alpha) /
           std::sqrt(m2 * m2 + ab() * m2 + alpha * alpha);
  }

  /// Inverse of phase on [0, inf): the mu >= 0 with phi(mu) = lambda.
  double phase_inverse(double lambda) const {
    if (lambda <= 0.0) return 0.0;
    double mu = std::cbrt(lambda);  // phi ~ mu^3 at infinity
    for (int it = 0; it < 100; ++it) {
      double f = phase(mu) - lambda;
      double d = phase_derivative(mu);
      double step = f / d;
      mu -= step;
      if (mu <= 0.0) mu = 1e-12;
      if (std::abs(step) < 1e-15 * std::max(1.0, mu)) break;
    }
    return mu;
  }
};

/// Ratio of the KdV-type and exact modulation weights (the norm-equivalence
/// quantity): (1+|x - sqrt(y^3) - (ab/2) sqrt(y)|) / (1+|x - sqrt(y^3+ab*y^2+a^2*y)|).
inline double equivalence_ratio(const PhaseSymbol& sym, double x, double y) {
  double num = 1.0 + std::abs(x - std::sqrt(y * y * y) - 0.5 * sym.ab() * std::sqrt(y));
  double den = 1.0 + std::abs(x - std::sqrt(y * y * y + sym.ab() * y * y + sym.alpha * sym.alpha * y));
  return num / den;
}

/// The three tracked decaying roots gamma_j(rho) of
/// gamma^6 - ab*gamma^4 + a^2*gamma^2 = rho^2, with the Cramer/Vandermonde
/// kernel quantities of the 3x3 system in (1, gamma^2, gamma^4).
struct RootSystem {
  cplx rho{};
  std::array<cplx, 3> gamma{};  // Re gamma_j < 0 branch
  std::array<cplx, 3> z{};      // z_j = gamma_j^2
  cplx delta{};                 // (z2-z1)(z3-z1)(z3-z2)
  std::array<std::array<cplx, 3>, 3> delta_jm{};  // [j][m]

  cplx char_residual(const PhaseSymbol& sym, int j) const {
    cplx g2 = gamma[j] * gamma[j];
    return ((g2 - sym.ab()) * g2 + sym.alpha * sym.alpha) * g2 - rho * rho;
  }

  /// Cramer solution c_j = sum_m delta_jm[j][m] * h[m] / delta.
  std::array<cplx, 3> cramer(const std::array<cplx, 3>& h) const {
    std::array<cplx, 3> c{};
    for (int j = 0; j < 3; ++j)
      c[j] = (delta_jm[j][0] * h[0] + delta_jm[j][1] * h[1] + delta_jm[j][2] * h[2]) / delta;
    return c;
  }
};

/// Roots on the oscillatory ray rho = i*phi(mu): gamma_1^+ = -i*mu exactly,
/// gamma_{2,3}^+ = -p -+ i*q with (p,q) derived from the quadratic factor of
/// the cubic in gamma^2 (not from closed forms; see oscillatory_roots).
struct OscillatoryRootData {
  double mu = 1.0;
  std::array<cplx, 3> gamma_plus{};
  double p = 0.0;
  double q = 0.0;
};

namespace detail {

/// Roots of z^3 + a2 z^2 + a1 z + a0 = 0 (complex coefficients), via the
/// Cardano formula plus Newton polish.
inline std::array<cplx, 3> cubic_roots(cplx a2, cplx a1, cplx a0) {
  // depressed cubic w^3 + p w + q with z = w - a2/3
  cplx shift = a2 / 3.0;
  cplx p = a1 - a2 * a2 / 3.0;
  cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  std::array<cplx, 3> roots;
  if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
    roots.fill(-shift);
    return roots;
  }
  cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cplx u3 = -q / 2.0 + disc;
  if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
  cplx u = std::pow(u3, 1.0 / 3.0);
  const cplx omega(-0.5, 0.5 * std::sqrt(3.0));
  for (int k = 0; k < 3; ++k) {
    cplx uk = u * (k == 0 ? cplx(1.0) : (k == 1 ? omega : omega * omega));
    cplx w = (std::abs(uk) > 0.0) ? uk - p / (3.0 * uk) : cplx(0.0);
    cplx zk = w - shift;
    for (int it = 0; it < 3; ++it) {  // Newton polish on the cubic
      cplx f = ((zk + a2) * zk + a1) * zk + a0;
      cplx df = (3.0 * zk + 2.0 * a2) * zk + a1;
      if (std::abs(df) == 0.0) break;
      zk -= f / df;
    }
    roots[k] = zk;
  }
  return roots;
}

/// z-roots of the characteristic cubic z^3 - ab z^2 + a^2 z - rho^2 = 0.
inline std::array<cplx, 3> characteristic_z_roots(const PhaseSymbol& sym, cplx rho) {
  return cubic_roots(cplx(-sym.ab()), cplx(sym.alpha * sym.alpha), -rho * rho);
}

inline cplx newton_polish_gamma(const PhaseSymbol& sym, cplx rho, cplx g) {
  for (int it = 0; it < 3; ++it) {
    cplx g2 = g * g;
    cplx f = ((g2 - sym.ab()) * g2 + sym.alpha * sym.alpha) * g2 - rho * rho;
    cplx df = ((6.0 * g2 - 4.0 * sym.ab()) * g2 + 2.0 * sym.alpha * sym.alpha) * g;
    if (std::abs(df) == 0.0) break;
    g -= f / df;
  }
  return g;
}

inline void fill_kernel(RootSystem& rs) {
  const auto& z = rs.z;
  rs.delta = (z[1] - z[0]) * (z[2] - z[0]) * (z[2] - z[1]);
  // delta_jm[j][m]: determinant of the Vandermonde matrix in (1, z, z^2)
  // with column j replaced by the unit vector e_m, i.e. the (m,j) cofactor.
  for (int j = 0; j < 3; ++j) {
    int p = (j == 0) ? 1 : 0;
    int q = (j == 2) ? 1 : 2;
    double sign0 = ((j % 2) == 0) ? 1.0 : -1.0;  // (-1)^{(m=0)+j}
    rs.delta_jm[j][0] = sign0 * z[p] * z[q] * (z[q] - z[p]);
    rs.delta_jm[j][1] = -sign0 * (z[q] * z[q] - z[p] * z[p]);
    rs.delta_jm[j][2] = sign0 * (z[q] - z[p]);
  }
}

}  // namespace detail

/// Degeneracy cutoff for |Delta|, scale-aware in |rho|.
inline double delta_tolerance(cplx rho) {
  double r = std::abs(rho);
  return 1e-10 * std::max(1.0, r * r * r * r);
}

/// Solve the characteristic equation at rho and keep the decaying branch
/// (Re gamma < 0).  On the imaginary axis the sign is fixed by the limit
/// from Re rho > 0 unless a continuation hint is given.
inline RootSystem characteristic_roots(const PhaseSymbol& sym, cplx rho,
                                       const std::optional<std::array<cplx, 3>>& hint = std::nullopt) {
  if (rho == cplx(0.0)) throw degenerate_roots_error("rho = 0 is degenerate");
  RootSystem rs;
  rs.rho = rho;
  auto z = detail::characteristic_z_roots(sym, rho);

  // degenerate z-roots
  double dtol = delta_tolerance(rho);
  cplx dd = (z[1] - z[0]) * (z[2] - z[0]) * (z[2] - z[1]);
  if (std::abs(dd) <= dtol) throw degenerate_roots_error("coincident characteristic roots");

  const double axis_tol = 1e-9;
  for (int k = 0; k < 3; ++k) {
    cplx w = std::sqrt(z[k]);  // principal: Re w >= 0
    cplx g;
    if (std::abs(w.real()) > axis_tol * std::abs(w)) {
      g = (w.real() > 0.0) ? -w : w;
    } else if (hint) {
      // nearest of +-w to any hint root
      cplx best = -w;
      double bestd = 1e300;
      for (cplx cand : {w, -w})
        for (const cplx& h : *hint)
          if (std::abs(cand - h) < bestd) {
            bestd = std::abs(cand - h);
            best = cand;
          }
      g = best;
    } else if (std::abs(rho.real()) <= axis_tol * std::abs(rho)) {
      // limit from Re rho > 0
      double eps = 1e-8 * std::max(1.0, std::abs(rho));
      cplx rho_eps = rho + eps;
      auto ze = detail::characteristic_z_roots(sym, rho_eps);
      cplx znear = ze[0];
      for (const cplx& cand : ze)
        if (std::abs(cand - z[k]) < std::abs(znear - z[k])) znear = cand;
      cplx we = std::sqrt(znear);
      if (std::abs(we.real()) <= 0.1 * axis_tol * std::abs(we))
        throw ambiguous_sign_error("root sign ambiguous on the imaginary axis");
      cplx ge = (we.real() > 0.0) ? -we : we;
      g = (std::abs(w - ge) < std::abs(-w - ge)) ? w : -w;
    } else {
      throw ambiguous_sign_error("root on the imaginary axis without continuity hint");
    }
    rs.gamma[k] = detail::newton_polish_gamma(sym, rho, g);
    rs.z[k] = rs.gamma[k] * rs.gamma[k];
  }

  // initial labeling: sort by (Re, Im)
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (rs.gamma[a].real() != rs.gamma[b].real()) return rs.gamma[a].real() < rs.gamma[b].real();
    return rs.gamma[a].imag() < rs.gamma[b].imag();
  });
  RootSystem out;
  out.rho = rho;
  for (int k = 0; k < 3; ++k) {
    out.gamma[k] = rs.gamma[idx[k]];
    out.z[k] = rs.z[idx[k]];
  }
  if (hint) {
    // relabel to match the hint by nearest neighbor (greedy over pairs)
    std::array<cplx, 3> g = out.gamma;
    std::array<bool, 3> used{};
    std::array<cplx, 3> lab{};
    for (int i = 0; i < 3; ++i) {
      int best = -1;
      double d1 = 1e300, d2 = 1e300;
      for (int k = 0; k < 3; ++k) {
        if (used[k]) continue;
        double d = std::abs(g[k] - (*hint)[i]);
        if (d < d1) {
          d2 = d1;
          d1 = d;
          best = k;
        } else if (d < d2) {
          d2 = d;
        }
      }
      if (d2 < 1.1 * d1)
        throw tracking_failure_error("ambiguous nearest-neighbor root matching");
      used[best] = true;
      lab[i] = g[best];
    }
    for (int i = 0; i < 3; ++i) {
      out.gamma[i] = lab[i];
      out.z[i] = lab[i] * lab[i];
    }
  }
  detail::fill_kernel(out);
  if (std::abs(out.delta) <= dtol) throw degenerate_roots_error("|Delta| below tolerance");
  return out;
}

/// Root systems at the given rho-points with continuous labeling along the
/// sequence (nearest-neighbor continuation, 10% ambiguity guard).
inline std::vector<RootSystem> track_roots_along_points(const PhaseSymbol& sym,
                                                        const std::vector<cplx>& points) {
  std::vector<RootSystem> out;
  out.reserve(points.size());
  std::optional<std::array<cplx, 3>> hint;
  for (cplx rho : points) {
    RootSystem rs = characteristic_roots(sym, rho, hint);
    hint = rs.gamma;
    out.push_back(std::move(rs));
  }
  return out;
}

/// Oscillatory roots at rho = i*phi(mu).  gamma_1^+ = -i*mu exactly; (p,q)
/// come from the quadratic factor z^2 - (ab+mu^2) z + (mu^4+ab*mu^2+a^2) of
/// the characteristic cubic.  (The closed forms printed for p,q elsewhere are
/// inconsistent with the characteristic equation; the factored cubic is the
/// ground truth here.)
inline OscillatoryRootData oscillatory_roots(const PhaseSymbol& sym, double mu) {
  OscillatoryRootData o;
  o.mu = mu;
  double m2 = mu * mu;
  double disc = 3.0 * m2 * m2 + 2.0 * sym.ab() * m2 + 3.0 * sym.alpha * sym.alpha;
  cplx zq = 0.5 * cplx(sym.ab() + m2, std::sqrt(disc));
  cplx w = std::sqrt(zq);  // first quadrant: p > 0, q > 0
  o.p = w.real();
  o.q = w.imag();
  o.gamma_plus = {cplx(0.0, -mu), cplx(-o.p, -o.q), cplx(-o.p, o.q)};
  return o;
}

/// RootSystem view of the oscillatory point (for the shared Cramer kernel).
inline RootSystem oscillatory_system(const PhaseSymbol& sym, double mu) {
  OscillatoryRootData o = oscillatory_roots(sym, mu);
  RootSystem rs;
  rs.rho = cplx(0.0, sym.phase(mu));
  rs.gamma = o.gamma_plus;
  for (int k = 0; k < 3; ++k) rs.z[k] = rs.gamma[k] * rs.gamma[k];
  detail::fill_kernel(rs);
  if (std::abs(rs.delta) <= delta_tolerance(rs.rho))
    throw degenerate_roots_error("|Delta| below tolerance at oscillatory point");
  return rs;
}

/// Cramer coefficients for boundary transforms h (throws when |Delta| is
/// below the scale-aware cutoff).
inline std::array<cplx, 3> cramer_coefficients(const RootSystem& rs, const std::array<cplx, 3>& h) {
  if (std::abs(rs.delta) <= delta_tolerance(rs.rho))
    throw degenerate_system_error("Cramer system is degenerate");
  return rs.cramer(h);
}

}  // namespace sobq

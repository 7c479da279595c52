#pragma once

#include <cmath>
#include <functional>

#include "sobq/common.hpp"
#include "sobq/grid.hpp"
#include "sobq/symbols.hpp"

namespace sobq {

/// Norm parameters; sigma only matters for the Lambda/composite variants.
struct NormSpec {
  double s = 0.0;
  double b = 0.5;
  double sigma = 0.55;

  NormSpec() = default;
  NormSpec(double s_, double b_, double sigma_ = 0.55) : s(s_), b(b_), sigma(sigma_) {}

  void require_sigma() const {
    if (!(sigma > 0.5 && sigma < 1.0)) throw config_error("sigma must lie in (1/2, 1)");
  }
};

/// Smooth cutoff: 1 on [-inner, inner], 0 outside (-outer, outer).
struct CutoffSpec {
  double inner = 1.0;
  double outer = 2.0;
};

namespace detail {
inline double bump_psi(double r) { return r > 0.0 ? std::exp(-1.0 / r) : 0.0; }
}

/// Canonical smooth bump eta: plateau |t| <= inner, support |t| < outer,
/// glued by psi(outer-|t|) / (psi(outer-|t|) + psi(|t|-inner)).
inline double eta(const CutoffSpec& c, double t) {
  double a = std::abs(t);
  if (a <= c.inner) return 1.0;
  if (a >= c.outer) return 0.0;
  double up = detail::bump_psi(c.outer - a);
  double dn = detail::bump_psi(a - c.inner);
  return up / (up + dn);
}

inline double eta(double t) { return eta(CutoffSpec{}, t); }

/// H^s norm of a 1D slice: (sum <xi_k>^{2s} |f_k|^2 dxi)^{1/2}.
inline double sobolev_norm_line(const Slice1D& f, double s) {
  Slice1D d = f.to_dual();
  double acc = 0.0;
  for (int k = 0; k < d.n(); ++k) acc += std::pow(jbracket(d.xi(k)), 2.0 * s) * std::norm(d.v[k]);
  return std::sqrt(acc * d.dxi());
}

/// Zero-extension proxy for the half-line quotient norm: exact for
/// s in (-1/2, 1/2), an upper proxy otherwise (diagnostic only).
inline double sobolev_norm_halfline(const Slice1D& f, double s) {
  if (f.dual) throw representation_mismatch_error("halfline norm wants a physical slice");
  Slice1D g = f;
  for (int a = 0; a < g.n(); ++a)
    if (g.x(a) < 0.0) g.v[a] = cplx{};
  return sobolev_norm_line(g, s);
}

enum class Modulation { exact, kdv };

/// Modulation distance |tau| - phi(xi), or its KdV-type equivalent
/// |tau| - |xi|^3 - (ab/2)|xi|.
inline double modulation_gap(const PhaseSymbol& sym, Modulation m, double xi, double tau) {
  double a = std::abs(xi);
  if (m == Modulation::exact) return std::abs(tau) - sym.phase(xi);
  return std::abs(tau) - a * a * a - 0.5 * sym.ab() * a;
}

/// Bourgain norm: discrete L2 of <xi>^s <|tau|-phi(xi)>^b w(xi,tau).
inline double bourgain_norm(const SpectralField& f, const PhaseSymbol& sym, const NormSpec& spec,
                            Modulation mod = Modulation::exact) {
  SpectralField d = f.to_dual();
  const auto& g = d.grid();
  double acc = 0.0;
  for (int k = 0; k < g.nx; ++k) {
    double xi = g.xi(k);
    double xw = std::pow(jbracket(xi), 2.0 * spec.s);
    for (int n = 0; n < g.nt; ++n) {
      double gap = modulation_gap(sym, mod, xi, g.tau(n));
      acc += xw * std::pow(jbracket(gap), 2.0 * spec.b) * std::norm(d.at(k, n));
    }
  }
  return std::sqrt(acc * g.dxi() * g.dtau());
}

/// Lambda_sigma norm: discrete L2 of <tau>^sigma w over |xi| <= 1.
inline double lambda_sigma_norm(const SpectralField& f, const NormSpec& spec) {
  spec.require_sigma();
  SpectralField d = f.to_dual();
  const auto& g = d.grid();
  double acc = 0.0;
  for (int k = 0; k < g.nx; ++k) {
    if (std::abs(g.xi(k)) > 1.0) continue;
    for (int n = 0; n < g.nt; ++n)
      acc += std::pow(jbracket(g.tau(n)), 2.0 * spec.sigma) * std::norm(d.at(k, n));
  }
  return std::sqrt(acc * g.dxi() * g.dtau());
}

/// Composite X^{s,b,sigma} norm: Bourgain + Lambda_sigma.
inline double composite_norm(const SpectralField& f, const PhaseSymbol& sym, const NormSpec& spec) {
  SpectralField d = f.to_dual();
  return bourgain_norm(d, sym, spec) + lambda_sigma_norm(d, spec);
}

/// Apply a frequency multiplier m(xi) in the dual representation.
inline SpectralField apply_xi_multiplier(const SpectralField& f,
                                         const std::function<double(double)>& m) {
  SpectralField d = f.to_dual();
  const auto& g = d.grid();
  for (int k = 0; k < g.nx; ++k) {
    double w = m(g.xi(k));
    for (int n = 0; n < g.nt; ++n) d.at(k, n) *= w;
  }
  return d;
}

/// H^s norm in time of a sampled series on the grid's t-nodes.
inline double sobolev_norm_time_series(const SpaceTimeGrid& g, const std::vector<cplx>& series,
                                       double s) {
  if (static_cast<int>(series.size()) != g.nt)
    throw representation_mismatch_error("series length != nt");
  Slice1D sl(g.T, g.nt);
  sl.v = series;
  return sobolev_norm_line(sl, s);
}

}  // namespace sobq

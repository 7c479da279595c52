#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sobq/common.hpp"
#include "sobq/grid.hpp"
#include "sobq/quadrature.hpp"
#include "sobq/symbols.hpp"

namespace sobq {

/// Initial data (phi, psi): u(.,0) = phi, u_t(.,0) = psi''.  Stored as
/// physical slices on the grid's x-axis; half-line data enter zero-extended.
struct InitialPair {
  Slice1D phi;
  Slice1D psi;

  InitialPair() = default;
  InitialPair(const SpaceTimeGrid& g) : phi(g.L, g.nx), psi(g.L, g.nx) {}
};

/// One boundary-trace time series with its aliasing diagnostic.
struct TraceSeries {
  std::vector<cplx> values;
  bool aliasing_warning = false;
};

/// (u, u_xx, u_xxxx) at x = 0 on the common time grid.
struct TraceTriple {
  std::array<TraceSeries, 3> g;
};

/// Multiplier m(xi) = -xi^2 / phi(xi) of the velocity channel (fixed so that
/// d/dt u(.,0) = psi''; the limit at xi = 0 is 0 for alpha > 0).
inline double velocity_multiplier(const PhaseSymbol& sym, double xi) {
  if (xi == 0.0) return 0.0;
  return -xi * xi / sym.phase(xi);
}

/// Whole-line free evolution: per dual mode
///   u^(xi,t) = cos(t phi) f1^(xi) + sin(t phi) m(xi) f2^(xi).
/// Returns the field dual in x, physical in t.
inline SpectralField free_evolution(const InitialPair& data, const PhaseSymbol& sym,
                                    const SpaceTimeGrid& grid) {
  if (data.phi.n() != grid.nx || data.psi.n() != grid.nx || data.phi.extent != grid.L)
    throw representation_mismatch_error("initial data does not match grid");
  Slice1D f1 = data.phi.to_dual();
  Slice1D f2 = data.psi.to_dual();
  SpectralField out(grid, Rep::xdual);
  for (int k = 0; k < grid.nx; ++k) {
    double xi = grid.xi(k);
    double ph = sym.phase(xi);
    double m = velocity_multiplier(sym, xi);
    for (int b = 0; b < grid.nt; ++b) {
      double t = grid.t(b);
      out.at(k, b) = std::cos(t * ph) * f1.v[k] + std::sin(t * ph) * m * f2.v[k];
    }
  }
  return out;
}

/// Duhamel integral for forcing applied as f_xx: per mode
///   u^(xi,t) = int_0^t sin(phi (t-t')) m(xi) f^(xi,t') dt',
/// by cumulative composite Simpson on the time grid.  Solves
/// u_tt + Lu = f_xx with zero data at t = 0.
inline SpectralField duhamel(const SpectralField& forcing, const PhaseSymbol& sym) {
  SpectralField f = forcing.to_xdual();
  const auto& g = f.grid();
  const int b0 = g.nt / 2;  // index of t = 0
  SpectralField out(g, Rep::xdual);
  std::vector<cplx> ca(g.nt), cb(g.nt);
  for (int k = 0; k < g.nx; ++k) {
    double xi = g.xi(k);
    double ph = sym.phase(xi);
    double m = velocity_multiplier(sym, xi);
    if (m == 0.0) continue;
    for (int b = 0; b < g.nt; ++b) {
      double t = g.t(b);
      ca[b] = std::cos(ph * t) * f.at(k, b);
      cb[b] = std::sin(ph * t) * f.at(k, b);
    }
    auto cumA = cumulative_simpson(ca, g.dt());
    auto cumB = cumulative_simpson(cb, g.dt());
    for (int b = 0; b < g.nt; ++b) {
      double t = g.t(b);
      cplx A = cumA[b] - cumA[b0];
      cplx B = cumB[b] - cumB[b0];
      out.at(k, b) = m * (std::sin(ph * t) * A - std::cos(ph * t) * B);
    }
  }
  return out;
}

/// Spectral trace d^j/dx^j u(0, .) = (dxi / sqrt(2 pi)) sum_k (i xi_k)^j u^(xi_k, .).
/// Warns when the top 10% frequency band carries more than 1% of the
/// weighted energy (aliasing).
inline TraceSeries trace_at_zero(const SpectralField& u, int order) {
  SpectralField f = u.to_xdual();
  const auto& g = f.grid();
  TraceSeries out;
  out.values.assign(g.nt, cplx{});
  double total_energy = 0.0, top_energy = 0.0;
  double xi_top = 0.9 * (g.nx / 2) * g.dxi();
  for (int k = 0; k < g.nx; ++k) {
    cplx w = std::pow(cplx(0.0, g.xi(k)), order);
    double band = 0.0;
    for (int b = 0; b < g.nt; ++b) {
      cplx z = w * f.at(k, b);
      out.values[b] += z;
      band += std::norm(z);
    }
    total_energy += band;
    if (std::abs(g.xi(k)) >= xi_top) top_energy += band;
  }
  double c = g.dxi() / std::sqrt(2.0 * pi);
  for (auto& z : out.values) z *= c;
  out.aliasing_warning = (total_energy > 0.0 && top_energy > 0.01 * total_energy);
  return out;
}

/// Traces of orders 0, 2, 4 (the boundary channels).
inline TraceTriple traces_at_zero(const SpectralField& u) {
  TraceTriple t;
  t.g[0] = trace_at_zero(u, 0);
  t.g[1] = trace_at_zero(u, 2);
  t.g[2] = trace_at_zero(u, 4);
  return t;
}

}  // namespace sobq

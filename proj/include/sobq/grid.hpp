#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstddef>
#include <mutex>
#include <vector>

#include "sobq/common.hpp"

namespace sobq {

/// Uniform truncated space-time box [-L,L] x [-T,T] with even node counts.
/// Dual frequencies are the standard discrete Fourier frequencies of the box:
/// xi_k = k*pi/L, tau_n = n*pi/T with signed integer indices.
struct SpaceTimeGrid {
  double L = 40.0;
  int nx = 1024;
  double T = 4.0;
  int nt = 512;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(double L_, int nx_, double T_, int nt_) : L(L_), nx(nx_), T(T_), nt(nt_) {
    if (L <= 0 || T <= 0 || nx <= 0 || nt <= 0 || nx % 2 || nt % 2)
      throw config_error("grid extents must be positive and node counts even");
  }

  double dx() const { return 2.0 * L / nx; }
  double dt() const { return 2.0 * T / nt; }
  double dxi() const { return pi / L; }
  double dtau() const { return pi / T; }

  double x(int a) const { return -L + a * dx(); }
  double t(int b) const { return -T + b * dt(); }

  /// Signed frequency index for array slot k (FFT ordering).
  int kx_signed(int k) const { return k < nx / 2 ? k : k - nx; }
  int kt_signed(int n) const { return n < nt / 2 ? n : n - nt; }

  double xi(int k) const { return kx_signed(k) * dxi(); }
  double tau(int n) const { return kt_signed(n) * dtau(); }

  /// Array slot of the grid node closest to physical x (clamped).
  int index_of_x(double xv) const {
    int a = static_cast<int>(std::lround((xv + L) / dx()));
    return a < 0 ? 0 : (a >= nx ? nx - 1 : a);
  }
  int index_of_t(double tv) const {
    int b = static_cast<int>(std::lround((tv + T) / dt()));
    return b < 0 ? 0 : (b >= nt ? nt - 1 : b);
  }

  bool operator==(const SpaceTimeGrid& o) const {
    return L == o.L && nx == o.nx && T == o.T && nt == o.nt;
  }
};

enum class Rep { physical, dual, xdual };

namespace detail {

inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalized in-place 2D DFT, sign = FFTW_FORWARD or FFTW_BACKWARD.
/// Layout: v[i0 * n1 + i1].
inline void dft_2d(std::vector<cplx>& v, int n0, int n1, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex());
    plan = fftw_plan_dft_2d(n0, n1, p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

/// Unnormalized in-place DFT along axis 0 of a [n0 x n1] array.
inline void dft_axis0(std::vector<cplx>& v, int n0, int n1, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex());
    plan = fftw_plan_many_dft(1, &n0, n1, p, nullptr, n1, 1, p, nullptr, n1, 1, sign,
                              FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

/// Unnormalized in-place DFT along axis 1 of a [n0 x n1] array.
inline void dft_axis1(std::vector<cplx>& v, int n0, int n1, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex());
    plan = fftw_plan_many_dft(1, &n1, n0, p, nullptr, 1, n1, p, nullptr, 1, n1, sign,
                              FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

inline void dft_1d(std::vector<cplx>& v, int sign) { dft_axis1(v, 1, static_cast<int>(v.size()), sign); }

}  // namespace detail

/// Complex field over the grid, either physical u(x,t), fully dual
/// w(xi,tau), or dual in x only.  Values are stored as v[ix * nt + it].
///
/// Fourier convention (shared by every module): synthesis
///   u(x,t) = (1/2pi) * sum_{k,n} w(xi_k,tau_n) e^{i(x xi_k + t tau_n)} dxi dtau,
/// analysis
///   w(xi,tau) = (1/2pi) * sum_{a,b} u(x_a,t_b) e^{-i(x_a xi + t_b tau)} dx dt,
/// so that sum |w|^2 dxi dtau = sum |u|^2 dx dt exactly (discrete Parseval).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const SpaceTimeGrid& g, Rep rep = Rep::physical)
      : grid_(g), rep_(rep), v_(static_cast<std::size_t>(g.nx) * g.nt, cplx{}) {}

  const SpaceTimeGrid& grid() const { return grid_; }
  Rep rep() const { return rep_; }
  std::size_t size() const { return v_.size(); }

  cplx& at(int i, int j) { return v_[static_cast<std::size_t>(i) * grid_.nt + j]; }
  const cplx& at(int i, int j) const { return v_[static_cast<std::size_t>(i) * grid_.nt + j]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  SpectralField to_dual() const {
    require_grid();
    if (rep_ == Rep::dual) return *this;
    SpectralField out = *this;
    if (rep_ == Rep::physical) {
      out.apply_phase_x().apply_phase_t();
      detail::dft_2d(out.v_, grid_.nx, grid_.nt, FFTW_FORWARD);
      out.scale(grid_.dx() * grid_.dt() / (2.0 * pi));
    } else {  // xdual: transform the time axis
      out.apply_phase_t();
      detail::dft_axis1(out.v_, grid_.nx, grid_.nt, FFTW_FORWARD);
      out.scale(grid_.dt() / std::sqrt(2.0 * pi));
    }
    out.rep_ = Rep::dual;
    return out;
  }

  SpectralField to_physical() const {
    require_grid();
    if (rep_ == Rep::physical) return *this;
    SpectralField out = *this;
    if (rep_ == Rep::dual) {
      out.apply_phase_x().apply_phase_t();
      detail::dft_2d(out.v_, grid_.nx, grid_.nt, FFTW_BACKWARD);
      out.scale(grid_.dxi() * grid_.dtau() / (2.0 * pi));
    } else {  // xdual: transform the space axis back
      out.apply_phase_x();
      detail::dft_axis0(out.v_, grid_.nx, grid_.nt, FFTW_BACKWARD);
      out.scale(grid_.dxi() / std::sqrt(2.0 * pi));
    }
    out.rep_ = Rep::physical;
    return out;
  }

  /// Dual in x, physical in t.
  SpectralField to_xdual() const {
    require_grid();
    if (rep_ == Rep::xdual) return *this;
    SpectralField out = *this;
    if (rep_ == Rep::physical) {
      out.apply_phase_x();
      detail::dft_axis0(out.v_, grid_.nx, grid_.nt, FFTW_FORWARD);
      out.scale(grid_.dx() / std::sqrt(2.0 * pi));
    } else {  // dual: bring the time axis back to physical
      out.apply_phase_t();
      detail::dft_axis1(out.v_, grid_.nx, grid_.nt, FFTW_BACKWARD);
      out.scale(grid_.dtau() / std::sqrt(2.0 * pi));
    }
    out.rep_ = Rep::xdual;
    return out;
  }

  SpectralField as(Rep r) const {
    switch (r) {
      case Rep::physical: return to_physical();
      case Rep::dual: return to_dual();
      default: return to_xdual();
    }
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  SpectralField& operator*=(cplx c) {
    for (auto& z : v_) z *= c;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx c, SpectralField a) { return a *= c; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
  }
  double max_abs_imag() const {
    double m = 0.0;
    for (const auto& z : v_) m = std::max(m, std::abs(z.imag()));
    return m;
  }

  /// Discrete space-time L2 norm (physical: sum |u|^2 dx dt; dual:
  /// sum |w|^2 dxi dtau — equal by Parseval).
  double l2() const {
    double s = 0.0;
    for (const auto& z : v_) s += std::norm(z);
    double cell = rep_ == Rep::physical ? grid_.dx() * grid_.dt()
                 : rep_ == Rep::dual    ? grid_.dxi() * grid_.dtau()
                                        : grid_.dxi() * grid_.dt();
    return std::sqrt(s * cell);
  }

  void drop_imag() {
    for (auto& z : v_) z = cplx(z.real(), 0.0);
  }

 private:
  void require_grid() const {
    if (v_.empty()) throw representation_mismatch_error("empty field");
  }
  void check_compatible(const SpectralField& o) const {
    if (!(grid_ == o.grid_) || rep_ != o.rep_)
      throw representation_mismatch_error("field grid/representation mismatch");
  }
  SpectralField& apply_phase_x() {
    // phase (-1)^k accounting for the x-offset -L of node 0
    for (int i = 1; i < grid_.nx; i += 2)
      for (int j = 0; j < grid_.nt; ++j) at(i, j) = -at(i, j);
    return *this;
  }
  SpectralField& apply_phase_t() {
    for (int i = 0; i < grid_.nx; ++i)
      for (int j = 1; j < grid_.nt; j += 2) at(i, j) = -at(i, j);
    return *this;
  }
  void scale(double c) {
    for (auto& z : v_) z *= c;
  }

  SpaceTimeGrid grid_;
  Rep rep_ = Rep::physical;
  std::vector<cplx> v_;
};

/// 1D periodic slice on [-extent, extent] with n nodes; same Fourier
/// convention as SpectralField, one dimension.
struct Slice1D {
  double extent = 0.0;
  std::vector<cplx> v;
  bool dual = false;

  Slice1D() = default;
  Slice1D(double ext, int n, bool dual_ = false) : extent(ext), v(n, cplx{}), dual(dual_) {}

  int n() const { return static_cast<int>(v.size()); }
  double dx() const { return 2.0 * extent / n(); }
  double dxi() const { return pi / extent; }
  double x(int a) const { return -extent + a * dx(); }
  double xi(int k) const { return (k < n() / 2 ? k : k - n()) * dxi(); }

  Slice1D to_dual() const {
    if (dual) return *this;
    Slice1D out = *this;
    for (int i = 1; i < out.n(); i += 2) out.v[i] = -out.v[i];
    detail::dft_1d(out.v, FFTW_FORWARD);
    double c = dx() / std::sqrt(2.0 * pi);
    for (auto& z : out.v) z *= c;
    out.dual = true;
    return out;
  }
  Slice1D to_physical() const {
    if (!dual) return *this;
    Slice1D out = *this;
    for (int i = 1; i < out.n(); i += 2) out.v[i] = -out.v[i];
    detail::dft_1d(out.v, FFTW_BACKWARD);
    double c = dxi() / std::sqrt(2.0 * pi);
    for (auto& z : out.v) z *= c;
    out.dual = false;
    return out;
  }

  double l2() const {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s * (dual ? dxi() : dx()));
  }
};

/// Extract the time slice u(., t_index) of a physical field.
inline Slice1D time_slice(const SpectralField& f, int t_index) {
  if (f.rep() != Rep::physical) throw representation_mismatch_error("time_slice wants physical");
  Slice1D s(f.grid().L, f.grid().nx);
  for (int a = 0; a < f.grid().nx; ++a) s.v[a] = f.at(a, t_index);
  return s;
}

/// Extract the spatial trace u(x_index, .) of a physical field.
inline Slice1D space_slice(const SpectralField& f, int x_index) {
  if (f.rep() != Rep::physical) throw representation_mismatch_error("space_slice wants physical");
  Slice1D s(f.grid().T, f.grid().nt);
  for (int b = 0; b < f.grid().nt; ++b) s.v[b] = f.at(x_index, b);
  return s;
}

}  // namespace sobq

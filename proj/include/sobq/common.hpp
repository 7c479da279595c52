#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sobq {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Base class for numerical failures (exit code 2 territory in the CLI).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_symbol_error : numeric_error {
  using numeric_error::numeric_error;
};
struct degenerate_roots_error : numeric_error {
  using numeric_error::numeric_error;
};
struct ambiguous_sign_error : numeric_error {
  using numeric_error::numeric_error;
};
struct tracking_failure_error : numeric_error {
  using numeric_error::numeric_error;
};
struct degenerate_system_error : numeric_error {
  using numeric_error::numeric_error;
};
struct representation_mismatch_error : numeric_error {
  using numeric_error::numeric_error;
};
struct nonconvergent_quadrature_error : numeric_error {
  using numeric_error::numeric_error;
};
struct tail_too_fat_error : numeric_error {
  using numeric_error::numeric_error;
};
struct no_contraction_error : numeric_error {
  using numeric_error::numeric_error;
};
struct max_iter_error : numeric_error {
  using numeric_error::numeric_error;
};
struct lambda_exhausted_error : numeric_error {
  using numeric_error::numeric_error;
};
struct resample_error : numeric_error {
  using numeric_error::numeric_error;
};
struct invalid_exponent_error : numeric_error {
  using numeric_error::numeric_error;
};

/// Configuration / usage errors (exit code 1 territory in the CLI).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

inline double sqr(double x) { return x * x; }

}  // namespace sobq

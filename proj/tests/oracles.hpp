#pragma once

// Test-only reference computations. They deliberately avoid the FFT path used by the
// library: every spectral operator here is an explicit dense DFT matrix.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

inline Eigen::VectorXd grid_points(double x_min, double x_max, Eigen::Index n) {
  Eigen::VectorXd x(n);
  const double dx = (x_max - x_min) / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = x_min + dx * static_cast<double>(k);
  return x;
}

inline Eigen::VectorXd grid_momenta(double length, Eigen::Index n, double hbar) {
  Eigen::VectorXd p(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto sk = k < n / 2 ? k : k - n;
    p(k) = 2.0 * std::numbers::pi * hbar * static_cast<double>(sk) / length;
  }
  return p;
}

inline Eigen::MatrixXcd dft_matrix(Eigen::Index n) {
  Eigen::MatrixXcd f(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      f(k, j) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j) /
                                    static_cast<double>(n));
  return f;
}

/// Dense matrix of a momentum-space multiplier m(p): F^-1 diag(m) F.
template <typename Fn>
Eigen::MatrixXcd momentum_operator(double length, Eigen::Index n, double hbar, Fn m) {
  const Eigen::MatrixXcd f = dft_matrix(n);
  const Eigen::VectorXd p = grid_momenta(length, n, hbar);
  Eigen::VectorXcd diag(n);
  for (Eigen::Index k = 0; k < n; ++k) diag(k) = m(p(k));
  return f.adjoint() * diag.asDiagonal() * f / static_cast<double>(n);
}

inline Eigen::MatrixXcd translation_matrix(double length, Eigen::Index n, double hbar, double a) {
  return momentum_operator(length, n, hbar,
                           [&](double p) { return std::exp(Complex(0.0, -p * a / hbar)); });
}

inline Eigen::MatrixXcd boost_matrix(const Eigen::VectorXd& x, double mass, double w, double hbar) {
  Eigen::VectorXcd d(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) d(k) = std::exp(Complex(0.0, mass * w * x(k) / hbar));
  return d.asDiagonal();
}

/// arg <psi | U_loop psi> with U_loop = T(-a) B(-w) T(a) B(w) built from dense matrices.
inline double dense_loop_phase(double x_min, double x_max, Eigen::Index n, double sigma,
                               double mass, double a, double w, double hbar) {
  const Eigen::VectorXd x = grid_points(x_min, x_max, n);
  const double length = x_max - x_min;
  Eigen::VectorXcd psi(n);
  for (Eigen::Index k = 0; k < n; ++k) psi(k) = std::exp(-x(k) * x(k) / (4.0 * sigma * sigma));
  psi.normalize();
  const Eigen::MatrixXcd loop = translation_matrix(length, n, hbar, -a) *
                                boost_matrix(x, mass, -w, hbar) *
                                translation_matrix(length, n, hbar, a) *
                                boost_matrix(x, mass, w, hbar);
  return std::arg(psi.dot(loop * psi));
}

/// <p> from the dense spectral derivative: sum conj(psi) (-i hbar d/dx) psi dx, with the
/// DFT applied as explicit matrix-vector products.
inline double spectral_momentum_mean(const Eigen::VectorXcd& psi, double length, double hbar) {
  const Eigen::Index n = psi.size();
  const Eigen::MatrixXcd f = dft_matrix(n);
  const Eigen::VectorXd p = grid_momenta(length, n, hbar);
  const Eigen::VectorXcd spectrum = f * psi;
  const Eigen::VectorXcd p_psi = f.adjoint() * (p.cast<Complex>().asDiagonal() * spectrum) /
                                 static_cast<double>(n);
  return (psi.dot(p_psi) / psi.squaredNorm()).real();
}

/// Overlap of two normalized real Gaussians of width sigma separated by d.
inline double gaussian_overlap(double d, double sigma) { return std::exp(-d * d / (8.0 * sigma * sigma)); }

}  // namespace oracle

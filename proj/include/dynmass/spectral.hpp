#pragma once

#include <unsupported/Eigen/FFT>

#include "dynmass/hilbert.hpp"

namespace dynmass {

/// Forward/inverse DFT pair on a fixed grid size. Holds its own FFT plan, so one
/// instance must not be shared between threads.
class Spectral {
 public:
  explicit Spectral(Index n) : n_(n), buffer_(n) {}

  void forward(const Wavefunction& in, Wavefunction& out) { fft_.fwd(out, in); }
  /// Includes the 1/N normalization.
  void inverse(const Wavefunction& in, Wavefunction& out) { fft_.inv(out, in); }

  /// F^-1 diag(multiplier) F psi
  Wavefunction apply(const Wavefunction& psi, const Eigen::ArrayXcd& multiplier) {
    forward(psi, buffer_);
    buffer_.array() *= multiplier;
    Wavefunction out(n_);
    inverse(buffer_, out);
    return out;
  }
  Wavefunction apply(const Wavefunction& psi, const Eigen::ArrayXd& multiplier) {
    forward(psi, buffer_);
    buffer_.array() *= multiplier.cast<Complex>();
    Wavefunction out(n_);
    inverse(buffer_, out);
    return out;
  }

  Index size() const { return n_; }

 private:
  Index n_;
  Eigen::FFT<double> fft_;
  Wavefunction buffer_;
};

}  // namespace dynmass

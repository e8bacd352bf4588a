#pragma once

// Independent reference computations for the test suite. These deliberately
// avoid the library's eigenvalue/closed-form code paths: fields are tracked
// by explicit scalar bookkeeping and boundary-value solves.

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "cavmic/cavity.hpp"
#include "cavmic/materials.hpp"

namespace oracles {

using cavmic::Complex;

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------------------
// Explicit bounce bookkeeping: propagate the two counter-propagating
// amplitudes pass by pass, applying sample and mirror coefficients as
// scalars. Produces the forward amplitude of each outcoupled pulse, the
// backward amplitude at the input mirror, and per-pass absorption.
struct BounceTrace {
  std::vector<Complex> forward;   // E_R-> after pass m (before the exit mirror)
  std::vector<Complex> backward;  // E_L<- after pass m (before the input mirror)
  std::vector<double> absorbed;   // per-pass absorbed fraction of unit input
};

inline BounceTrace bounce_trace(Complex r1, Complex r2, const cavmic::SampleCoeffs& s,
                                int passes) {
  BounceTrace t;
  Complex in_left{1.0};
  Complex in_right{0.0};
  for (int m = 1; m <= passes; ++m) {
    const Complex out_left = s.r_left * in_left + s.t * in_right;
    const Complex out_right = s.t * in_left + s.r_right * in_right;
    t.forward.push_back(out_right);
    t.backward.push_back(out_left);
    t.absorbed.push_back(std::norm(in_left) + std::norm(in_right) - std::norm(out_left) -
                         std::norm(out_right));
    in_left = r1 * out_left;
    in_right = r2 * out_right;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Direct boundary-value solve of the single-slab problem (continuity of the
// field and its derivative at both interfaces). Returns the raw coefficients
// referenced at the slab faces; magnitudes are convention-free.
struct SlabAmplitudes {
  Complex r;
  Complex t;
};

inline SlabAmplitudes slab_boundary_solve(Complex n, double d, double lambda) {
  const double k = 2.0 * std::numbers::pi / lambda;
  const Complex i{0.0, 1.0};
  const Complex ep = std::exp(i * n * k * d);
  const Complex em = std::exp(-i * n * k * d);

  // unknowns x = (r, a, b, t):
  //   1 + r = a + b
  //   1 - r = n (a - b)
  //   a ep + b em = t
  //   n (a ep - b em) = t
  std::array<std::array<Complex, 5>, 4> m = {{
      {Complex{-1.0}, Complex{1.0}, Complex{1.0}, Complex{0.0}, Complex{1.0}},
      {Complex{1.0}, n, -n, Complex{0.0}, Complex{1.0}},
      {Complex{0.0}, ep, em, Complex{-1.0}, Complex{0.0}},
      {Complex{0.0}, n * ep, -n * em, Complex{-1.0}, Complex{0.0}},
  }};
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int row = col + 1; row < 4; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    std::swap(m[col], m[piv]);
    for (int row = col + 1; row < 4; ++row) {
      const Complex f = m[row][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[row][c] -= f * m[col][c];
    }
  }
  std::array<Complex, 4> x{};
  for (int row = 3; row >= 0; --row) {
    Complex acc = m[row][4];
    for (int c = row + 1; c < 4; ++c) acc -= m[row][c] * x[c];
    x[row] = acc / m[row][row];
  }
  return {x[0], x[3]};
}

// ---------------------------------------------------------------------------
// Deterministic generators for property tests.
struct RandomPhysics {
  std::mt19937 rng{20260809};

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  cavmic::MaterialLayer material(bool lossless) {
    const double n_re = uniform(1.05, 3.0);
    const double n_im = lossless ? 0.0 : uniform(0.01, 1.5);
    return cavmic::MaterialLayer{{n_re, n_im}, uniform(0.5e-10, 8e-9), 1};
  }

  cavmic::CavityConfig cavity() {
    const double r1 = uniform(0.3, 0.995);
    const double r2 = uniform(0.3, 0.995);
    const double t2 = uniform(0.1, 1.0) * (1.0 - r2);
    cavmic::CavityConfig c;
    c.reflectivity_in = r1;
    c.transmission_in = 1.0 - r1;
    c.reflectivity_out = r2;
    c.transmission_out = t2;
    return c;
  }

  Complex phase() {
    const double th = uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(th), std::sin(th)};
  }

  cavmic::TransferMatrix matrix() {
    auto c = [&] { return Complex{uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; };
    return {c(), c(), c(), c()};
  }
};

}  // namespace oracles

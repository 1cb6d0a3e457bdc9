#pragma once

// Quadrature-space algebra of the two-photon formalism. A sideband field at
// frequency Omega is a pair of complex amplitudes {cosine, sine}; every
// optical element acts on it as a 2x2 complex matrix.

#include <complex>

#include <Eigen/Core>

namespace opto_spring {

using cplx = std::complex<double>;

/// Quadrature amplitudes {a^c, a^s} at one sideband frequency.
using QuadVector = Eigen::Vector2cd;

/// Linear map on quadrature space.
using Mat2 = Eigen::Matrix2cd;

/// Standard rotation [[cos, -sin], [sin, cos]].
Mat2 rotation(double phi);

/// The exact quarter turn rotation(pi/2) = [[0, -1], [1, 0]], used to map the
/// carrier onto the quadrature that a mirror displacement modulates.
Mat2 quarter_turn();

/// diag(e^q, e^-q); q is the single-pass squeeze factor.
Mat2 squeeze(double q);

/// O(theta) S(q) O^T(theta): a squeezer whose amplified quadrature is rotated
/// by theta. Symmetric, trace 2 cosh q, det 1.
Mat2 squeezer_in_frame(double theta, double q);

/// Single pass through the signal-extraction cavity with the crystal in the
/// middle: O(phi) O(theta) S O^T(theta) O(psi).
Mat2 m_cavity(double phi, double psi, double theta, double q);

cplx determinant(const Mat2& m);

/// adj(m), so that m * adj(m) = det(m) * I.
Mat2 adjugate(const Mat2& m);

}  // namespace opto_spring

#include "opto_spring/two_photon.hpp"

#include <cmath>

#include "opto_spring/errors.hpp"

namespace opto_spring {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
}

}  // namespace

Mat2 rotation(double phi) {
    require_finite(phi, "rotation angle");
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat2 m;
    m << c, -s,
         s, c;
    return m;
}

Mat2 quarter_turn() {
    Mat2 m;
    m << 0.0, -1.0,
         1.0, 0.0;
    return m;
}

Mat2 squeeze(double q) {
    require_finite(q, "squeeze factor");
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(q);
    m(1, 1) = std::exp(-q);
    return m;
}

Mat2 squeezer_in_frame(double theta, double q) {
    require_finite(theta, "squeeze angle");
    require_finite(q, "squeeze factor");
    // Closed form of O(theta) S O(-theta); keeps the result exactly symmetric.
    const double ch = std::cosh(q);
    const double sh = std::sinh(q);
    const double c2 = std::cos(2.0 * theta);
    const double s2 = std::sin(2.0 * theta);
    Mat2 m;
    m << ch + sh * c2, sh * s2,
         sh * s2, ch - sh * c2;
    return m;
}

Mat2 m_cavity(double phi, double psi, double theta, double q) {
    return rotation(phi) * squeezer_in_frame(theta, q) * rotation(psi);
}

cplx determinant(const Mat2& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

Mat2 adjugate(const Mat2& m) {
    Mat2 a;
    a << m(1, 1), -m(0, 1),
         -m(1, 0), m(0, 0);
    return a;
}

}  // namespace opto_spring

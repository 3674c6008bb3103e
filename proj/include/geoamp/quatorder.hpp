#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geoamp/psl2.hpp"
#include "geoamp/quadfield.hpp"

namespace geoamp::quatorder {

// Rational quaternion algebra (a,b), split at infinity (a > 0).
struct QuaternionAlgebra {
    std::int64_t a = 0, b = 0;
    std::vector<std::int64_t> ramified_primes;
    bool is_division = false;
};

// Hilbert symbol (a,b)_p; p = 2 allowed.
int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t p);

QuaternionAlgebra classify_algebra(std::int64_t a, std::int64_t b);

// Order basis (1, alpha, omega, alpha*omega) with alpha^2 = D > 0,
// omega^2 = -E < 0, omega*alpha = -alpha*omega; lattice (1/f) Z<basis>.
// Norm form: x0^2 - D x1^2 + E x2^2 - D E x3^2.
struct BasisOrder {
    std::int64_t D = 5, E = 2, f = 1;

    // Splitting rho: alpha -> diag(sqrt D, -sqrt D), omega -> [[0,1],[-E,0]].
    // rho(eta) = [[x0 + x1 sD, x2 + x3 sD], [-E(x2 - x3 sD), x0 - x1 sD]].
};

struct LatticePoint {
    std::int64_t c[4] = {0, 0, 0, 0};  // scaled coordinates, x_i = c_i / f
    std::int64_t reduced_norm = 0;

    bool operator<(const LatticePoint& o) const;
    bool operator==(const LatticePoint& o) const;
};

// Exact scaled norm form: c0^2 - D c1^2 + E c2^2 - D E c3^2 (= f^2 * nrd).
std::int64_t scaled_norm(const BasisOrder& O, const std::int64_t c[4]);

// trace of rho-bar(eta)/sqrt(n) = 2 x0 / sqrt(n)
double trace_proj(const BasisOrder& O, const LatticePoint& p);

// spectral norm of rho(eta)
double op_norm(const BasisOrder& O, const LatticePoint& p);

// projective image of rho(eta)/sqrt(n) in PSL2(R)
psl2::GroupElement matrix_image(const BasisOrder& O, const LatticePoint& p);

// eta in F + omega F, i.e. (x2,x3) = 0 or (x0,x1) = 0; exact stabilizer test
bool stabilizes_geodesic(const LatticePoint& p);

// All eta with reduced norm n and ||rho(eta)|| <= Cprime sqrt(n), one
// representative per +-pair, sorted lexicographically. Stratified scan over
// (x2,x3), OpenMP over strata.
std::vector<LatticePoint> enumerate_norm_ball(const BasisOrder& O, std::int64_t n,
                                              double Cprime);
// Independent reference: plain 4-D box scan, serial.
std::vector<LatticePoint> enumerate_norm_ball_boxscan(const BasisOrder& O, std::int64_t n,
                                                      double Cprime);

// |N_{R(n)}(F) / R_F^1|: orbits of exact stabilizers under the norm-one units
// of Z[alpha], via the two Pell-type coordinate equations.
std::int64_t exact_stabilizer_count(const BasisOrder& O, std::int64_t n);

// M(n, delta): enumerated points moving the geodesic by at most delta without
// stabilizing it.
std::vector<LatticePoint> approx_stabilizers(const BasisOrder& O, std::int64_t n, double delta,
                                             double Cprime);

enum class ClassType { hyperbolic, elliptic };

struct ClassInvariants {
    ClassType type;
    double trace_proj = 0.0;
    double P = 0.0;      // hyperbolic: square of the largest eigenvalue
    double theta = 0.0;  // elliptic: eigenvalue angle in (0, pi/2]
    std::int64_t D_O = 0;
};

ClassInvariants class_invariants(const BasisOrder& O, const LatticePoint& p, std::int64_t n);

}  // namespace geoamp::quatorder

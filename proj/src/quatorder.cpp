#include "geoamp/quatorder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "geoamp/numerics.hpp"
#include "geoamp/parallel.hpp"

namespace geoamp::quatorder {

namespace {

int legendre(std::int64_t a, std::int64_t p) { return quadfield::kronecker(a, p); }

// epsilon(u) = (u-1)/2 mod 2 and omega(u) = (u^2-1)/8 mod 2 for odd u
int eps2(std::int64_t u) {
    std::int64_t m = ((u % 4) + 4) % 4;
    return m == 1 ? 0 : 1;
}
int omega2(std::int64_t u) {
    std::int64_t m = ((u % 8) + 8) % 8;
    return (m == 1 || m == 7) ? 0 : 1;
}

}  // namespace

int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
    int alpha = 0, betae = 0;
    while (a % p == 0) {
        a /= p;
        ++alpha;
    }
    while (b % p == 0) {
        b /= p;
        ++betae;
    }
    if (p == 2) {
        int e = eps2(a) * eps2(b) + alpha * omega2(b) + betae * omega2(a);
        return (e % 2 == 0) ? 1 : -1;
    }
    int s = 1;
    if ((alpha * betae) % 2 == 1 && legendre(-1, p) == -1) s = -s;
    if (betae % 2 == 1 && legendre(a % p, p) == -1) s = -s;
    if (alpha % 2 == 1 && legendre(b % p, p) == -1) s = -s;
    return s;
}

QuaternionAlgebra classify_algebra(std::int64_t a, std::int64_t b) {
    if (a <= 0) throw std::invalid_argument("classify_algebra: need a > 0 (split at infinity)");
    if (b == 0) throw std::invalid_argument("classify_algebra: b must be nonzero");
    QuaternionAlgebra A;
    A.a = a;
    A.b = b;
    std::set<std::int64_t> candidates{2};
    for (auto [p, e] : quadfield::factorize(std::abs(a))) {
        (void)e;
        candidates.insert(p);
    }
    for (auto [p, e] : quadfield::factorize(std::abs(b))) {
        (void)e;
        candidates.insert(p);
    }
    for (std::int64_t p : candidates)
        if (hilbert_symbol(a, b, p) == -1) A.ramified_primes.push_back(p);
    std::sort(A.ramified_primes.begin(), A.ramified_primes.end());
    if (A.ramified_primes.size() % 2 != 0)
        throw std::runtime_error("classify_algebra: odd ramification set; reciprocity violated");
    A.is_division = !A.ramified_primes.empty();
    return A;
}

bool LatticePoint::operator<(const LatticePoint& o) const {
    for (int i = 0; i < 4; ++i)
        if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
}

bool LatticePoint::operator==(const LatticePoint& o) const {
    return c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2] && c[3] == o.c[3];
}

std::int64_t scaled_norm(const BasisOrder& O, const std::int64_t c[4]) {
    return c[0] * c[0] - O.D * c[1] * c[1] + O.E * (c[2] * c[2] - O.D * c[3] * c[3]);
}

double trace_proj(const BasisOrder& O, const LatticePoint& p) {
    return 2.0 * double(p.c[0]) / (double(O.f) * std::sqrt(double(p.reduced_norm)));
}

namespace {

// rho(eta) entries for scaled coordinates (without the 1/f)
void rho_entries(const BasisOrder& O, const std::int64_t c[4], double m[4]) {
    double sD = std::sqrt(double(O.D));
    m[0] = double(c[0]) + double(c[1]) * sD;
    m[1] = double(c[2]) + double(c[3]) * sD;
    m[2] = -double(O.E) * (double(c[2]) - double(c[3]) * sD);
    m[3] = double(c[0]) - double(c[1]) * sD;
}

double spectral_norm(const double m[4]) {
    double fro2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
    double det = m[0] * m[3] - m[1] * m[2];
    double disc = fro2 * fro2 - 4.0 * det * det;
    if (disc < 0) disc = 0;
    return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
}

void canonical_sign(std::int64_t c[4]) {
    for (int i = 0; i < 4; ++i) {
        if (c[i] > 0) return;
        if (c[i] < 0) {
            for (int j = 0; j < 4; ++j) c[j] = -c[j];
            return;
        }
    }
}

struct Boxes {
    std::int64_t c0, c1, c2, c3;
};

Boxes ball_boxes(const BasisOrder& O, std::int64_t n, double Cprime) {
    double s = Cprime * std::sqrt(double(n)) * double(O.f);
    double sD = std::sqrt(double(O.D));
    Boxes b;
    b.c0 = std::int64_t(s) + 1;
    b.c1 = std::int64_t(s / sD) + 1;
    b.c2 = std::int64_t(0.5 * s * (1.0 + 1.0 / double(O.E))) + 1;
    b.c3 = std::int64_t(0.5 * s * (1.0 + 1.0 / double(O.E)) / sD) + 1;
    return b;
}

bool in_ball(const BasisOrder& O, const std::int64_t c[4], std::int64_t n, double Cprime) {
    double m[4];
    rho_entries(O, c, m);
    return spectral_norm(m) <= Cprime * std::sqrt(double(n)) * double(O.f);
}

}  // namespace

double op_norm(const BasisOrder& O, const LatticePoint& p) {
    double m[4];
    rho_entries(O, p.c, m);
    return spectral_norm(m) / double(O.f);
}

psl2::GroupElement matrix_image(const BasisOrder& O, const LatticePoint& p) {
    double m[4];
    rho_entries(O, p.c, m);
    return psl2::GroupElement(m[0], m[1], m[2], m[3]);  // scaling drops out in PSL2
}

bool stabilizes_geodesic(const LatticePoint& p) {
    return (p.c[2] == 0 && p.c[3] == 0) || (p.c[0] == 0 && p.c[1] == 0);
}

std::vector<LatticePoint> enumerate_norm_ball(const BasisOrder& O, std::int64_t n,
                                              double Cprime) {
    if (n < 1) throw std::invalid_argument("enumerate_norm_ball: n >= 1 required");
    Boxes bx = ball_boxes(O, n, Cprime);
    std::int64_t target = O.f * O.f * n;

    std::vector<std::pair<std::int64_t, std::int64_t>> strata;
    for (std::int64_t c2 = -bx.c2; c2 <= bx.c2; ++c2)
        for (std::int64_t c3 = -bx.c3; c3 <= bx.c3; ++c3) strata.emplace_back(c2, c3);

    std::vector<std::vector<LatticePoint>> found(strata.size());
    parallel_for(strata.size(), [&](std::size_t si) {
        auto [c2, c3] = strata[si];
        std::int64_t m = target - O.E * (c2 * c2 - O.D * c3 * c3);
        for (std::int64_t c1 = 0; c1 <= bx.c1; ++c1) {
            std::int64_t c0sq = m + O.D * c1 * c1;
            std::int64_t c0;
            if (c0sq < 0 || !is_perfect_square(c0sq, &c0)) continue;
            if (c0 > bx.c0) continue;
            for (std::int64_t s0 : {c0, -c0}) {
                for (std::int64_t s1 : {c1, -c1}) {
                    std::int64_t c[4] = {s0, s1, c2, c3};
                    if (!in_ball(O, c, n, Cprime)) {
                        if (s1 == 0) break;
                        continue;
                    }
                    canonical_sign(c);
                    LatticePoint p;
                    for (int i = 0; i < 4; ++i) p.c[i] = c[i];
                    p.reduced_norm = n;
                    found[si].push_back(p);
                    if (s1 == 0) break;
                }
                if (s0 == 0) break;
            }
        }
    });

    std::vector<LatticePoint> out;
    for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<LatticePoint> enumerate_norm_ball_boxscan(const BasisOrder& O, std::int64_t n,
                                                      double Cprime) {
    if (n < 1) throw std::invalid_argument("enumerate_norm_ball_boxscan: n >= 1 required");
    Boxes bx = ball_boxes(O, n, Cprime);
    std::int64_t target = O.f * O.f * n;
    std::vector<LatticePoint> out;
    for (std::int64_t c0 = -bx.c0; c0 <= bx.c0; ++c0)
        for (std::int64_t c1 = -bx.c1; c1 <= bx.c1; ++c1)
            for (std::int64_t c2 = -bx.c2; c2 <= bx.c2; ++c2)
                for (std::int64_t c3 = -bx.c3; c3 <= bx.c3; ++c3) {
                    std::int64_t c[4] = {c0, c1, c2, c3};
                    if (scaled_norm(O, c) != target) continue;
                    if (!in_ball(O, c, n, Cprime)) continue;
                    canonical_sign(c);
                    LatticePoint p;
                    for (int i = 0; i < 4; ++i) p.c[i] = c[i];
                    p.reduced_norm = n;
                    out.push_back(p);
                }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::int64_t exact_stabilizer_count(const BasisOrder& O, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("exact_stabilizer_count: n >= 1 required");
    std::int64_t target = O.f * O.f * n;
    std::int64_t total = quadfield::pell_orbit_count(O.D, target);
    if (target % O.E == 0) total += quadfield::pell_orbit_count(O.D, target / O.E);
    return total;
}

std::vector<LatticePoint> approx_stabilizers(const BasisOrder& O, std::int64_t n, double delta,
                                             double Cprime) {
    if (delta <= 0) throw std::invalid_argument("approx_stabilizers: delta > 0 required");
    auto ball = enumerate_norm_ball(O, n, Cprime);
    auto axis = psl2::GeodesicDescriptor::axis();
    std::vector<char> keep(ball.size(), 0);
    parallel_for(ball.size(), [&](std::size_t i) {
        if (stabilizes_geodesic(ball[i])) return;
        double d = psl2::dist_to_normalizer(matrix_image(O, ball[i]), axis);
        keep[i] = (d <= delta) ? 1 : 0;
    });
    std::vector<LatticePoint> out;
    for (std::size_t i = 0; i < ball.size(); ++i)
        if (keep[i]) out.push_back(ball[i]);
    return out;
}

ClassInvariants class_invariants(const BasisOrder& O, const LatticePoint& p, std::int64_t n) {
    if (p.c[1] == 0 && p.c[2] == 0 && p.c[3] == 0)
        throw std::invalid_argument("class_invariants: scalar point");
    if (scaled_norm(O, p.c) != O.f * O.f * n)
        throw std::invalid_argument("class_invariants: reduced norm mismatch");
    std::int64_t f2n = O.f * O.f * n;
    if (p.c[0] * p.c[0] == f2n)
        throw std::runtime_error("class_invariants: parabolic element in a division algebra");

    ClassInvariants out;
    out.trace_proj = trace_proj(O, p);
    double at = std::abs(out.trace_proj);
    if (p.c[0] * p.c[0] > f2n) {
        out.type = ClassType::hyperbolic;
        double lam = 0.5 * (at + std::sqrt(at * at - 4.0));
        out.P = lam * lam;
    } else {
        out.type = ClassType::elliptic;
        out.theta = std::acos(std::min(1.0, at / 2.0));
    }

    // discriminant of the order (lattice cap Q(eta)): primitive pure vector
    std::int64_t g = gcd64(gcd64(p.c[1], p.c[2]), p.c[3]);
    std::int64_t w1 = p.c[1] / g, w2 = p.c[2] / g, w3 = p.c[3] / g;
    std::int64_t m0 = O.D * w1 * w1 - O.E * w2 * w2 + O.D * O.E * w3 * w3;
    std::int64_t f2 = O.f * O.f;
    std::int64_t k = 1;
    while ((k * k * m0) % f2 != 0) ++k;  // ring closure of the primitive generator
    out.D_O = 4 * (k * k * m0) / f2;
    return out;
}

}  // namespace geoamp::quatorder

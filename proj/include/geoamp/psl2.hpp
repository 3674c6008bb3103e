#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace geoamp::psl2 {

// A point of PSL2(R): unit-determinant 2x2 matrix stored up to global sign.
// Sign convention: the first nonzero entry in row-major order is positive.
class GroupElement {
public:
    GroupElement() : m_{1.0, 0.0, 0.0, 1.0} {}
    GroupElement(double a, double b, double c, double d);

    double a() const { return m_[0]; }
    double b() const { return m_[1]; }
    double c() const { return m_[2]; }
    double d() const { return m_[3]; }

    double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
    double trace_abs() const { return std::abs(m_[0] + m_[3]); }

    GroupElement inverse() const { return GroupElement(m_[3], -m_[1], -m_[2], m_[0]); }
    friend GroupElement operator*(const GroupElement& x, const GroupElement& y);

private:
    std::array<double, 4> m_;  // row-major, sign-normalized
    void normalize_sign();
};

std::ostream& operator<<(std::ostream& os, const GroupElement& g);

GroupElement make_a(double t);
GroupElement make_k(double theta);
GroupElement make_n(double x);

// Iwasawa t with g in N a(t) K; equals log Im(g·i).
double iwasawa_H(const GroupElement& g);

// Angle theta (mod 2pi) of the K part of the Iwasawa decomposition.
double iwasawa_theta(const GroupElement& g);

// Cartan coordinate: the unique t >= 0 with g in K a(t) K.
double cartan_t(const GroupElement& g);

// Reference metric: min over signs of the Frobenius distance of SL2 lifts.
double dist(const GroupElement& g, const GroupElement& h);

// K part of k*g, i.e. the map alpha_g with k g in N A alpha_g(k).
GroupElement alpha_map(const GroupElement& g, const GroupElement& k);

// Boundary geodesic data for g·A·i.
struct GeodesicDescriptor {
    enum class Kind { vertical, half_circle };
    Kind kind = Kind::vertical;
    double e1 = 0.0;          // finite endpoint (vertical) or left endpoint
    double e2 = 0.0;          // right endpoint (half-circle only)
    double center = 0.0;      // half-circle only
    double radius = 0.0;      // half-circle only
    double top_param = 0.0;   // s with g·a(s)·i at the top (half-circle only)

    static GeodesicDescriptor axis() { return GeodesicDescriptor{}; }  // {0, inf}
};

GeodesicDescriptor geodesic_of(const GroupElement& g);

// Some group element mapping the standard geodesic {0,inf} onto L.
GroupElement frame_of(const GeodesicDescriptor& L);

// Distance from g to the normalizer of Stab(L): golden-section minimization
// over both connected components, bracketed by |t| <= 2 cartan_t(g) + 10.
double dist_to_normalizer(const GroupElement& g, const GeodesicDescriptor& L);

// Mobius action on the boundary R u {inf}; inf encoded as HUGE_VAL.
double boundary_action(const GroupElement& g, double x);

}  // namespace geoamp::psl2

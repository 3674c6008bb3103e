#include "geoamp/psl2.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "geoamp/numerics.hpp"

namespace geoamp::psl2 {

GroupElement::GroupElement(double a, double b, double c, double d) : m_{a, b, c, d} {
    double det = a * d - b * c;
    if (!(det > 0.0)) throw std::invalid_argument("GroupElement: determinant must be positive");
    double s = std::sqrt(det);
    for (auto& x : m_) x /= s;
    normalize_sign();
}

void GroupElement::normalize_sign() {
    for (double x : m_) {
        if (x != 0.0) {
            if (x < 0.0)
                for (auto& y : m_) y = -y;
            return;
        }
    }
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
    return GroupElement(x.m_[0] * y.m_[0] + x.m_[1] * y.m_[2],
                        x.m_[0] * y.m_[1] + x.m_[1] * y.m_[3],
                        x.m_[2] * y.m_[0] + x.m_[3] * y.m_[2],
                        x.m_[2] * y.m_[1] + x.m_[3] * y.m_[3]);
}

std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
    return os << "[" << g.a() << " " << g.b() << "; " << g.c() << " " << g.d() << "]";
}

GroupElement make_a(double t) { return GroupElement(std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2)); }

GroupElement make_k(double theta) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    if (std::abs(c) < 1e-300 && std::abs(s) < 1e-300) return GroupElement();
    return GroupElement(c, s, -s, c);
}

GroupElement make_n(double x) { return GroupElement(1.0, x, 0.0, 1.0); }

double iwasawa_H(const GroupElement& g) {
    // Im(g·i) = 1/(c^2 + d^2) for det 1.
    return -std::log(g.c() * g.c() + g.d() * g.d());
}

double iwasawa_theta(const GroupElement& g) {
    // Bottom row of g equals e^{-t/2} (-sin(theta/2), cos(theta/2)).
    return 2.0 * std::atan2(-g.c(), g.d());
}

double cartan_t(const GroupElement& g) {
    double s = g.a() * g.a() + g.b() * g.b() + g.c() * g.c() + g.d() * g.d();
    if (s < 2.0) s = 2.0;  // roundoff guard; Frobenius norm of SL2 is >= 2
    return std::acosh(0.5 * s);
}

double dist(const GroupElement& g, const GroupElement& h) {
    double dm = 0.0, dp = 0.0;
    const double gm[4] = {g.a(), g.b(), g.c(), g.d()};
    const double hm[4] = {h.a(), h.b(), h.c(), h.d()};
    for (int i = 0; i < 4; ++i) {
        double u = gm[i] - hm[i], v = gm[i] + hm[i];
        dm += u * u;
        dp += v * v;
    }
    return std::sqrt(std::min(dm, dp));
}

GroupElement alpha_map(const GroupElement& g, const GroupElement& k) {
    return make_k(iwasawa_theta(k * g));
}

double boundary_action(const GroupElement& g, double x) {
    if (std::isinf(x)) {
        if (g.c() == 0.0) return HUGE_VAL;
        return g.a() / g.c();
    }
    double den = g.c() * x + g.d();
    if (den == 0.0) return HUGE_VAL;
    return (g.a() * x + g.b()) / den;
}

GeodesicDescriptor geodesic_of(const GroupElement& g) {
    GeodesicDescriptor out;
    double p = boundary_action(g, 0.0);
    double q = boundary_action(g, HUGE_VAL);
    if (std::isinf(p) || std::isinf(q)) {
        out.kind = GeodesicDescriptor::Kind::vertical;
        out.e1 = std::isinf(p) ? q : p;
        out.e2 = HUGE_VAL;
        return out;
    }
    out.kind = GeodesicDescriptor::Kind::half_circle;
    out.e1 = std::min(p, q);
    out.e2 = std::max(p, q);
    out.center = 0.5 * (out.e1 + out.e2);
    out.radius = 0.5 * (out.e2 - out.e1);
    // Top of the half-circle: maximize Im(g·a(s)·i); closed form s = log|d/c|.
    out.top_param = std::log(std::abs(g.d() / g.c()));
    return out;
}

GroupElement frame_of(const GeodesicDescriptor& L) {
    if (L.kind == GeodesicDescriptor::Kind::vertical) return make_n(L.e1);
    // Map 0 -> e1, inf -> e2 (orientation is irrelevant for the normalizer).
    double p = L.e1, q = L.e2;
    return GroupElement(q, p, 1.0, 1.0);
}

double dist_to_normalizer(const GroupElement& g, const GeodesicDescriptor& L) {
    GroupElement f = frame_of(L);
    GroupElement finv = f.inverse();
    // Weyl element: a(t) w spans the second component of the normalizer of A.
    GroupElement w(0.0, -1.0, 1.0, 0.0);
    double bracket = 2.0 * cartan_t(g) + 10.0;
    double best = HUGE_VAL;
    for (int comp = 0; comp < 2; ++comp) {
        auto fc = [&](double t) {
            GroupElement el = comp == 0 ? make_a(t) : make_a(t) * w;
            return dist(g, f * el * finv);
        };
        // Coarse scan guards against multiple local minima, then golden refine.
        const int nscan = 400;
        double tbest = 0.0, fbest = HUGE_VAL;
        for (int i = 0; i <= nscan; ++i) {
            double t = -bracket + 2.0 * bracket * i / nscan;
            double v = fc(t);
            if (v < fbest) {
                fbest = v;
                tbest = t;
            }
        }
        double h = 2.0 * bracket / nscan;
        double t0 = golden_minimize(fc, tbest - h, tbest + h, 1e-12);
        best = std::min(best, fc(t0));
    }
    return best;
}

}  // namespace geoamp::psl2

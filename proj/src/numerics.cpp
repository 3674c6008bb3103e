#include "geoamp/numerics.hpp"

#include <algorithm>
#include <cstdlib>

namespace geoamp {

GaussLegendre::GaussLegendre(int n) {
    x.resize(n);
    w.resize(n);
    // Newton iteration on Legendre polynomials, symmetric nodes.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

CompositeRule::CompositeRule(double a, double b, int panels, const GaussLegendre& gl) {
    if (panels < 1) panels = 1;
    x.reserve(std::size_t(panels) * gl.x.size());
    w.reserve(std::size_t(panels) * gl.x.size());
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        for (std::size_t j = 0; j < gl.x.size(); ++j) {
            x.push_back(lo + 0.5 * h * (gl.x[j] + 1.0));
            w.push_back(0.5 * h * gl.w[j]);
        }
    }
}

UniformSpline::UniformSpline(double x0, double dx, std::vector<double> y)
    : x0_(x0), dx_(dx), n_(y.size()), y_(std::move(y)) {
    if (n_ < 3) throw std::invalid_argument("UniformSpline: need at least 3 points");
    // Solve tridiagonal system for natural spline second derivatives.
    std::size_t n = n_;
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0), v(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double sig = 0.5;
        double p = sig * m_[i - 1] + 2.0;
        m_[i] = (sig - 1.0) / p;
        v[i] = (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) * 6.0 / (dx_ * dx_);
        v[i] = (v[i] / 2.0 - sig * v[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) m_[k] = m_[k] * m_[k + 1] + v[k];
    m_[0] = m_[n - 1] = 0.0;
}

void UniformSpline::locate(double x, std::size_t& i, double& t) const {
    double s = (x - x0_) / dx_;
    if (s <= 0.0) {
        i = 0;
        t = 0.0;
        return;
    }
    if (s >= double(n_ - 1)) {
        i = n_ - 2;
        t = 1.0;
        return;
    }
    i = std::size_t(s);
    if (i > n_ - 2) i = n_ - 2;
    t = s - double(i);
}

double UniformSpline::operator()(double x) const {
    std::size_t i;
    double t;
    locate(x, i, t);
    double a = 1.0 - t;
    double h2 = dx_ * dx_ / 6.0;
    return a * y_[i] + t * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (t * t * t - t) * m_[i + 1]) * h2;
}

double UniformSpline::deriv(double x) const {
    std::size_t i;
    double t;
    locate(x, i, t);
    double a = 1.0 - t;
    return (y_[i + 1] - y_[i]) / dx_ +
           dx_ / 6.0 * ((3.0 * t * t - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]);
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double brent_root(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("brent_root: no sign change");
    // Plain bisection with secant acceleration; robust and deterministic.
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        double m = 0.5 * (a + b);
        double s = (fb != fa) ? b - fb * (b - a) / (fb - fa) : m;
        double c = (s > a + 0.25 * (b - a) && s < b - 0.25 * (b - a)) ? s : m;
        double fc = f(c);
        if (fc == 0.0) return c;
        if (fa * fc < 0.0) {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
    }
    return 0.5 * (a + b);
}

std::int64_t isqrt64(std::int64_t n) {
    if (n <= 0) return 0;
    auto r = std::int64_t(std::sqrt(double(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_perfect_square(std::int64_t n, std::int64_t* root) {
    if (n < 0) return false;
    std::int64_t r = isqrt64(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace geoamp

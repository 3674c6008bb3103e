#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace geoamp {

// Gauss-Legendre rule on [-1,1], nodes ascending.
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n);
};

// Composite Gauss-Legendre nodes/weights on [a,b] with `panels` equal panels.
struct CompositeRule {
    std::vector<double> x, w;
    CompositeRule(double a, double b, int panels, const GaussLegendre& gl);
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

// Natural cubic spline on a uniform grid; evaluates value and first derivative.
class UniformSpline {
public:
    UniformSpline() = default;
    UniformSpline(double x0, double dx, std::vector<double> y);
    double operator()(double x) const;
    double deriv(double x) const;
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * double(n_ - 1); }
    bool empty() const { return n_ == 0; }

private:
    double x0_ = 0.0, dx_ = 1.0;
    std::size_t n_ = 0;
    std::vector<double> y_, m_;  // values and second derivatives
    void locate(double x, std::size_t& i, double& t) const;
};

// Deterministic pairwise summation (order independent of thread count).
double pairwise_sum(std::span<const double> v);

// Golden-section minimization of a unimodal-ish f on [a,b].
double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-10);

// Brent-style root bracketing refinement; f(a), f(b) must have opposite signs.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-13);

// sinh(x)/x, stable near 0.
inline double sinhc(double x) {
    if (std::abs(x) < 1e-5) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

// Exact integer square root and perfect-square test for 64-bit magnitudes.
std::int64_t isqrt64(std::int64_t n);
bool is_perfect_square(std::int64_t n, std::int64_t* root = nullptr);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace geoamp

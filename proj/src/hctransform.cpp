#include "geoamp/hctransform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoamp/parallel.hpp"

namespace geoamp::hct {

namespace {

const GaussLegendre& gl64() {
    static GaussLegendre g(64);
    return g;
}
const GaussLegendre& gl10() {
    static GaussLegendre g(10);
    return g;
}
const GaussLegendre& gl6() {
    static GaussLegendre g(6);
    return g;
}
const GaussLegendre& gl8() {
    static GaussLegendre g(8);
    return g;
}

// smooth step: 0 for x <= 0, 1 for x >= 1
double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double f0 = std::exp(-1.0 / x);
    double f1 = std::exp(-1.0 / (1.0 - x));
    return f0 / (f0 + f1);
}

}  // namespace

double spherical(cplx r, double t, double rel_tol) {
    if (t == 0.0) return 1.0;
    if (std::abs(r.real()) > 0 && std::abs(r.imag()) > 1e-14)
        throw std::invalid_argument("spherical: r must be real or purely imaginary");
    if (std::abs(r.real()) < 1e-300 && std::abs(r.imag()) > 0.5 + 1e-12)
        throw std::invalid_argument("spherical: imaginary part limited to [-1/2, 1/2]");
    double ct = std::cosh(t), st = std::sinh(t);
    auto eval = [&](std::size_t N) {
        // periodic trapezoid; integrand smooth and 2pi-periodic
        std::vector<double> vals(N);
        for (std::size_t j = 0; j < N; ++j) {
            double phi = 2.0 * M_PI * (double(j) + 0.5) / double(N);
            double A = ct + std::cos(phi) * st;
            double lA = std::log(A);
            if (std::abs(r.imag()) > 0) {
                vals[j] = std::exp((-r.imag() - 0.5) * lA);
            } else {
                vals[j] = std::exp(-0.5 * lA) * std::cos(r.real() * lA);
            }
        }
        return pairwise_sum(vals) / double(N);
    };
    std::size_t N = 64;
    double bandwidth = std::abs(r.real()) * std::abs(st) * std::exp(std::abs(t));
    while (double(N) < 2.0 * bandwidth + 64.0) N *= 2;
    double prev = eval(N);
    for (int it = 0; it < 14; ++it) {
        N *= 2;
        double cur = eval(N);
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-3)) return cur;
        prev = cur;
    }
    throw std::runtime_error("spherical: quadrature did not converge to the target");
}

double SphericalProfile::at(double t) const {
    t = std::abs(t);
    if (t >= Tmax) return 0.0;
    return spline(t);
}

SphericalProfile SphericalProfile::from_function(double Tmax, double step,
                                                 const std::vector<double>& values) {
    SphericalProfile p;
    p.Tmax = Tmax;
    p.step = step;
    p.spline = UniformSpline(0.0, step, values);
    return p;
}

double TransformProfile::value(double r) const {
    r = std::abs(r);
    if (r >= rmax) return 0.0;
    double s = r / step;
    auto i = std::size_t(s);
    if (i + 1 >= hk.size()) return hk.back();
    double x = s - double(i);
    return hk[i] * (1.0 - x) + hk[i + 1] * x;
}

double hc_transform(const SphericalProfile& k, cplx s) {
    double T = k.Tmax;
    // Abel transform on composite GL nodes over [0, T]
    CompositeRule outer(0.0, T, 48, GaussLegendre(16));
    std::size_t n = outer.x.size();
    std::vector<double> F(n);
    const auto& g = gl64();
    for (std::size_t i = 0; i < n; ++i) {
        double u = outer.x[i];
        double vmax = std::sqrt(std::cosh(T) - std::cosh(u));
        double acc = 0.0;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double v = 0.5 * vmax * (g.x[j] + 1.0);
            double tt = std::acosh(std::cosh(u) + v * v);
            acc += 0.5 * vmax * g.w[j] * k.at(tt);
        }
        F[i] = 2.0 * std::sqrt(2.0) * acc;
    }
    cplx total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += outer.w[i] * F[i] * std::cosh(s * outer.x[i]);
    cplx val = 2.0 * total;
    if (std::abs(val.imag()) > 1e-9 * (1.0 + std::abs(val.real())))
        throw std::runtime_error("hc_transform: non-real value on an admissible segment");
    return val.real();
}

double inverse_hc(const TransformProfile& hk, double t) {
    // decay certificate: fit sup hk (1+r)^4 over the outer half of the grid
    std::size_t n = hk.hk.size();
    double C = 0.0;
    for (std::size_t i = n / 2; i < n; ++i) {
        double r = hk.step * double(i);
        C = std::max(C, std::abs(hk.hk[i]) * std::pow(1.0 + r, 4));
    }
    double R = hk.rmax;
    double tail = C / (2.0 * M_PI) * (0.5 / ((1.0 + R) * (1.0 + R)) - 1.0 / (3.0 * std::pow(1.0 + R, 3)));
    if (!(tail < 1e-8))
        throw std::runtime_error("inverse_hc: insufficient decay certificate for 1e-8 truncation");

    t = std::abs(t);
    auto G = [&](double u) {
        // int_0^rmax hk(ir) beta(r) cos(ru) dr, trapezoid on the sample grid
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = hk.step * double(i);
            double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += w * hk.hk[i] * plancherel_beta(r) * std::cos(r * u);
        }
        return acc * hk.step;
    };
    if (t == 0.0) return G(0.0);
    // kc(t) = (sqrt2/pi) int_0^t G(u) (cosh t - cosh u)^{-1/2} du, u = t - w^2
    double wmax = std::sqrt(t);
    int panels = 24;
    const auto& g = gl10();
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = wmax * double(p) / panels, hi = wmax * double(p + 1) / panels;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double w = 0.5 * (hi - lo) * (g.x[j] + 1.0) + lo;
            double u = t - w * w;
            double x = 0.5 * w * w;
            double kern = 2.0 / std::sqrt(2.0 * sinhc(x) * std::sinh(t - x));
            acc += 0.5 * (hi - lo) * g.w[j] * G(u) * kern;
        }
    }
    return acc * std::sqrt(2.0) / M_PI;
}

// ---- BaseBump ----------------------------------------------------------------

BaseBump::BaseBump(const AnalysisConfig& cfg) : t0_(cfg.t0) {
    CompositeRule rule(0.0, t0_, 40, GaussLegendre(24));
    nodes_ = rule.x;
    weights_ = rule.w;

    // F on a fine grid (exact inner quadrature), then on the GL nodes
    const auto& g = gl64();
    auto abel_exact = [&](double u) {
        u = std::abs(u);
        if (u >= t0_) return 0.0;
        double vmax = std::sqrt(std::cosh(t0_) - std::cosh(u));
        double acc = 0.0;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double v = 0.5 * vmax * (g.x[j] + 1.0);
            double tt = std::acosh(std::cosh(u) + v * v);
            acc += 0.5 * vmax * g.w[j] * kc(tt);
        }
        return 2.0 * std::sqrt(2.0) * acc;
    };
    F_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) F_[i] = abel_exact(nodes_[i]);

    double hk0 = hat_axis(0.0);
    hat1_zero_ = hk0 * hk0;

    // delta: largest delta <= 1 with hat k(iy)^2 > hat k1(0)/2 on |y| <= delta
    double ylo = 0.0, yhi = -1.0;
    for (double y = 0.0; y <= 2.0; y += 1e-3) {
        double h = hat_axis(y);
        if (2.0 * h * h <= hat1_zero_) {
            yhi = y;
            break;
        }
        ylo = y;
    }
    if (yhi < 0) {
        delta_ = 1.0;
    } else {
        for (int it = 0; it < 60; ++it) {
            double ym = 0.5 * (ylo + yhi);
            double h = hat_axis(ym);
            (2.0 * h * h > hat1_zero_ ? ylo : yhi) = ym;
        }
        delta_ = std::min(1.0, ylo);
    }

    // F spline, then g1 = F * F (autocorrelation) on a fine uniform grid
    int nf = 2000;
    std::vector<double> fv(nf + 1);
    for (int i = 0; i <= nf; ++i) fv[std::size_t(i)] = abel_exact(t0_ * double(i) / nf);
    UniformSpline fs(0.0, t0_ / nf, fv);
    auto Feval = [&](double u) {
        u = std::abs(u);
        return u >= t0_ ? 0.0 : fs(u);
    };
    int ng = 4000;
    g1_step_ = 2.0 * t0_ / ng;
    std::vector<double> g1v(std::size_t(ng) + 1);
    parallel_for(std::size_t(ng) + 1, [&](std::size_t i) {
        double u = g1_step_ * double(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            double v = nodes_[j];
            acc += weights_[j] * Feval(v) * (Feval(u - v) + Feval(u + v));
        }
        g1v[i] = acc;
    });
    g1_ = UniformSpline(0.0, g1_step_, g1v);
}

double BaseBump::kc(double t) const {
    double x = std::abs(t) / t0_;
    if (x >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double BaseBump::abel(double u) const {
    u = std::abs(u);
    if (u >= t0_) return 0.0;
    const auto& g = gl64();
    double vmax = std::sqrt(std::cosh(t0_) - std::cosh(u));
    double acc = 0.0;
    for (std::size_t j = 0; j < g.x.size(); ++j) {
        double v = 0.5 * vmax * (g.x[j] + 1.0);
        double tt = std::acosh(std::cosh(u) + v * v);
        acc += 0.5 * vmax * g.w[j] * kc(tt);
    }
    return 2.0 * std::sqrt(2.0) * acc;
}

cplx BaseBump::hat(cplx s) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * F_[i] * std::cosh(s * nodes_[i]);
    return 2.0 * acc;
}

double BaseBump::hat_axis(double y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * F_[i] * std::cos(y * nodes_[i]);
    return 2.0 * acc;
}

double BaseBump::q(double x) const {
    double h = hat_axis(delta_ * x);
    return 2.0 * h * h / hat1_zero_;
}

double BaseBump::hat_knu(double nu, double r) const { return q(nu + r) + q(nu - r); }

cplx BaseBump::hat_knu_complex(double nu, cplx s) const {
    cplx i(0.0, 1.0);
    cplx h1 = hat(delta_ * (i * nu + s));
    cplx h2 = hat(delta_ * (i * nu - s));
    return 2.0 * (h1 * h1 + h2 * h2) / hat1_zero_;
}

double BaseBump::g2(double u) const {
    u = std::abs(u) / delta_;
    if (u >= 2.0 * t0_) return 0.0;
    return 2.0 / (delta_ * hat1_zero_) * g1_(u);
}

double BaseBump::g2_deriv(double u) const {
    double sg = u >= 0 ? 1.0 : -1.0;
    u = std::abs(u) / delta_;
    if (u >= 2.0 * t0_) return 0.0;
    return sg * 2.0 / (delta_ * delta_ * hat1_zero_) * g1_.deriv(u);
}

// ---- KnuFamily ----------------------------------------------------------------

KnuFamily::KnuFamily(const AnalysisConfig& cfg) : cfg_(cfg), base_(std::make_shared<BaseBump>(cfg)) {}

const KnuEntry& KnuFamily::entry(double nu) const {
    auto it = cache_.find(nu);
    if (it != cache_.end()) return *it->second;
    auto e = std::make_shared<KnuEntry>();
    e->nu = nu;
    e->support_radius = base_->support_radius();
    double R = e->support_radius;

    // transform profile on [0, nu + rmax_tail]
    TransformProfile& tp = e->transform;
    tp.nu = nu;
    tp.step = cfg_.grid_step;
    tp.rmax = nu + cfg_.rmax_tail;
    std::size_t nr = std::size_t(tp.rmax / tp.step) + 1;
    tp.hk.resize(nr);
    const BaseBump& bb = *base_;
    {
        auto vals = parallel_map(nr, [&](std::size_t i) { return bb.hat_knu(nu, tp.step * double(i)); });
        tp.hk = std::move(vals);
    }
    tp.hk_excep.resize(65);
    double imres = 0.0;
    for (int j = 0; j <= 64; ++j) {
        cplx v = bb.hat_knu_complex(nu, cplx(-double(j) / 128.0, 0.0));
        tp.hk_excep[std::size_t(j)] = v.real();
        imres = std::max(imres, std::abs(v.imag()));
    }
    tp.imag_residue = imres;
    tp.decay_C4 = 0.0;
    tp.decay_C6 = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        double r = tp.step * double(i);
        double w = 1.0 + std::abs(nu - r);
        tp.decay_C4 = std::max(tp.decay_C4, tp.hk[i] * w * w * w * w);
        tp.decay_C6 = std::max(tp.decay_C6, tp.hk[i] * w * w * w * w * w * w);
    }

    // Cartan profile by Abel inversion of F_nu(u) = 2 cos(nu u) g2(u)
    double step = std::min(1e-3, 0.016 / std::max(nu, 1.0));
    auto npts = std::size_t(std::ceil(R / step)) + 1;
    step = R / double(npts - 1);
    auto dF = [&](double u) {
        return 2.0 * (-nu * std::sin(nu * u) * bb.g2(u) + std::cos(nu * u) * bb.g2_deriv(u));
    };
    const auto& g = gl10();
    auto kc_at = [&](double t) {
        if (t >= R) return 0.0;
        double wmax = std::sqrt(R - t);
        int panels = int(std::ceil(nu * (R - t) / 2.5)) + 4;
        double acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            double lo = wmax * double(p) / panels, hi = wmax * double(p + 1) / panels;
            for (std::size_t j = 0; j < g.x.size(); ++j) {
                double w = 0.5 * (hi - lo) * (g.x[j] + 1.0) + lo;
                double u = t + w * w;
                double x = 0.5 * w * w;
                acc += 0.5 * (hi - lo) * g.w[j] * dF(u) / std::sqrt(sinhc(x) * std::sinh(t + x));
            }
        }
        return -acc * std::sqrt(2.0) / M_PI;
    };
    auto vals = parallel_map(npts, [&](std::size_t i) { return kc_at(step * double(i)); });
    e->profile = SphericalProfile::from_function(R, step, vals);
    e->k_at_e = vals[0];

    double vmaxabs = 0.0;
    for (double v : vals) vmaxabs = std::max(vmaxabs, std::abs(v));
    std::size_t last = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (std::abs(vals[i]) > 1e-8 * vmaxabs) last = i;
    e->empirical_radius = step * double(last);

    // geodesic mass: trapezoid on the profile grid (endpoint derivatives vanish)
    {
        std::vector<double> terms(npts);
        for (std::size_t i = 0; i < npts; ++i)
            terms[i] = ((i == 0 || i + 1 == npts) ? 0.5 : 1.0) * vals[i];
        e->geodesic_mass = 2.0 * step * pairwise_sum(terms);
    }

    cache_[nu] = e;
    return *e;
}

KnuCertificate KnuFamily::certify(double nu) const {
    const KnuEntry& e = entry(nu);
    const BaseBump& bb = *base_;
    KnuCertificate c;
    c.min_on_band = HUGE_VAL;
    for (int i = -200; i <= 200; ++i) {
        double r = nu + double(i) / 200.0;
        if (r < 0) continue;
        c.min_on_band = std::min(c.min_on_band, bb.hat_knu(nu, r));
    }
    c.min_on_grid = HUGE_VAL;
    for (double v : e.transform.hk) c.min_on_grid = std::min(c.min_on_grid, v);
    for (double v : e.transform.hk_excep) c.min_on_grid = std::min(c.min_on_grid, v);
    c.imag_residue = e.transform.imag_residue;
    c.decay_C4 = e.transform.decay_C4;
    c.support_radius = e.support_radius;
    c.empirical_radius = e.empirical_radius;
    c.k_e_over_nu = e.k_at_e / std::max(nu, 1e-9);
    if (c.min_on_band < 1.0 - 1e-6)
        throw std::runtime_error("knu certification: lower bound 1 on the band |r-nu|<=1 violated");
    if (c.min_on_grid < -1e-9)
        throw std::runtime_error("knu certification: nonnegativity on the admissible grid violated");
    if (c.imag_residue > 1e-9)
        throw std::runtime_error("knu certification: transform not real on admissible segments");
    c.pass = true;
    return c;
}

double geodesic_mass(const KnuFamily& fam, double nu) {
    const KnuEntry& e = fam.entry(nu);
    // node-halving audit against the full-grid trapezoid value
    const auto& sp = e.profile;
    std::size_t n = std::size_t(std::llround(sp.Tmax / sp.step)) + 1;
    std::vector<double> terms;
    for (std::size_t i = 0; i < n; i += 2) {
        double w = (i == 0 || i + 2 >= n) ? 0.5 : 1.0;
        terms.push_back(w * sp.at(sp.step * double(i)));
    }
    double coarse = 2.0 * (2.0 * sp.step) * pairwise_sum(terms);
    double full = e.geodesic_mass;
    if (std::abs(coarse - full) > 1e-6 * std::max(1.0, std::abs(full)))
        throw std::runtime_error("geodesic_mass: quadrature not converged");
    return full;
}

// coarse/full trapezoid difference, exposed through geodesic_mass's audit
double geodesic_mass_halving_delta(const KnuFamily& fam, double nu) {
    const KnuEntry& e = fam.entry(nu);
    const auto& sp = e.profile;
    std::size_t n = std::size_t(std::llround(sp.Tmax / sp.step)) + 1;
    std::vector<double> terms;
    for (std::size_t i = 0; i < n; i += 2) {
        double w = (i == 0 || i + 2 >= n) ? 0.5 : 1.0;
        terms.push_back(w * sp.at(sp.step * double(i)));
    }
    double coarse = 2.0 * (2.0 * sp.step) * pairwise_sum(terms);
    return std::abs(coarse - e.geodesic_mass);
}

double plateau_cutoff(double t, double R) {
    double a = std::abs(t);
    if (a <= R + 1.0) return 1.0;
    if (a >= R + 2.0) return 0.0;
    return 1.0 - smooth_step(a - (R + 1.0));
}

namespace {

// Legendre P_{-1/2+ir}(cosh t) by the singularity-removing substitution
double mehler_P(double r, double t) {
    if (t <= 0.0) return 1.0;
    double wmax = std::sqrt(t);
    int panels = int(std::ceil(r * t / 2.5)) + 4;
    const auto& g = gl10();
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = wmax * double(p) / panels, hi = wmax * double(p + 1) / panels;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double w = 0.5 * (hi - lo) * (g.x[j] + 1.0) + lo;
            double x = 0.5 * w * w;
            acc += 0.5 * (hi - lo) * g.w[j] * std::cos(r * (t - w * w)) /
                   std::sqrt(sinhc(x) * std::sinh(t - x));
        }
    }
    return acc * 2.0 * std::sqrt(2.0) / M_PI;
}

}  // namespace

double model_integral(const KnuFamily& fam, double r) {
    if (r <= 0) throw std::invalid_argument("model_integral: r > 0 required");
    double R = fam.base().support_radius();
    double T = R + 2.0;
    int panels = int(std::ceil(r * T / 2.5)) + 8;
    const auto& g = gl10();
    std::vector<double> xs, ws;
    for (int p = 0; p < panels; ++p) {
        double lo = T * double(p) / panels, hi = T * double(p + 1) / panels;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            xs.push_back(0.5 * (hi - lo) * (g.x[j] + 1.0) + lo);
            ws.push_back(0.5 * (hi - lo) * g.w[j]);
        }
    }
    auto terms = parallel_map(xs.size(), [&](std::size_t i) {
        double t = xs[i];
        return ws[i] * plateau_cutoff(t, R) * mehler_P(r, t);
    });
    // uniform circle measure of mass 2pi, both half-lines
    return 4.0 * M_PI * pairwise_sum(terms);
}

// ---- CutoffB -------------------------------------------------------------------

CutoffB::CutoffB(double period, double width) : period_(period), width_(width) {
    if (period <= 0 || width <= 0 || width > period)
        throw std::invalid_argument("CutoffB: need 0 < width <= period");
}

double CutoffB::operator()(double t) const {
    double s1 = smooth_step((t + period_ / 2.0) / width_ + 0.5);
    double s2 = smooth_step((t - period_ / 2.0) / width_ + 0.5);
    return s1 - s2;
}

double CutoffB::partition_residual(int grid) const {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        double t = period_ * double(i) / grid;
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) s += (*this)(t + period_ * k);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

// ---- orbital integrals ----------------------------------------------------------

double orbital_support_bound(const KnuFamily& fam, const CutoffB& b) {
    return 2.0 * b.half_support() + fam.base().support_radius();
}

double orbital_integral(const KnuFamily& fam, double nu, const psl2::GroupElement& g,
                        const CutoffB& b) {
    if (psl2::cartan_t(g) > orbital_support_bound(fam, b)) return 0.0;
    const KnuEntry& e = fam.entry(nu);
    const auto& prof = e.profile;
    double hw = b.half_support();
    int panels = int(std::ceil(nu * 2.0 * hw / 2.5)) + 4;
    const auto& rule = gl6();
    std::vector<double> xs, ws;
    xs.reserve(std::size_t(panels) * rule.x.size());
    for (int p = 0; p < panels; ++p) {
        double lo = -hw + 2.0 * hw * double(p) / panels;
        double hi = -hw + 2.0 * hw * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            xs.push_back(0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo);
            ws.push_back(0.5 * (hi - lo) * rule.w[j]);
        }
    }
    std::size_t nn = xs.size();
    double A = g.a(), B = g.b(), C = g.c(), D = g.d();
    std::vector<double> rows(nn * nn);
    parallel_for(nn, [&](std::size_t i) {
        double s = xs[i];
        double bs = b(s) * ws[i];
        double es = std::exp(s), ems = 1.0 / es;
        for (std::size_t j = 0; j < nn; ++j) {
            if (bs == 0.0) {
                rows[i * nn + j] = 0.0;
                continue;
            }
            double t = xs[j];
            double et = std::exp(t), emt = 1.0 / et;
            double fro2 = A * A * et * ems + B * B * emt * ems + C * C * et * es + D * D * es * emt;
            double tau = std::acosh(std::max(1.0, 0.5 * fro2));
            double kv = prof.at(tau);
            rows[i * nn + j] = (kv == 0.0) ? 0.0 : bs * ws[j] * b(t) * kv;
        }
    });
    return pairwise_sum(rows);
}

// ---- stationary phase layer ------------------------------------------------------

namespace {

// bottom row of k(theta) * g
void bottom_row(double theta, const psl2::GroupElement& g, double& u, double& v) {
    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    u = -s * g.a() + c * g.c();
    v = -s * g.b() + c * g.d();
}

double H1(double s, double theta) {
    double sh = std::sin(theta / 2.0), ch = std::cos(theta / 2.0);
    return -std::log(sh * sh * std::exp(s) + ch * ch * std::exp(-s));
}

double H2(double t, double theta, const psl2::GroupElement& g) {
    double u, v;
    bottom_row(theta, g, u, v);
    return -std::log(u * u * std::exp(t) + v * v * std::exp(-t));
}

double bprime(double s, double theta) {
    double c = std::cos(theta / 2.0), sn = std::sin(theta / 2.0);
    double e = std::exp(2.0 * s);
    return std::exp(s) / (c * c + e * sn * sn);
}

}  // namespace

double phase_phi(double s, double t, double theta, const psl2::GroupElement& g) {
    return H2(t, theta, g) - H1(s, theta);
}

double xi1(double theta) {
    double sh = std::abs(std::sin(theta / 2.0)), ch = std::abs(std::cos(theta / 2.0));
    return std::log(ch / sh);
}

double xi2(double theta, const psl2::GroupElement& g) {
    double u, v;
    bottom_row(theta, g, u, v);
    return std::log(std::abs(v / u));
}

bool theta_singular(double theta, const psl2::GroupElement& g, double tol) {
    double u, v;
    bottom_row(theta, g, u, v);
    if (std::abs(std::sin(theta)) < tol) return true;
    return std::abs(u * v) < tol * (u * u + v * v);
}

double psi_value(double theta, const psl2::GroupElement& g) {
    double u, v;
    bottom_row(theta, g, u, v);
    return std::log(std::abs(std::sin(theta)) / (2.0 * std::abs(u * v)));
}

double c1_amplitude(double theta, const psl2::GroupElement& g, const CutoffB& b) {
    if (theta_singular(theta, g, 1e-12)) return 0.0;
    double x1 = xi1(theta), x2 = xi2(theta, g);
    double bb = b(x1) * b(x2);
    if (bb == 0.0) return 0.0;
    return bprime(x1, theta) * bb * std::exp(0.5 * psi_value(theta, g));
}

namespace {

// 1-D oscillatory factors of the separated J integrand
cplx inner_t(double r, double theta, const psl2::GroupElement& g, const CutoffB& b) {
    double hw = b.half_support();
    int panels = int(std::ceil(r * 2.0 * hw / 2.5)) + 4;
    const auto& rule = gl8();
    cplx acc = 0.0;
    cplx half_ir(0.5, r);
    for (int p = 0; p < panels; ++p) {
        double lo = -hw + 2.0 * hw * double(p) / panels;
        double hi = -hw + 2.0 * hw * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            double t = 0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo;
            double bt = b(t);
            if (bt == 0.0) continue;
            acc += 0.5 * (hi - lo) * rule.w[j] * bt * std::exp(half_ir * H2(t, theta, g));
        }
    }
    return acc;
}

cplx inner_s(double r, double theta, const CutoffB& b) {
    double hw = b.half_support();
    int panels = int(std::ceil(r * 2.0 * hw / 2.5)) + 4;
    const auto& rule = gl8();
    cplx acc = 0.0;
    cplx mhalf_ir(-0.5, -r);
    for (int p = 0; p < panels; ++p) {
        double lo = -hw + 2.0 * hw * double(p) / panels;
        double hi = -hw + 2.0 * hw * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            double s = 0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo;
            double bs = b(s);
            if (bs == 0.0) continue;
            acc += 0.5 * (hi - lo) * rule.w[j] * bs * bprime(s, theta) *
                   std::exp(mhalf_ir * H1(s, theta));
        }
    }
    return acc;
}

}  // namespace

double oscillatory_J(double r, const psl2::GroupElement& g, const CutoffB& b) {
    int panels = std::max(64, int(std::ceil(3.0 * r)));
    const auto& rule = gl6();
    std::vector<double> ths, ws;
    for (int p = 0; p < panels; ++p) {
        double lo = 2.0 * M_PI * double(p) / panels;
        double hi = 2.0 * M_PI * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            ths.push_back(0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo);
            ws.push_back(0.5 * (hi - lo) * rule.w[j]);
        }
    }
    auto terms = parallel_map(ths.size(), [&](std::size_t i) {
        cplx val = inner_t(r, ths[i], g, b) * inner_s(r, ths[i], b);
        return ws[i] * val.real();
    });
    return pairwise_sum(terms) / (2.0 * M_PI);
}

double oscillatory_J_spherical(double r, const psl2::GroupElement& g, const CutoffB& b) {
    double hw = b.half_support();
    int panels = int(std::ceil(r * 2.0 * hw / 2.5)) + 6;
    const auto& rule = gl6();
    std::vector<double> xs, ws;
    for (int p = 0; p < panels; ++p) {
        double lo = -hw + 2.0 * hw * double(p) / panels;
        double hi = -hw + 2.0 * hw * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            xs.push_back(0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo);
            ws.push_back(0.5 * (hi - lo) * rule.w[j]);
        }
    }
    std::size_t nn = xs.size();
    std::vector<double> rows(nn);
    parallel_for(nn, [&](std::size_t i) {
        double s = xs[i];
        double bs = b(s);
        double acc = 0.0;
        if (bs != 0.0) {
            psl2::GroupElement left = psl2::make_a(-s) * g;
            for (std::size_t j = 0; j < nn; ++j) {
                double t = xs[j];
                double bt = b(t);
                if (bt == 0.0) continue;
                double tau = psl2::cartan_t(left * psl2::make_a(t));
                acc += ws[j] * bt * mehler_P(r, tau);
            }
        }
        rows[i] = ws[i] * bs * acc;
    });
    return pairwise_sum(rows);
}

double theta_integral(double r, const psl2::GroupElement& g, const CutoffB& b) {
    int panels = std::max(64, int(std::ceil(3.0 * r)));
    const auto& rule = gl6();
    std::vector<double> terms;
    terms.reserve(std::size_t(panels) * rule.x.size());
    for (int p = 0; p < panels; ++p) {
        double lo = 2.0 * M_PI * double(p) / panels;
        double hi = 2.0 * M_PI * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            double th = 0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo;
            double c1 = c1_amplitude(th, g, b);
            double val = 0.0;
            if (c1 != 0.0) val = c1 * std::cos(r * psi_value(th, g));
            terms.push_back(0.5 * (hi - lo) * rule.w[j] * val);
        }
    }
    return pairwise_sum(terms);
}

double J_reduced(double r, const psl2::GroupElement& g, const CutoffB& b) {
    return theta_integral(r, g, b) / r;
}

std::vector<double> critical_thetas(const psl2::GroupElement& g, const CutoffB& b) {
    (void)b;
    const int N = 8192;
    std::vector<double> roots;
    auto dpsi = [&](double th) {
        double h = 1e-6;
        return (psi_value(th + h, g) - psi_value(th - h, g)) / (2.0 * h);
    };
    double prev_th = 0.0, prev = 0.0;
    bool have_prev = false;
    for (int i = 1; i < N; ++i) {
        double th = 2.0 * M_PI * double(i) / N;
        if (theta_singular(th, g, 1e-7)) {
            have_prev = false;
            continue;
        }
        double d = dpsi(th);
        if (have_prev && prev * d < 0.0) {
            double root = brent_root([&](double x) { return dpsi(x); }, prev_th, th, 1e-12);
            roots.push_back(root);
        }
        prev_th = th;
        prev = d;
        have_prev = true;
    }
    return roots;
}

// ---- class integrals -------------------------------------------------------------

double hyperbolic_integral_direct(const KnuFamily& fam, double nu, double logP) {
    const BaseBump& bb = fam.base();
    double rmax = nu + fam.config().rmax_tail;
    double om = std::max(std::abs(logP), 0.1);
    int panels = int(std::ceil(rmax * om / 2.5)) + 8;
    const auto& rule = gl10();
    std::vector<double> terms;
    terms.reserve(std::size_t(panels) * rule.x.size());
    for (int p = 0; p < panels; ++p) {
        double lo = rmax * double(p) / panels, hi = rmax * double(p + 1) / panels;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            double r = 0.5 * (hi - lo) * (rule.x[j] + 1.0) + lo;
            terms.push_back(0.5 * (hi - lo) * rule.w[j] * bb.hat_knu(nu, r) *
                            std::cos(r * logP));
        }
    }
    return pairwise_sum(terms) / M_PI;
}

double hyperbolic_integral_filon(const TransformProfile& hk, double logP) {
    // composite Filon-Simpson on the uniform sample grid
    std::size_t n = hk.hk.size();
    if (n % 2 == 0) --n;  // need an even number of intervals
    double h = hk.step;
    double th = std::abs(logP) * h;
    double alpha, beta_c, gamma;
    if (th > 0.05) {
        double s = std::sin(th), c = std::cos(th);
        alpha = (th * th + th * s * c - 2.0 * s * s) / (th * th * th);
        beta_c = 2.0 * (th * (1.0 + c * c) - 2.0 * s * c) / (th * th * th);
        gamma = 4.0 * (s - th * c) / (th * th * th);
    } else {
        double t2 = th * th;
        alpha = th * t2 * (2.0 / 45.0 - 2.0 * t2 / 315.0);
        beta_c = 2.0 / 3.0 + 2.0 * t2 / 15.0 - 4.0 * t2 * t2 / 105.0;
        gamma = 4.0 / 3.0 - 2.0 * t2 / 15.0 + t2 * t2 / 210.0;
    }
    double om = std::abs(logP);
    double ceven = 0.0, codd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = h * double(i);
        double term = hk.hk[i] * std::cos(om * r);
        if (i % 2 == 0)
            ceven += term;
        else
            codd += term;
    }
    double r0 = 0.0, r1 = h * double(n - 1);
    ceven -= 0.5 * (hk.hk[0] * std::cos(om * r0) + hk.hk[n - 1] * std::cos(om * r1));
    double val = h * (alpha * (hk.hk[n - 1] * std::sin(om * r1) - hk.hk[0] * std::sin(om * r0)) +
                      beta_c * ceven + gamma * codd);
    return val / M_PI;
}

double elliptic_integral(const TransformProfile& hk, double theta) {
    std::size_t n = hk.hk.size();
    double h = hk.step;
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = h * double(i);
        // cosh((pi-2theta) r)/cosh(pi r), computed via exponential ratios
        double a = (M_PI - 2.0 * theta) * r;
        double w = std::exp(a - M_PI * r) * (1.0 + std::exp(-2.0 * a)) /
                   (1.0 + std::exp(-2.0 * M_PI * r));
        terms[i] = ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * hk.hk[i] * w;
    }
    return M_PI * h * pairwise_sum(terms);
}

}  // namespace geoamp::hct

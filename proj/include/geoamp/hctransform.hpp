#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "geoamp/numerics.hpp"
#include "geoamp/psl2.hpp"

namespace geoamp::hct {

using cplx = std::complex<double>;

struct AnalysisConfig {
    double t0 = 0.5;           // base bump support radius in the Cartan coordinate
    double rmax_tail = 160.0;  // transform grid reaches nu + rmax_tail
    double grid_step = 0.02;   // r-grid step
    int osc_panels = 10;       // GL nodes per oscillation panel
};

// Plancherel density (1/2pi) r tanh(pi r).
inline double plancherel_beta(double r) { return r * std::tanh(M_PI * r) / (2.0 * M_PI); }

// Spherical function phi_{ir}(a(t)) through the circle integral against the
// uniform probability measure; r real or purely imaginary in [-i/2, i/2].
double spherical(cplx r, double t, double rel_tol = 1e-9);

// Bi-K-invariant function sampled on Cartan coordinates [0, Tmax]; vanishes
// beyond Tmax; cubic interpolation on a uniform grid.
struct SphericalProfile {
    double Tmax = 0.0;
    double step = 0.0;
    UniformSpline spline;
    double at(double t) const;
    static SphericalProfile from_function(double Tmax, double step,
                                          const std::vector<double>& values);
};

// Samples of hat k(ir) on r in [0, rmax] plus the segment r in i[0, 1/2],
// with a fitted decay-envelope certificate.
struct TransformProfile {
    double nu = 0.0;
    double rmax = 0.0;
    double step = 0.0;
    std::vector<double> hk;          // r-grid values
    std::vector<double> hk_excep;    // r = i x, x in [0, 1/2], 65 samples
    double imag_residue = 0.0;       // max |Im| over both segments
    double decay_C4 = 0.0;           // sup hk (1 + |nu - r|)^4
    double decay_C6 = 0.0;           // sup hk (1 + |nu - r|)^6
    double value(double r) const;    // interpolated
};

// Harish-Chandra transform of a sampled profile, via the Abel layer.
double hc_transform(const SphericalProfile& k, cplx s);

// Truncated Plancherel inversion of a sampled transform; certified
// truncation error below 1e-8 (throws if the decay certificate cannot
// guarantee it).
double inverse_hc(const TransformProfile& hk, double t);

// The fixed base bump k and its exact transform machinery.
class BaseBump {
public:
    explicit BaseBump(const AnalysisConfig& cfg);

    double kc(double t) const;      // Cartan profile exp(-1/(1-(t/t0)^2))
    double abel(double u) const;    // Abel transform F(u)
    cplx hat(cplx s) const;         // hat k(s) = int F(u) e^{su} du
    double hat_axis(double y) const;  // hat k(iy)

    double delta() const { return delta_; }
    double hat1_zero() const { return hat1_zero_; }
    double support_radius() const { return 2.0 * t0_ * delta_; }

    // hat k_nu(ir) = q(nu+r) + q(nu-r), q(x) = 2 hat k(i delta x)^2 / hat k1(0)
    double q(double x) const;
    double hat_knu(double nu, double r) const;
    cplx hat_knu_complex(double nu, cplx s) const;  // argument s of hat k_nu

    // Fourier-side function of k_(2): g2 = inverse Fourier of hat k_(2)(ir),
    // supported on [-R, R]; g_nu(u) = 2 cos(nu u) g2(u).
    double g2(double u) const;
    double g2_deriv(double u) const;

    double t0() const { return t0_; }

private:
    double t0_;
    std::vector<double> nodes_, weights_;  // fixed composite GL rule on [0, t0]
    std::vector<double> F_;                // Abel values on the nodes
    double delta_ = 1.0;
    double hat1_zero_ = 0.0;
    UniformSpline g1_;                     // autocorrelation F*F on [0, 2 t0]
    double g1_step_ = 0.0;
};

struct KnuEntry {
    double nu = 0.0;
    TransformProfile transform;
    SphericalProfile profile;      // Cartan profile of k_nu, clamped beyond R
    double support_radius = 0.0;   // Paley-Wiener radius 2 t0 delta
    double empirical_radius = 0.0; // where |k_nu| falls below 1e-8 * max
    double k_at_e = 0.0;
    double geodesic_mass = 0.0;    // int_R k_nu(a(t)) dt
};

struct KnuCertificate {
    double min_on_band = 0.0;      // min hat k_nu(ir) over |r - nu| <= 1
    double min_on_grid = 0.0;      // min over both admissible segments
    double imag_residue = 0.0;
    double decay_C4 = 0.0;
    double support_radius = 0.0;
    double empirical_radius = 0.0;
    double k_e_over_nu = 0.0;
    bool pass = false;
};

class KnuFamily {
public:
    explicit KnuFamily(const AnalysisConfig& cfg = {});
    const BaseBump& base() const { return *base_; }
    const KnuEntry& entry(double nu) const;  // built and cached on first use
    KnuCertificate certify(double nu) const; // throws on violated property
    const AnalysisConfig& config() const { return cfg_; }

private:
    AnalysisConfig cfg_;
    std::shared_ptr<BaseBump> base_;
    mutable std::map<double, std::shared_ptr<KnuEntry>> cache_;
};

// int_R k_nu(a(t)) dt with a node-doubling convergence check.
double geodesic_mass(const KnuFamily& fam, double nu);
// |coarse - fine| trapezoid difference behind that check.
double geodesic_mass_halving_delta(const KnuFamily& fam, double nu);

// Smooth cutoff c: plateau 1 on [-(R+1), R+1], decaying to 0 over one unit.
double plateau_cutoff(double t, double R);

// Model integral L(r) = int c(t) Phi_ir(a(t)) dt with the mass-2pi circle
// measure (Phi = 2pi phi); the cutoff plateau is tied to the family support.
double model_integral(const KnuFamily& fam, double r);

// Nonnegative bump with unit partition sums over translates by period.
class CutoffB {
public:
    CutoffB() = default;
    CutoffB(double period, double width = 1.0);
    double operator()(double t) const;
    double period() const { return period_; }
    double half_support() const { return period_ / 2.0 + width_ / 2.0; }
    double partition_residual(int grid = 2048) const;

private:
    double period_ = 2.0, width_ = 1.0;
};

// Orbital integral I(nu, g) = int b(s) b(t) k_nu(a(-s) g a(t)) ds dt.
double orbital_integral(const KnuFamily& fam, double nu, const psl2::GroupElement& g,
                        const CutoffB& b);

// Support bound: I(nu, g) = 0 whenever cartan_t(g) exceeds this.
double orbital_support_bound(const KnuFamily& fam, const CutoffB& b);

// ---- stationary phase layer -------------------------------------------------

// phase phi(s,t,theta,g) = H(k(theta) g a(t)) - H(k(theta) a(s))
double phase_phi(double s, double t, double theta, const psl2::GroupElement& g);

// critical coordinates for fixed theta (half-circle case)
double xi1(double theta);                                  // of H(k(theta)a(s))
double xi2(double theta, const psl2::GroupElement& g);     // of H(k(theta)g a(t))
bool theta_singular(double theta, const psl2::GroupElement& g, double tol = 1e-9);

// stationary value psi(theta, g) and reduced amplitude c1(theta, g)
double psi_value(double theta, const psl2::GroupElement& g);
double c1_amplitude(double theta, const psl2::GroupElement& g, const CutoffB& b);

// J(r,g): theta-integral of the separated (s,t) oscillatory factors.
double oscillatory_J(double r, const psl2::GroupElement& g, const CutoffB& b);

// J through the spherical-function route (slow; cross-check for moderate r).
double oscillatory_J_spherical(double r, const psl2::GroupElement& g, const CutoffB& b);

// first-order stationary-phase reduction r^{-1} int c1 e^{ir psi} dtheta
double J_reduced(double r, const psl2::GroupElement& g, const CutoffB& b);
// the theta-integral alone: int c1 e^{ir psi} dtheta (for Van der Corput checks)
double theta_integral(double r, const psl2::GroupElement& g, const CutoffB& b);

// critical points of psi(-, g) for g with both boundary endpoints of gAi on
// the same side of 0; root-finding on dpsi/dtheta.
std::vector<double> critical_thetas(const psl2::GroupElement& g, const CutoffB& b);

// hyperbolic-class spectral integral (1/2pi) int hat k_nu(ir) e^{ir log P} dr:
// direct oscillation-matched quadrature and a Filon-type scheme on the grid.
double hyperbolic_integral_direct(const KnuFamily& fam, double nu, double logP);
double hyperbolic_integral_filon(const TransformProfile& hk, double logP);

// elliptic-class integral (pi/2) int hat k_nu(ir) cosh((pi-2 theta) r)/cosh(pi r) dr
double elliptic_integral(const TransformProfile& hk, double theta);

}  // namespace geoamp::hct

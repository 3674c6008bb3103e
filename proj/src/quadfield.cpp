#include "geoamp/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "geoamp/numerics.hpp"
#include "geoamp/parallel.hpp"

namespace geoamp::quadfield {

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    if (n > 1000000000000LL) throw std::runtime_error("factorize: above 10^12 limit");
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p : {2LL, 3LL, 5LL}) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    std::int64_t p = 7;
    int wi = 0;
    while (p * p <= n) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        p += wheel[wi];
        wi = (wi + 1) & 7;
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int e2 = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++e2;
    }
    if (e2) {
        if (a % 2 == 0) return 0;
        std::int64_t am8 = ((a % 8) + 8) % 8;
        if (e2 % 2 == 1 && (am8 == 3 || am8 == 5)) sign = -sign;
    }
    a %= n;
    if (a < 0) a += n;
    // Jacobi symbol (a|n) for odd n > 0.
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

double log_bigint(const bigint& x) {
    if (x <= 0) throw std::invalid_argument("log_bigint: need positive");
    std::size_t bits = boost::multiprecision::msb(x);
    if (bits <= 52) return std::log(double(x.convert_to<std::int64_t>()));
    bigint top = x >> (bits - 52);
    return std::log(top.convert_to<double>()) + double(bits - 52) * std::log(2.0);
}

QuadraticField::QuadraticField(std::int64_t D) : D_(D) {
    if (D <= 0) throw std::invalid_argument("QuadraticField: D must be positive");
    if (is_perfect_square(D)) throw std::invalid_argument("QuadraticField: D is a perfect square");
    core_ = 1;
    for (auto [p, e] : factorize(D)) {
        if (e % 2) core_ *= p;
    }
    disc_ = (core_ % 4 == 1) ? core_ : 4 * core_;
}

Splitting QuadraticField::splitting(std::int64_t p) const {
    if (disc_ % p == 0) return Splitting::ramified;
    int k = kronecker(disc_, p);
    return k == 1 ? Splitting::split : Splitting::inert;
}

OrderData make_order(const QuadraticField& K, std::int64_t conductor) {
    if (conductor < 1) throw std::invalid_argument("make_order: conductor must be >= 1");
    return OrderData{conductor, conductor * conductor * K.discriminant()};
}

namespace {

// Continued fraction of sqrt(D): minimal (x, y) with x^2 - D y^2 = +-1.
void pell_cf(std::int64_t D, bigint& x, bigint& y, int& norm) {
    std::int64_t a0 = isqrt64(D);
    std::int64_t P = 0, Q = 1, a = a0;
    bigint pm1 = 1, p0 = a0, qm1 = 0, q0 = 1;
    for (int k = 1; k < 100000; ++k) {
        P = a * Q - P;
        Q = (D - P * P) / Q;
        a = (a0 + P) / Q;
        if (Q == 1) {
            x = p0;
            y = q0;
            norm = (k % 2 == 0) ? 1 : -1;
            return;
        }
        bigint p1 = a * p0 + pm1, q1 = a * q0 + qm1;
        pm1 = p0;
        p0 = p1;
        qm1 = q0;
        q0 = q1;
    }
    throw std::runtime_error("pell_cf: period not found");
}

bigint icbrt(const bigint& n) {
    if (n <= 0) return 0;
    bigint r = bigint(1) << (boost::multiprecision::msb(n) / 3 + 1);
    // Newton for cube root
    for (int i = 0; i < 200; ++i) {
        bigint r2 = (2 * r + n / (r * r)) / 3;
        if (r2 >= r) break;
        r = r2;
    }
    while (r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

double regulator_of(const bigint& a, const bigint& b, std::int64_t D0, int denom) {
    // log((a + b sqrt(D0))/denom) for huge a, b
    double la = log_bigint(a);
    double lb = log_bigint(b) + 0.5 * std::log(double(D0));
    double hi = std::max(la, lb), lo = std::min(la, lb);
    double val = hi + std::log1p(std::exp(lo - hi));
    return val - std::log(double(denom));
}

}  // namespace

UnitData fundamental_unit(std::int64_t D) {
    if (D <= 0 || is_perfect_square(D))
        throw std::invalid_argument("fundamental_unit: D must be a positive non-square");
    if (D > 1000000000LL) throw std::invalid_argument("fundamental_unit: D above 10^9 limit");

    bigint x, y;
    int norm;
    pell_cf(D, x, y, norm);

    UnitData u;
    std::int64_t core = QuadraticField(D).core();
    std::int64_t m = isqrt64(D / core);

    bool half = false;
    if (D % 4 == 1) {
        // The unit group of Z[(1+sqrt(D))/2] contains Z[sqrt(D)]^x with index
        // 1 or 3; look for a cube root (a + b sqrt(D))/2 with a, b odd.
        for (int sigma : {1, -1}) {
            bigint b0 = icbrt(2 * y / D);
            for (bigint b = b0 - 2; b <= b0 + 2; ++b) {
                if (b <= 0 || b % 2 == 0) continue;
                if (D * b * b * b + 3 * sigma * b != 2 * y) continue;
                bigint a2 = D * b * b + 4 * sigma;
                if (a2 <= 0) continue;
                bigint a = boost::multiprecision::sqrt(a2);
                if (a * a != a2 || a % 2 == 0) continue;
                x = a;
                y = b;
                norm = sigma;
                half = true;
                break;
            }
            if (half) break;
        }
    }

    u.a = half ? x : 2 * x;  // normalized to (a + b sqrt(core))/2
    u.b = (half ? y : 2 * y) * m;
    u.norm = norm;
    u.denom = 2;
    u.regulator = regulator_of(u.a, u.b, core, 2);
    u.tot_pos_log = (norm == -1) ? 2.0 * u.regulator : u.regulator;
    // (t, u) over the input D: t = a/denom0, u = y-part over sqrt(D)
    double d0 = half ? 2.0 : 1.0;
    u.t_real = x.convert_to<double>() / d0;
    u.u_real = y.convert_to<double>() / d0;
    return u;
}

UnitData unit_for_order(const QuadraticField& K, const OrderData& O) {
    UnitData eps = fundamental_unit(K.core());
    if (O.conductor == 1) return eps;
    std::int64_t f = O.conductor;
    std::int64_t D0 = K.core();
    bigint a = eps.a, b = eps.b;  // (a + b sqrt(D0))/2
    bigint pa = a, pb = b;
    std::int64_t bound = 3 * f * f + 4;
    for (std::int64_t mpow = 1; mpow <= bound; ++mpow) {
        bool member;
        if (D0 % 4 == 1) {
            // (pa + pb sqrt)/2 = (pa-pb)/2 + pb*omega with omega = (1+sqrt)/2,
            // so membership in Z + f*omega*Z means f | pb.
            member = (pb % f == 0);
        } else {
            // coordinates are even: element = pa/2 + (pb/2) sqrt(D0)
            member = ((pb / 2) % f == 0);
        }
        if (member) {
            UnitData u;
            u.a = pa;
            u.b = pb;
            u.denom = 2;
            u.norm = (eps.norm == -1 && mpow % 2 == 1) ? -1 : 1;
            u.regulator = double(mpow) * eps.regulator;
            u.tot_pos_log = (u.norm == -1) ? 2.0 * u.regulator : u.regulator;
            u.t_real = 0.0;
            u.u_real = 0.0;
            return u;
        }
        // multiply by eps: ((pa + pb s)(a + b s))/4 -> /2 normal form
        bigint na = (pa * a + pb * b * D0) / 2;
        bigint nb = (pa * b + pb * a) / 2;
        pa = na;
        pb = nb;
    }
    throw std::runtime_error("unit_for_order: power scan bound exceeded");
}

double closed_geodesic_length(const UnitData& U) { return 2.0 * U.tot_pos_log; }

std::int64_t count_ideals_of_norm(const QuadraticField& K, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("count_ideals_of_norm: m >= 1 required");
    std::int64_t total = 1;
    for (auto [p, e] : factorize(m)) {
        switch (K.splitting(p)) {
            case Splitting::split:
                total *= (e + 1);
                break;
            case Splitting::inert:
                if (e % 2) return 0;
                break;
            case Splitting::ramified:
                break;  // exactly one ideal per power
        }
        if (total == 0) return 0;
    }
    return total;
}

namespace {

// Exact comparison of a1 + b1*sqrt(D) vs a2 + b2*sqrt(D).
int cmp_quad(const bigint& a1, const bigint& b1, const bigint& a2, const bigint& b2,
             std::int64_t D) {
    // sign of (a1 - a2) - (b2 - b1) sqrt(D)
    bigint da = a1 - a2, db = b2 - b1;
    if (db == 0) return da > 0 ? 1 : (da < 0 ? -1 : 0);
    if (da >= 0 && db <= 0) return (da == 0 && db == 0) ? 0 : 1;
    if (da <= 0 && db >= 0) return -1;
    bigint l = da * da, r = db * db * D;
    if (l == r) return 0;
    if (da > 0) return l > r ? 1 : -1;  // db > 0 as well
    return r > l ? 1 : -1;              // da < 0, db < 0
}

struct IdealKey {
    std::int64_t n1, c, g;
    bool operator<(const IdealKey& o) const {
        return std::tie(n1, c, g) < std::tie(o.n1, o.c, o.g);
    }
};

// HNF key of the ideal generated by (A + B sqrt(D0))/2 in the maximal order.
IdealKey ideal_key(std::int64_t A, std::int64_t B, std::int64_t D0) {
    // coordinates over the integral basis (1, omega)
    std::int64_t u1, v1, u2, v2;
    if (D0 % 4 == 1) {
        u1 = (A - B) / 2;
        v1 = B;
        u2 = v1 * (D0 - 1) / 4;
        v2 = u1 + v1;
    } else {
        u1 = A / 2;
        v1 = B / 2;
        u2 = v1 * D0;
        v2 = u1;
    }
    // 2x2 HNF of rows (u1,v1), (u2,v2)
    std::int64_t det = u1 * v2 - u2 * v1;
    std::int64_t g = gcd64(v1, v2);
    // find s,t with s v1 + t v2 = g (extended gcd)
    std::int64_t s = 1, t = 0;
    {
        std::int64_t a = v1, b = v2, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (b != 0) {
            std::int64_t q = a / b;
            std::int64_t tmp = a - q * b;
            a = b;
            b = tmp;
            tmp = s0 - q * s1;
            s0 = s1;
            s1 = tmp;
            tmp = t0 - q * t1;
            t0 = t1;
            t1 = tmp;
        }
        if (a < 0) {
            a = -a;
            s0 = -s0;
            t0 = -t0;
        }
        s = s0;
        t = t0;
        g = a;
    }
    std::int64_t n1 = std::abs(det) / g;
    std::int64_t c = s * u1 + t * u2;
    c %= n1;
    if (c < 0) c += n1;
    return IdealKey{n1, c, g};
}

}  // namespace

std::int64_t count_principal_generated(const QuadraticField& K, const OrderData& O,
                                       std::int64_t n) {
    if (n < 1) throw std::invalid_argument("count_principal_generated: n >= 1 required");
    if (gcd64(n, O.conductor) != 1)
        throw std::invalid_argument("count_principal_generated: n must be coprime to the conductor");
    if (n > 100000000LL)
        throw std::invalid_argument("count_principal_generated: n above enumeration reach");
    std::int64_t D0 = K.core();
    UnitData eps = fundamental_unit(D0);
    double sigma_eps = std::exp(eps.regulator);
    double Pplus = (eps.norm == -1) ? sigma_eps * sigma_eps : sigma_eps;
    double Amax = std::sqrt(double(n)) * (Pplus + 1.0) * 2.0 + 4.0;  // over /2 coords
    std::int64_t Bmax = std::int64_t(Amax / std::sqrt(double(D0))) + 2;

    // index of the suborder unit inside the maximal-order unit group
    std::int64_t m_ord = 1;
    if (O.conductor > 1) {
        UnitData ef = unit_for_order(K, O);
        m_ord = std::llround(ef.regulator / eps.regulator);
    }

    // collect ideals (A + B sqrt(D0))/2 O_K of norm n, then test generators
    std::map<IdealKey, std::pair<bigint, bigint>> ideals;
    for (std::int64_t B = -Bmax; B <= Bmax; ++B) {
        for (int sgn : {1, -1}) {
            std::int64_t rhs = D0 * B * B + std::int64_t(sgn) * 4 * n;
            std::int64_t A;
            if (rhs < 0 || !is_perfect_square(rhs, &A)) continue;
            for (std::int64_t Aa : {A, -A}) {
                if (D0 % 4 == 1) {
                    if (((Aa - B) % 2 + 2) % 2 != 0) continue;
                } else {
                    if (Aa % 2 != 0 || B % 2 != 0) continue;
                }
                ideals.emplace(ideal_key(Aa, B, D0), std::make_pair(bigint(Aa), bigint(B)));
                if (A == 0) break;
            }
        }
    }

    std::int64_t count = 0;
    for (auto& [key, gen] : ideals) {
        (void)key;
        bigint pa = gen.first, pb = gen.second;
        bool ok = false;
        for (std::int64_t k = 0; k < m_ord && !ok; ++k) {
            bool member;
            if (D0 % 4 == 1)
                member = (pb % O.conductor == 0);
            else
                member = ((pb / 2) % O.conductor == 0);
            if (member) ok = true;
            bigint na = (pa * eps.a + pb * eps.b * D0) / 2;
            bigint nb = (pa * eps.b + pb * eps.a) / 2;
            pa = na;
            pb = nb;
        }
        if (ok) ++count;
    }
    return count;
}

namespace {
inline std::int64_t floor_thr(double x) { return std::int64_t(std::floor(x + 1e-9)); }
}  // namespace

std::int64_t count_approx_norm_solutions_scan(std::int64_t D, std::int64_t n, double delta,
                                              double B) {
    if (delta <= 0 || B < delta) throw std::invalid_argument("approx scan: need 0 < delta <= B");
    std::int64_t lim = floor_thr(B * double(n));
    std::int64_t thr = floor_thr(delta * double(n));
    auto counts = parallel_map(std::size_t(2 * lim + 1), [&](std::size_t iu) {
        std::int64_t u = std::int64_t(iu) - lim;
        std::int64_t c = 0;
        for (std::int64_t v = -lim; v <= lim; ++v) {
            std::int64_t r = u * u - D * v * v - n;
            if (r != 0 && std::abs(r) <= thr) ++c;
        }
        return double(c);
    });
    double total = pairwise_sum(counts);
    return std::llround(total);
}

std::int64_t count_approx_norm_solutions_orbit(std::int64_t D, std::int64_t n, double delta,
                                               double B) {
    if (delta <= 0 || B < delta) throw std::invalid_argument("approx orbit: need 0 < delta <= B");
    std::int64_t lim = floor_thr(B * double(n));
    std::int64_t thr = floor_thr(delta * double(n));
    std::int64_t lo = n - thr, hi = n + thr;
    std::vector<std::int64_t> ms;
    for (std::int64_t m = lo; m <= hi; ++m)
        if (m != n) ms.push_back(m);
    auto counts = parallel_map(ms.size(), [&](std::size_t i) {
        std::int64_t m = ms[i];
        std::int64_t c = 0;
        for (std::int64_t v = -lim; v <= lim; ++v) {
            std::int64_t uu = m + D * v * v;
            std::int64_t u;
            if (uu < 0) continue;
            if (!is_perfect_square(uu, &u)) continue;
            if (u > lim) continue;
            c += (u == 0) ? 1 : 2;
        }
        return double(c);
    });
    return std::llround(pairwise_sum(counts));
}

std::int64_t pell_orbit_count(std::int64_t D, std::int64_t N) {
    if (N <= 0) throw std::invalid_argument("pell_orbit_count: N must be positive");
    bigint x1, y1;
    int norm;
    pell_cf(D, x1, y1, norm);
    // norm-one generator
    bigint X = x1, Y = y1;
    if (norm == -1) {
        X = x1 * x1 + D * y1 * y1;
        Y = 2 * x1 * y1;
    }
    double logP = regulator_of(2 * X, 2 * Y, D, 2);
    if (logP > 30.0) throw std::runtime_error("pell_orbit_count: unit window too large");
    double Pplus = std::exp(logP);
    // representative window sigma(z) in [sqrt(N), sqrt(N) * Pplus), y >= 0
    double ymax_d = std::sqrt(double(N)) * (Pplus - 1.0 / Pplus) / (2.0 * std::sqrt(double(D)));
    if (ymax_d > 5e7) throw std::runtime_error("pell_orbit_count: scan range too large");
    std::int64_t ymax = std::int64_t(ymax_d) + 2;
    auto counts = parallel_map(std::size_t(ymax + 1), [&](std::size_t iy) {
        std::int64_t y = std::int64_t(iy);
        std::int64_t xx = N + D * y * y;
        std::int64_t x;
        if (!is_perfect_square(xx, &x)) return 0.0;
        // sigma = x + y sqrt(D); window check sigma^2 in [N, N*Pplus^2)
        // exactly: N <= x^2 + D y^2 + 2xy sqrt(D) < N (X + Y sqrt(D))^2 / 1
        bigint a1 = bigint(x) * x + bigint(D) * y * y, b1 = 2 * bigint(x) * y;
        bigint a2 = N * (X * X + D * Y * Y), b2 = N * 2 * X * Y;
        if (cmp_quad(a1, b1, bigint(N), bigint(0), D) < 0) return 0.0;
        if (cmp_quad(a1, b1, a2, b2, D) >= 0) return 0.0;
        return 1.0;
    });
    return std::llround(pairwise_sum(counts));
}

}  // namespace geoamp::quadfield

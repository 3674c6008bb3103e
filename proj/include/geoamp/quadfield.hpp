#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace geoamp::quadfield {

using bigint = boost::multiprecision::cpp_int;

enum class Splitting { split, inert, ramified };

// Deterministic factorization; throws above 10^12.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

// Kronecker symbol (a|n).
int kronecker(std::int64_t a, std::int64_t n);

// natural log of a positive bigint.
double log_bigint(const bigint& x);

// Real quadratic field Q(sqrt(D)), D > 0 non-square. Stores the defining D
// (alpha^2 = D) and derives the squarefree core and true field discriminant.
class QuadraticField {
public:
    explicit QuadraticField(std::int64_t D);

    std::int64_t D() const { return D_; }
    std::int64_t core() const { return core_; }              // squarefree part of D
    std::int64_t discriminant() const { return disc_; }      // field discriminant
    Splitting splitting(std::int64_t p) const;

private:
    std::int64_t D_, core_, disc_;
};

// Fundamental unit written as (a + b sqrt(D0))/denom over the squarefree core
// D0, with denom in {1,2}; exact bigint coordinates.
struct UnitData {
    bigint a, b;
    int denom = 1;
    int norm = 1;                      // a^2 - D0 b^2 = norm * denom^2
    double regulator = 0.0;            // log of the larger embedding
    double tot_pos_log = 0.0;          // |log sigma(eta0)|, in {R, 2R}
    // (t, u) with t^2 - D u^2 = norm, as positive rationals over the input D
    double t_real = 0.0, u_real = 0.0;
};

// An order Z + f*O_K inside the maximal order.
struct OrderData {
    std::int64_t conductor = 1;
    std::int64_t discriminant = 0;  // conductor^2 * field discriminant
};

OrderData make_order(const QuadraticField& K, std::int64_t conductor);

// Minimal Pell solution for the ring Z[alpha] (D != 1 mod 4) or
// Z[(1+alpha)/2] (D = 1 mod 4), alpha^2 = D; continued-fraction based.
UnitData fundamental_unit(std::int64_t D);

// Least power of the fundamental unit of the maximal order of K lying in the
// order of the given conductor.
UnitData unit_for_order(const QuadraticField& K, const OrderData& O);

// Vol(Gamma_L\L) = log P0 = 2 |log sigma(eta0)| for the closed geodesic of U.
double closed_geodesic_length(const UnitData& U);

// Number of integral ideals of the maximal order with norm m.
std::int64_t count_ideals_of_norm(const QuadraticField& K, std::int64_t m);

// |P_{R_F}(n)|: principal ideals of the maximal order of norm n admitting a
// generator in the conductor-f order. Requires gcd(n, f) = 1.
std::int64_t count_principal_generated(const QuadraticField& K, const OrderData& O,
                                       std::int64_t n);

// #{(u,v) in Z^2 : 0 < |u^2 - D v^2 - n| <= delta*n, |u|,|v| <= B*n}.
std::int64_t count_approx_norm_solutions_scan(std::int64_t D, std::int64_t n, double delta,
                                              double B);
// Same count through the m-decomposition (independent loop structure).
std::int64_t count_approx_norm_solutions_orbit(std::int64_t D, std::int64_t n, double delta,
                                               double B);

// Orbit count of {(x,y): x^2 - D0 y^2 = N} under the norm-one unit group of
// Z[sqrt(D0)]; used for stabilizer counting.
std::int64_t pell_orbit_count(std::int64_t D0, std::int64_t N);

}  // namespace geoamp::quadfield

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "geoamp/psl2.hpp"

using namespace geoamp::psl2;

namespace {
GroupElement random_element(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    return make_n(U(rng)) * make_a(U(rng)) * make_k(U(rng) * M_PI);
}
}  // namespace

TEST_CASE("parametrized subgroups") {
    GroupElement id;
    CHECK(dist(make_a(0.0), id) == doctest::Approx(0.0).epsilon(1e-14));
    // k(2*pi) = -I, same projective class
    CHECK(dist(make_k(2.0 * M_PI), id) < 1e-12);
    GroupElement a2 = make_a(2.0 * std::log(2.0));
    CHECK(a2.a() == doctest::Approx(2.0));
    CHECK(a2.d() == doctest::Approx(0.5));
    CHECK(a2.b() == 0.0);
    CHECK(make_n(3.0).b() == doctest::Approx(3.0));
    CHECK(make_n(3.0).c() == 0.0);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        GroupElement g = random_element(rng, 2.0);
        CHECK(g.det() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sign normalization is idempotent") {
    GroupElement g(-2.0, 1.0, -1.0, 0.0);  // first entry negative, gets flipped
    CHECK(g.a() > 0.0);
    GroupElement h(g.a(), g.b(), g.c(), g.d());
    CHECK(dist(g, h) == 0.0);
}

TEST_CASE("iwasawa H") {
    for (double t : {-1.0, 0.0, 2.5}) CHECK(iwasawa_H(make_a(t)) == doctest::Approx(t).epsilon(1e-13));
    for (double th : {0.3, 1.0, 2.9}) CHECK(iwasawa_H(make_k(th)) == doctest::Approx(0.0).epsilon(1e-13));
    GroupElement g = make_n(3.0) * make_a(1.2) * make_k(0.7);
    CHECK(iwasawa_H(g) == doctest::Approx(1.2).epsilon(1e-12));

    // round-trip: g = n a(H) k
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        GroupElement g2 = random_element(rng, 1.5);
        double t = iwasawa_H(g2);
        double th = iwasawa_theta(g2);
        // recover n-part: g2 * k^{-1} * a^{-1} should be unipotent
        GroupElement n = g2 * make_k(-th) * make_a(-t);
        GroupElement rec = make_n(n.b() / n.d()) * make_a(t) * make_k(th);
        CHECK(dist(g2, rec) < 1e-10);
    }
}

TEST_CASE("cartan coordinate") {
    CHECK(cartan_t(GroupElement()) == doctest::Approx(0.0));
    CHECK(cartan_t(make_a(-3.0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(cartan_t(make_k(0.4) * make_a(1.0) * make_k(1.3)) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        GroupElement g = random_element(rng);
        CHECK(cartan_t(g) == doctest::Approx(cartan_t(g.inverse())).epsilon(1e-11));
    }
}

TEST_CASE("dist is a metric on samples") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        GroupElement x = random_element(rng), y = random_element(rng), z = random_element(rng);
        CHECK(dist(x, x) == 0.0);
        CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-15));
        CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-12);
    }
}

TEST_CASE("left/right translation distortion is bounded on a compact ball") {
    std::mt19937_64 rng(19);
    GroupElement g = make_n(0.4) * make_a(0.7) * make_k(0.5);
    double cmax = 0.0;
    for (int i = 0; i < 200; ++i) {
        GroupElement x = random_element(rng, 0.8), y = random_element(rng, 0.8);
        double d0 = dist(x, y);
        if (d0 < 1e-8) continue;
        double r = dist(x * g, y * g) / d0;
        cmax = std::max({cmax, r, 1.0 / r});
    }
    CHECK(cmax < 25.0);  // fitted once; stable for this ball and g
}

TEST_CASE("alpha map") {
    std::mt19937_64 rng(23);
    GroupElement id;
    for (int i = 0; i < 50; ++i) {
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        GroupElement k = make_k(U(rng));
        CHECK(dist(alpha_map(id, k), k) < 1e-12);
        GroupElement g = random_element(rng), h = random_element(rng);
        GroupElement lhs = alpha_map(g * h, k);
        GroupElement rhs = alpha_map(h, alpha_map(g, k));
        CHECK(dist(lhs, rhs) < 1e-9);
        CHECK(dist(alpha_map(make_a(U(rng)), id), id) < 1e-12);
    }
}

TEST_CASE("geodesic_of") {
    auto d0 = geodesic_of(GroupElement());
    CHECK(d0.kind == GeodesicDescriptor::Kind::vertical);
    CHECK(d0.e1 == doctest::Approx(0.0));

    auto d1 = geodesic_of(make_n(2.5));
    CHECK(d1.kind == GeodesicDescriptor::Kind::vertical);
    CHECK(d1.e1 == doctest::Approx(2.5));

    // rotation by pi/2 about i maps the imaginary axis to the unit half-circle
    auto d2 = geodesic_of(make_k(M_PI / 2));
    CHECK(d2.kind == GeodesicDescriptor::Kind::half_circle);
    // Moebius-action oracle on the two boundary points 0, inf
    double p = boundary_action(make_k(M_PI / 2), 0.0);
    double q = boundary_action(make_k(M_PI / 2), HUGE_VAL);
    CHECK(d2.e1 == doctest::Approx(std::min(p, q)).epsilon(1e-12));
    CHECK(d2.e2 == doctest::Approx(std::max(p, q)).epsilon(1e-12));
    CHECK(d2.e1 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(d2.e2 == doctest::Approx(1.0).epsilon(1e-12));

    // right-A-invariance
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        GroupElement g = random_element(rng);
        auto da = geodesic_of(g);
        auto db = geodesic_of(g * make_a(U(rng)));
        CHECK(da.kind == db.kind);
        if (da.kind == GeodesicDescriptor::Kind::half_circle) {
            CHECK(da.e1 == doctest::Approx(db.e1).epsilon(1e-9));
            CHECK(da.e2 == doctest::Approx(db.e2).epsilon(1e-9));
        }
    }

    // top of the half-circle: g a(top_param) i has maximal height
    for (int i = 0; i < 20; ++i) {
        GroupElement g = random_element(rng);
        auto d = geodesic_of(g);
        if (d.kind != GeodesicDescriptor::Kind::half_circle) continue;
        double h0 = iwasawa_H(g * make_a(d.top_param));
        CHECK(h0 >= iwasawa_H(g * make_a(d.top_param + 0.05)) - 1e-12);
        CHECK(h0 >= iwasawa_H(g * make_a(d.top_param - 0.05)) - 1e-12);
        CHECK(std::exp(h0) == doctest::Approx(d.radius).epsilon(1e-9));
    }
}

TEST_CASE("dist_to_normalizer") {
    auto axis = GeodesicDescriptor::axis();
    CHECK(dist_to_normalizer(make_a(5.0), axis) < 1e-9);
    // the Weyl component is part of the normalizer
    GroupElement w(0.0, -1.0, 1.0, 0.0);
    CHECK(dist_to_normalizer(make_a(1.3) * w, axis) < 1e-9);

    // grid-search oracle over both components for g = k(0.3)
    GroupElement g = make_k(0.3);
    double best = HUGE_VAL;
    for (int comp = 0; comp < 2; ++comp) {
        for (int i = 0; i <= 400000; ++i) {
            double t = -20.0 + 40.0 * i / 400000.0;
            GroupElement el = comp == 0 ? make_a(t) : make_a(t) * w;
            best = std::min(best, dist(g, el));
        }
    }
    CHECK(dist_to_normalizer(g, axis) == doctest::Approx(best).epsilon(1e-6));
}

#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"
#include "thpf/grid.hpp"

using namespace thpf;

TEST_CASE("grid construction validates its arguments") {
    CHECK_THROWS_AS(Grid(3, 8, 1.0, 1.0), grid_error);
    CHECK_THROWS_AS(Grid(8, 2, 1.0, 1.0), grid_error);
    CHECK_THROWS_AS(Grid(7, 8, 1.0, 1.0), grid_error);
    CHECK_THROWS_AS(Grid(8, 8, 0.0, 1.0), grid_error);
    CHECK_THROWS_AS(Grid(8, 8, 1.0, -1.0), grid_error);
    Grid g(8, 6, 2.0 * M_PI, 1.0);
    CHECK(g.dx == Catch::Approx(2.0 * M_PI / 8));
    CHECK(g.dy == Catch::Approx(1.0 / 6));
}

TEST_CASE("derivative wavenumbers zero the Nyquist mode") {
    Grid g(8, 8, 2.0 * M_PI, 2.0 * M_PI);
    CHECK(g.kx[0] == 0.0);
    CHECK(g.kx[4] == 0.0);  // Nyquist
    CHECK(g.kx[1] == Catch::Approx(1.0));
    CHECK(g.kx[7] == Catch::Approx(-1.0));
    CHECK(g.ky[4] == 0.0);
}

TEST_CASE("transform round trip is exact to roundoff") {
    Grid g(16, 12, 2.0 * M_PI, 4.0);
    ScalarField f = oracle::random_smooth(g, 7, 1.0);
    ScalarField back = inverse(forward(f, g), g);
    CHECK(oracle::max_diff(f, back) < 1e-13);
}

TEST_CASE("spectral derivatives are exact on trig polynomials") {
    Grid g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField f(g), dfx(g), dfy(g), lapf(g), fxy(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            int k = g.idx(i, j);
            double x = g.x(i), y = g.y(j);
            f[k] = std::sin(2 * x) * std::cos(3 * y);
            dfx[k] = 2 * std::cos(2 * x) * std::cos(3 * y);
            dfy[k] = -3 * std::sin(2 * x) * std::sin(3 * y);
            lapf[k] = -13 * std::sin(2 * x) * std::cos(3 * y);
            fxy[k] = -6 * std::cos(2 * x) * std::sin(3 * y);
        }
    VectorField grad = gradient(f, g);
    CHECK(oracle::max_diff(grad.x, dfx) < 1e-12);
    CHECK(oracle::max_diff(grad.y, dfy) < 1e-12);
    CHECK(oracle::max_diff(laplacian(f, g), lapf) < 1e-11);
    CHECK(oracle::max_diff(second_derivative(f, 0, 1, g), fxy) < 1e-11);
}

TEST_CASE("div(grad f) equals laplacian(f)") {
    Grid g(16, 16, 2.0 * M_PI, 3.0);
    ScalarField f = oracle::random_smooth(g, 11, 1.0);
    ScalarField a = divergence(gradient(f, g), g);
    ScalarField b = laplacian(f, g);
    CHECK(oracle::max_diff(a, b) < 1e-11);
}

TEST_CASE("dealiasing is a projection that keeps low modes") {
    Grid g(12, 12, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField lo(g), hi(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            lo[g.idx(i, j)] = std::cos(2 * g.x(i)) * std::sin(3 * g.y(j));
            hi[g.idx(i, j)] = std::cos(5 * g.x(i));
        }
    CHECK(oracle::max_diff(dealias(lo, g), lo.v) < 1e-13);
    CHECK(linf_norm(dealias(hi, g)) < 1e-13);
    ScalarField f = oracle::random_smooth(g, 3, 1.0);
    ScalarField once = dealias(f, g);
    CHECK(oracle::max_diff(dealias(once, g), once) < 1e-13);
}

TEST_CASE("Leray projection removes divergence and is idempotent") {
    Grid g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
    VectorField v;
    v.x = oracle::random_smooth(g, 21, 1.0, 0.3);
    v.y = oracle::random_smooth(g, 22, 1.0, -0.2);
    ScalarField psi;
    VectorField pv = leray_project(v, g, &psi);
    CHECK(l2_norm(divergence(pv, g), g) < 1e-12);
    CHECK(mean(pv.x, g) == Catch::Approx(mean(v.x, g)).margin(1e-14));
    CHECK(mean(pv.y, g) == Catch::Approx(mean(v.y, g)).margin(1e-14));
    VectorField pv2 = leray_project(pv, g);
    CHECK(oracle::max_diff(pv.x, pv2.x) < 1e-13);
    // v = P(v) + grad(psi)
    VectorField gpsi = gradient(psi, g);
    for (int k = 0; k < g.size(); ++k) {
        CHECK(pv.x[k] + gpsi.x[k] == Catch::Approx(v.x[k]).margin(1e-12));
        CHECK(pv.y[k] + gpsi.y[k] == Catch::Approx(v.y[k]).margin(1e-12));
    }
}

TEST_CASE("gradient fields project to zero") {
    Grid g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField f = oracle::random_smooth(g, 31, 1.0);
    VectorField v = gradient(f, g);
    VectorField pv = leray_project(v, g);
    CHECK(linf_norm(pv.x) < 1e-12);
    CHECK(linf_norm(pv.y) < 1e-12);
}

TEST_CASE("quadrature integrates trig polynomials exactly") {
    Grid g(16, 16, 2.0 * M_PI, 2.0 * M_PI);
    ScalarField f(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            f[g.idx(i, j)] = 2.5 + std::cos(3 * g.x(i)) * std::sin(2 * g.y(j));
    CHECK(integrate(f, g) == Catch::Approx(2.5 * g.area()).margin(1e-11));
    CHECK(mean(f, g) == Catch::Approx(2.5).margin(1e-13));
    ScalarField c(g, -1.5);
    CHECK(l2_norm(c, g) == Catch::Approx(1.5 * std::sqrt(g.area())));
    CHECK(linf_norm(c) == 1.5);
    CHECK(min_value(c) == -1.5);
    CHECK(max_value(c) == -1.5);
}

TEST_CASE("operators match dense DFT matrices") {
    Grid g(8, 8, 2.0 * M_PI, 3.0);
    oracle::Dense d(g);
    ScalarField f = oracle::random_smooth(g, 41, 1.0, 0.5);
    VectorField grad = gradient(f, g);
    CHECK(oracle::max_diff(grad.x, d.ddx(f.v)) < 1e-12);
    CHECK(oracle::max_diff(grad.y, d.ddy(f.v)) < 1e-12);
    CHECK(oracle::max_diff(laplacian(f, g), d.lap(f.v)) < 1e-12);
    CHECK(oracle::max_diff(dealias(f, g), d.dealias(f.v)) < 1e-12);

    VectorField v;
    v.x = oracle::random_smooth(g, 42, 1.0);
    v.y = oracle::random_smooth(g, 43, 1.0);
    std::vector<double> ox = v.x.v, oy = v.y.v, opsi;
    d.leray(ox, oy, &opsi);
    ScalarField psi;
    VectorField pv = leray_project(v, g, &psi);
    CHECK(oracle::max_diff(pv.x, ox) < 1e-12);
    CHECK(oracle::max_diff(pv.y, oy) < 1e-12);
    CHECK(oracle::max_diff(psi, opsi) < 1e-12);
}

TEST_CASE("field size mismatches are rejected") {
    Grid g(8, 8, 1.0, 1.0);
    Grid g2(16, 16, 1.0, 1.0);
    ScalarField f(g2);
    CHECK_THROWS_AS(gradient(f, g), grid_error);
    CHECK_THROWS_AS(laplacian(f, g), grid_error);
    CHECK_THROWS_AS(integrate(f, g), grid_error);
}

#include "polyosc/bases.hpp"
#include "polyosc/special_functions.hpp"
#include "polyosc/tree.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

using namespace polyosc;

namespace {

// one axis factor assembled from scratch: Laguerre by its finite series,
// norm fixed so the square integrates to 1/2 over x > 0
double axis_oracle(double omega, double nu, int n, double x) {
    double lag = 0.0;
    for (int m = 0; m <= n; ++m) {
        double b = 1.0;
        for (int i = 1; i <= n - m; ++i) b *= (m + nu + i) / i; // C(n+nu, n-m)
        double fact = 1.0;
        for (int i = 2; i <= m; ++i) fact *= i;
        lag += b * std::pow(-omega * x * x, m) / fact;
    }
    double norm = std::sqrt(std::sqrt(omega)
                            * std::exp(std::lgamma(n + 1.0) - std::lgamma(n + nu + 1.0)));
    return norm * std::pow(omega * x * x, 0.5 * (nu + 0.5))
         * std::exp(-omega * x * x / 2.0) * lag;
}

double norm2_on(const std::function<double(double)>& f, double hi) {
    return integrate([&](double r) { double v = f(r); return v * v; }, 0.0, hi);
}

ModelParams params2(double k1, double k2) {
    ModelParams p;
    p.k = {k1, k2};
    p.sign = {1, 1};
    return p;
}

// angular overlap of two same-level states on one tree; the integrand
// factorizes cell by cell, each against its cos^{v_s} sin^{v_r} measure
double angular_overlap(const Tree& t, const ModelParams& p,
                       const HypersphericalState& a, const HypersphericalState& b) {
    auto la = node_momenta(t, p, a);
    auto lb = node_momenta(t, p, b);
    double prod = 1.0;
    for (size_t j = 0; j < a.q.size(); ++j) {
        int id = t.internal_preorder()[j];
        const TreeNode& nd = t.node(id);
        int vs = t.node(nd.left).v, vr = t.node(nd.right).v;
        prod *= integrate([&](double th) {
            return cell_function(a.q[j], la[nd.left], vs, la[nd.right], vr, th)
                 * cell_function(b.q[j], lb[nd.left], vs, lb[nd.right], vr, th)
                 * std::pow(std::cos(th), vs) * std::pow(std::sin(th), vr);
        }, 0.0, M_PI / 2.0);
        if (std::abs(prod) < 1e-13) return prod; // already orthogonal
    }
    return prod;
}

} // namespace

TEST_CASE("energy ladder") {
    ModelParams p;
    p.k = {0.5, 0.5};
    p.sign = {1, 1};
    CHECK(energy(p, 0) == doctest::Approx(3.0).epsilon(1e-15));

    ModelParams q;
    q.omega = 1.0;
    q.k = {0.3, 0.7, 1.2};
    q.sign = {-1, 1, 1};
    CHECK(energy(q, 2) == doctest::Approx(8.6).epsilon(1e-14));

    q.omega = 2.5;
    CHECK(energy(q, 2) == doctest::Approx(2.5 * 8.6).epsilon(1e-14));
}

TEST_CASE("validate_params rejects bad input") {
    ModelParams p;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument); // empty k

    p.k = {0.5, 0.5};
    p.sign = {1};
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument); // length mismatch

    p.sign = {1, 1};
    p.omega = -1.0;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);

    p.omega = 1.0;
    p.k = {0.5, -0.2};
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);

    p.k = {0.5, 0.5};
    p.sign = {1, 2};
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);

    // the - branch is non-normalizable once k > 1/2
    p.k = {0.5, 0.8};
    p.sign = {1, -1};
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);

    p.sign = {-1, 1};
    CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("cartesian factor normalizes to the orthant value 1/2") {
    ModelParams p;
    p.k = {0.5};
    p.sign = {1};
    CartesianState s;
    s.n = {0};
    double n2 = norm2_on([&](double x) {
        std::vector<double> xs = {x};
        return cartesian_wavefunction(p, s, xs);
    }, 12.0);
    CHECK(n2 == doctest::Approx(0.5).epsilon(1e-10));

    p.k = {0.8};
    s.n = {2};
    n2 = norm2_on([&](double x) {
        std::vector<double> xs = {x};
        return cartesian_wavefunction(p, s, xs);
    }, 12.0);
    CHECK(n2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cartesian wavefunction boundary behaviour") {
    ModelParams p;
    p.k = {0.5};
    p.sign = {1};
    CartesianState s;
    s.n = {0};
    std::vector<double> origin = {0.0};
    CHECK(cartesian_wavefunction(p, s, origin) == 0.0); // x^1 prefactor

    // - branch at k = 1/2 has exponent zero: finite nonzero boundary value
    p.sign = {-1};
    CHECK(cartesian_wavefunction(p, s, origin) != 0.0);

    std::vector<double> neg = {-0.5};
    p.sign = {1};
    CHECK_THROWS_AS(cartesian_wavefunction(p, s, neg), std::domain_error);
}

TEST_CASE("cartesian wavefunction matches the closed-form product") {
    ModelParams p;
    p.omega = 1.5;
    p.k = {0.8, 0.3};
    p.sign = {1, 1};
    CartesianState s;
    s.n = {1, 0};
    std::vector<double> x = {0.9, 1.1};
    double want = axis_oracle(1.5, 0.8, 1, 0.9) * axis_oracle(1.5, 0.3, 0, 1.1);
    CHECK(cartesian_wavefunction(p, s, x) == doctest::Approx(want).epsilon(1e-12));

    // - branch flips the sign of nu in the oracle too
    p.k = {0.4, 0.3};
    p.sign = {-1, 1};
    want = axis_oracle(1.5, -0.4, 1, 0.9) * axis_oracle(1.5, 0.3, 0, 1.1);
    CHECK(cartesian_wavefunction(p, s, x) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("node momenta on the two-leaf tree") {
    Tree t = Tree::parse("(x1 x2)");
    ModelParams p = params2(0.3, 0.4);
    HypersphericalState s;
    s.n_r = 0;
    s.q = {0};
    auto l = node_momenta(t, p, s);
    const TreeNode& root = t.node(t.root());
    CHECK(l[root.left] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(l[root.right] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(l[t.root()] == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(hypermomentum(t, p, s) == doctest::Approx(1.7).epsilon(1e-15));

    s.q = {2};
    CHECK(hypermomentum(t, p, s) == doctest::Approx(5.7).epsilon(1e-15));
}

TEST_CASE("node momenta on the six-coordinate tree") {
    Tree t = Tree::parse("((x1 (x2 x3)) ((x4 x5) x6))");
    ModelParams p;
    p.k.assign(6, 0.5);
    p.sign.assign(6, 1);
    HypersphericalState s;
    s.n_r = 0;
    s.q.assign(5, 0);
    CHECK(hypermomentum(t, p, s) == doctest::Approx(6.0).epsilon(1e-14));

    s.q = {1, 0, 2, 0, 1};
    CHECK(hypermomentum(t, p, s) == doctest::Approx(6.0 + 2.0 * 4.0).epsilon(1e-14));
}

TEST_CASE("node momenta input validation") {
    Tree t = Tree::parse("(x1 x2)");
    ModelParams p = params2(0.3, 0.4);
    HypersphericalState s;
    s.q = {0, 0}; // wrong angle count
    CHECK_THROWS_AS(node_momenta(t, p, s), std::invalid_argument);
    s.q = {-1};
    CHECK_THROWS_AS(node_momenta(t, p, s), std::invalid_argument);
}

TEST_CASE("angular function of a leaf-leaf cell") {
    Tree t = Tree::parse("(x1 x2)");
    ModelParams p = params2(0.3, 0.4);
    HypersphericalState s;
    s.n_r = 0;
    s.q = {0};

    // q = 0 drops the Jacobi factor: pure cos^{l_s} sin^{l_r} up to the norm
    std::vector<double> theta = {0.83};
    double v = angular_function(t, p, s, theta);
    double shape = std::pow(std::cos(0.83), 0.8) * std::pow(std::sin(0.83), 0.9);
    theta[0] = 0.31;
    double v2 = angular_function(t, p, s, theta);
    double shape2 = std::pow(std::cos(0.31), 0.8) * std::pow(std::sin(0.31), 0.9);
    CHECK(v / shape == doctest::Approx(v2 / shape2).epsilon(1e-12));

    // unit norm; this cell has v_s = v_r = 0 so the measure is plain dtheta
    for (int q : {0, 2}) {
        s.q = {q};
        double n2 = integrate([&](double a) {
            std::vector<double> tt = {a};
            double f = angular_function(t, p, s, tt);
            return f * f;
        }, 0.0, M_PI / 2.0);
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("angular function normalization on the six-coordinate tree") {
    Tree t = Tree::parse("((x1 (x2 x3)) ((x4 x5) x6))");
    ModelParams p;
    p.k = {0.31, 0.52, 0.47, 1.3, 0.8, 0.66};
    p.sign = {1, 1, 1, 1, 1, 1};
    HypersphericalState s;
    s.n_r = 0;
    s.q = {1, 0, 1, 0, 0};

    CHECK(angular_overlap(t, p, s, s) == doctest::Approx(1.0).epsilon(1e-9));

    // the full function is the product of its cell factors
    auto l = node_momenta(t, p, s);
    std::vector<double> theta = {0.71, 0.42, 1.1, 0.9, 0.35};
    double direct = 1.0;
    for (size_t j = 0; j < s.q.size(); ++j) {
        const TreeNode& nd = t.node(t.internal_preorder()[j]);
        direct *= cell_function(s.q[j], l[nd.left], t.node(nd.left).v,
                                l[nd.right], t.node(nd.right).v, theta[j]);
    }
    CHECK(angular_function(t, p, s, theta) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("radial function normalization and limits") {
    ModelParams p;
    p.omega = 1.3;
    p.k = {0.5, 0.5, 0.7}; // only D and omega enter the radial factor
    p.sign = {1, 1, 1};
    double n2 = norm2_on([&](double r) {
        return radial_function(p, 1.7, 2, r) * r; // r^{(D-1)/2} folded into f
    }, 12.0);
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(radial_function(p, 1.7, 0, 0.0) == 0.0);

    // n_r = 0 profile is r^l e^{-Omega r^2/2} up to a constant
    double r1 = 0.7, r2 = 1.9, l = 1.7;
    double ratio = radial_function(p, l, 0, r1) / radial_function(p, l, 0, r2);
    double want = std::pow(r1 / r2, l) * std::exp(-1.3 * (r1 * r1 - r2 * r2) / 2.0);
    CHECK(ratio == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("hyperspherical states are orthonormal") {
    struct Case { const char* dsl; std::vector<double> k; };
    for (const Case& c : {Case{"(x1 x2)", {0.3, 0.4}},
                          Case{"(x1 (x2 x3))", {0.3, 0.7, 1.2}}}) {
        Tree t = Tree::parse(c.dsl);
        ModelParams p;
        p.k = c.k;
        p.sign.assign(c.k.size(), 1);
        const int D = t.dimension();
        for (int N = 0; N <= 2; ++N) {
            auto states = enumerate_hyperspherical(t, N);
            for (size_t i = 0; i < states.size(); ++i) {
                for (size_t j = i; j < states.size(); ++j) {
                    double ang = angular_overlap(t, p, states[i], states[j]);
                    if (states[i].q != states[j].q) {
                        CHECK(std::abs(ang) <= 1e-8);
                        continue;
                    }
                    double li = hypermomentum(t, p, states[i]);
                    double rad = integrate([&](double r) {
                        return radial_function(p, li, states[i].n_r, r)
                             * radial_function(p, li, states[j].n_r, r)
                             * std::pow(r, D - 1);
                    }, 0.0, 12.0);
                    CHECK(ang * rad == doctest::Approx(i == j ? 1.0 : 0.0)
                                           .epsilon(1e-8).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("cartesian states are orthonormal up to the orthant factor") {
    ModelParams p = params2(0.6, 1.1);
    auto states = enumerate_cartesian(2, 2);
    REQUIRE(states.size() == 3);
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = i; j < states.size(); ++j) {
            double overlap = 1.0;
            for (int axis = 0; axis < 2; ++axis) {
                ModelParams p1;
                p1.omega = p.omega;
                p1.k = {p.k[axis]};
                p1.sign = {p.sign[axis]};
                CartesianState a, b;
                a.n = {states[i].n[axis]};
                b.n = {states[j].n[axis]};
                overlap *= integrate([&](double x) {
                    std::vector<double> xs = {x};
                    return cartesian_wavefunction(p1, a, xs)
                         * cartesian_wavefunction(p1, b, xs);
                }, 0.0, 12.0);
            }
            if (i == j) {
                CHECK(overlap == doctest::Approx(0.25).epsilon(1e-8)); // 1/2^D
            } else {
                CHECK(std::abs(overlap) <= 1e-8);
            }
        }
    }
}

TEST_CASE("one-axis Schroedinger residual by finite differences") {
    // -psi''/2 + (Omega^2 x^2 + (k^2-1/4)/x^2) psi / 2 = e psi,
    // e = Omega (2n + 1 + sign k)
    ModelParams p;
    p.omega = 1.0;
    p.k = {0.8};
    p.sign = {1};
    CartesianState s;
    s.n = {2};
    double e = energy(p, 2);
    auto psi = [&](double x) {
        std::vector<double> xs = {x};
        return cartesian_wavefunction(p, s, xs);
    };
    double h = 1e-4;
    double worst = 0.0, scale = 0.0;
    for (double x : {0.6, 0.9, 1.6, 2.3}) {
        double lap = (psi(x + h) - 2.0 * psi(x) + psi(x - h)) / (h * h);
        double V = x * x + (0.8 * 0.8 - 0.25) / (x * x);
        double resid = -0.5 * lap + 0.5 * V * psi(x) - e * psi(x);
        worst = std::max(worst, std::abs(resid));
        scale = std::max(scale, std::abs(e * psi(x)));
    }
    CHECK(worst <= 1e-5 * scale);
}

TEST_CASE("radial Schroedinger residual by finite differences") {
    // u = r^{(D-1)/2} R obeys -u''/2 + (Omega^2 r^2 + L(L+1)/r^2) u / 2 = E u
    // with L = l + (D-3)/2 and E the full level energy
    Tree t = Tree::parse("(x1 (x2 x3))");
    ModelParams p;
    p.k = {0.3, 0.7, 1.2};
    p.sign = {1, 1, 1};
    HypersphericalState s;
    s.n_r = 1;
    s.q = {0, 0};
    const int D = 3;
    double l = hypermomentum(t, p, s);
    double E = energy(p, s.total());
    double L = l + (D - 3) / 2.0;
    auto u = [&](double r) {
        return radial_function(p, l, s.n_r, r) * std::pow(r, (D - 1) / 2.0);
    };
    double h = 1e-4;
    double worst = 0.0, scale = 0.0;
    for (double r : {0.8, 1.4, 2.1}) {
        double lap = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
        double resid = -0.5 * lap + 0.5 * (r * r + L * (L + 1.0) / (r * r)) * u(r) - E * u(r);
        worst = std::max(worst, std::abs(resid));
        scale = std::max(scale, std::abs(E * u(r)));
    }
    CHECK(worst <= 1e-5 * scale);
}

TEST_CASE("state enumeration order and counts") {
    auto c = enumerate_cartesian(2, 1);
    REQUIRE(c.size() == 2);
    CHECK(c[0].n == std::vector<int>{0, 1});
    CHECK(c[1].n == std::vector<int>{1, 0});

    CHECK(enumerate_cartesian(3, 2).size() == 6);
    CHECK(enumerate_cartesian(6, 3).size() == 56);

    Tree t2 = Tree::parse("(x1 x2)");
    auto h = enumerate_hyperspherical(t2, 1);
    REQUIRE(h.size() == 2);
    CHECK(h[0].n_r == 1);
    CHECK(h[0].q == std::vector<int>{0});
    CHECK(h[1].n_r == 0);
    CHECK(h[1].q == std::vector<int>{1});

    auto h0 = enumerate_hyperspherical(t2, 0);
    REQUIRE(h0.size() == 1);
    CHECK(h0[0].n_r == 0);
    CHECK(h0[0].q == std::vector<int>{0});

    // both bases span the same level-N eigenspace: C(N+D-1, D-1) states
    for (int D = 1; D <= 6; ++D) {
        std::string dsl = "x1";
        for (int i = 2; i <= D; ++i) dsl = "(" + dsl + " x" + std::to_string(i) + ")";
        Tree t = Tree::parse(dsl);
        for (int N = 0; N <= 5; ++N) {
            double want = 1.0;
            for (int i = 1; i <= D - 1; ++i) want *= double(N + i) / i;
            CHECK(enumerate_cartesian(D, N).size() == size_t(std::lround(want)));
            CHECK(enumerate_hyperspherical(t, N).size() == size_t(std::lround(want)));
        }
    }
}

TEST_CASE("state totals") {
    CartesianState s;
    s.n = {1, 2, 0};
    CHECK(s.total() == 3);
    HypersphericalState hs;
    hs.n_r = 1;
    hs.q = {2, 0};
    CHECK(hs.total() == 3);
}

#include <cmath>
#include <optional>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "arith_theta/greens.hpp"
#include "arith_theta/zhat.hpp"

using namespace arith_theta;

namespace
{
    const std::string data_dir = ARITH_THETA_DATA_DIR;

    const TraceZeroLattice &m2z()
    {
        static const TraceZeroLattice L = trace_zero_lattice(load_order(data_dir + "/orders/m2z.json"));
        return L;
    }

    // int_1^inf e^{-r u} / u du, split at u = 2 for the two DE rules.
    double beta1_quad(double r)
    {
        auto f = [r](double u) { return std::exp(-r * u) / u; };
        boost::math::quadrature::tanh_sinh<double> ts;
        boost::math::quadrature::exp_sinh<double> es;
        return ts.integrate(f, 1.0, 2.0) + es.integrate(f, 2.0, std::numeric_limits<double>::infinity());
    }

    Sl2Vector random_vector(std::mt19937_64 &g)
    {
        std::uniform_real_distribution<double> d(-2, 2);
        return {d(g), d(g), d(g)};
    }

    Mat2 random_sl2(std::mt19937_64 &g)
    {
        std::uniform_real_distribution<double> d(-1, 1), pos(0.5, 2);
        const double a = pos(g), b = d(g), c = d(g);
        return {a, b, c, (1 + b * c) / a};
    }

    // x with Q = 1 and CM point i
    const Sl2Vector x_i{0.0, -1.0, 1.0};

    PairConfig pair_11() { return {{0.3, -1.0, 1.2}, {1.0, 0.5, 0.2}}; }
} // namespace

TEST(Beta1, Examples)
{
    EXPECT_NEAR(beta1(1.0), 0.21938393439552027, 1e-15);
    const double r = 1e-8;
    EXPECT_LE(std::abs(beta1(r) + std::log(r) + double(euler_gamma)), 2e-8);
    EXPECT_GT(beta1(50.0), 0.0);
    EXPECT_LE(beta1(50.0), std::exp(-50.0) / 50.0);
    EXPECT_THROW(beta1(0.0), NonpositiveArgument);
    EXPECT_THROW(beta1(-1.0), NonpositiveArgument);
}

TEST(Beta1, MatchesQuadratureOracle)
{
    for (double r : {1e-6, 1e-3, 0.05, 0.5, 0.99, 1.0, 1.01, 3.0, 10.0, 25.0, 50.0})
        EXPECT_LE(std::abs(beta1(r) - beta1_quad(r)) / beta1_quad(r), 1e-12) << "r=" << r;
}

TEST(Beta1, MonotoneAndBounded)
{
    double prev = beta1(1e-4);
    for (double r = 2e-4; r < 60; r *= 1.07)
    {
        const double b = beta1(r);
        EXPECT_GT(b, 0.0);
        EXPECT_LT(b, prev) << "r=" << r;
        if (r >= 0.1)
            EXPECT_LE(b, std::exp(-r) / r) << "r=" << r;
        if (r <= 0.5)
            EXPECT_LE(std::abs(b + double(euler_gamma) + std::log(r)), 2 * r);
        prev = b;
    }
}

TEST(R, Examples)
{
    EXPECT_NEAR(R(x_i, UHPoint(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(R(x_i, UHPoint(0, 2)), 9.0 / 16.0, 1e-15);
    const UHPoint z = cm_point(x_i);
    EXPECT_NEAR(z.u, 0.0, 1e-15);
    EXPECT_NEAR(z.v, 1.0, 1e-15);
}

TEST(R, PositiveForNegativeVectors)
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-3, 3), v(0.05, 4);
    int n = 0;
    while (n < 200)
    {
        const Sl2Vector x = random_vector(g);
        if (x.Q() >= -1e-3)
            continue;
        ++n;
        const UHPoint z(u(g), v(g));
        EXPECT_GT(R(x, z), 0.0);
        // the majorant 2Q + 4R is positive
        EXPECT_GT(2 * x.Q() + 4 * R(x, z), 0.0);
    }
}

TEST(R, InvariantUnderIsometries)
{
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-1, 1), v(0.3, 3);
    for (int k = 0; k < 100; ++k)
    {
        const Mat2 m = random_sl2(g);
        const Sl2Vector x = random_vector(g);
        const UHPoint z(u(g), v(g));
        const double a = R(x, z), b = R(conjugate(m, x), moebius(m, z));
        EXPECT_NEAR(a, b, 1e-10 * (1 + a));
    }
}

TEST(Xi, Examples)
{
    // scale x_i so that R = 1/(2 pi) at 2i
    const double s = std::sqrt(1.0 / (two_pi * 9.0 / 16.0));
    const UHPoint z(0, 2);
    EXPECT_NEAR(xi(s * x_i, z), beta1(1.0), 1e-14);
    EXPECT_THROW(xi(x_i, UHPoint(0, 1)), OnSingularLocus);

    // R >= 10
    const double s10 = std::sqrt(10.0 / (9.0 / 16.0));
    EXPECT_LE(xi(s10 * x_i, z), std::exp(-20 * std::numbers::pi) / (20 * std::numbers::pi));

    // logarithmic singularity at i
    for (double eps : {1e-3, 1e-4, 1e-5})
    {
        const UHPoint w(0, 1 + eps);
        const double r = R(x_i, w);
        EXPECT_LE(std::abs(xi(x_i, w) + std::log(two_pi * r) + double(euler_gamma)), 4 * two_pi * r);
    }
}

TEST(BigXi, NegativeIndexFinite)
{
    const auto r = big_xi(m2z(), -1, 1.0, UHPoint(0, 1));
    EXPECT_GT(r.value, 0.0);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GT(r.terms, 0u);
    EXPECT_LE(r.tail_bound, QuadratureSpec{}.abs_tol);
}

TEST(BigXi, TailBoundCertified)
{
    for (std::int64_t t : {-1, -2, -5, 3, 7})
        for (const UHPoint &z : {UHPoint(0.1, 1.3), UHPoint(-0.4, 0.9), UHPoint(0.25, 2.5)})
        {
            QuadratureSpec spec;
            const auto a = big_xi(m2z(), t, 1.0, z, spec);
            spec.truncation_majorant_bound = 4 * a.truncation_bound;
            const auto b = big_xi(m2z(), t, 1.0, z, spec);
            EXPECT_LE(std::abs(a.value - b.value), a.tail_bound) << "t=" << t;
            EXPECT_GE(b.terms, a.terms);
        }
}

TEST(BigXi, SelfConvergence)
{
    QuadratureSpec spec;
    const auto a = big_xi(m2z(), -1, 1.0, UHPoint(0, 1), spec);
    spec.truncation_majorant_bound *= 2;
    const auto b = big_xi(m2z(), -1, 1.0, UHPoint(0, 1), spec);
    EXPECT_LE(std::abs(a.value - b.value), spec.abs_tol);
}

TEST(BigXi, ModularInvariance)
{
    const QuadratureSpec spec;
    for (std::int64_t t : {-1, -3, 2, 5})
        for (const Complex z : {Complex(0.3, 1.1), Complex(-0.2, 0.7), Complex(0.45, 1.9)})
        {
            const Complex w = -1.0 / z;
            const auto a = big_xi(m2z(), t, 1.3, UHPoint(z.real(), z.imag()), spec);
            const auto b = big_xi(m2z(), t, 1.3, UHPoint::from_complex(w), spec);
            EXPECT_NEAR(a.value, b.value, 2 * spec.abs_tol) << "t=" << t;
            // translation z -> z + 1
            const auto c = big_xi(m2z(), t, 1.3, UHPoint(z.real() + 1, z.imag()), spec);
            EXPECT_NEAR(a.value, c.value, 2 * spec.abs_tol) << "t=" << t;
        }
}

TEST(BigXi, Errors)
{
    EXPECT_THROW(big_xi(m2z(), 1, 1.0, UHPoint(0, 1)), SingularEvaluation);
    EXPECT_THROW(big_xi(m2z(), 0, 1.0, UHPoint(0, 1)), PreconditionViolation);
    EXPECT_THROW(big_xi(m2z(), -1, 0.0, UHPoint(0, 1)), PreconditionViolation);
    const auto lip = trace_zero_lattice(load_order(data_dir + "/orders/lipschitz.json"));
    EXPECT_THROW(big_xi(lip, -1, 1.0, UHPoint(0, 1)), PreconditionViolation);
}

TEST(Ddc, PartialsMatchFiniteDifferences)
{
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-1, 1), v(0.5, 2);
    const double h = 1e-4;
    for (int k = 0; k < 20; ++k)
    {
        const Sl2Vector x = random_vector(g);
        const UHPoint z(u(g), v(g));
        const auto d = r_partials(x, z);
        auto Rat = [&](double du, double dv) { return R(x, UHPoint(z.u + du, z.v + dv)); };
        const double scale = 1 + std::abs(d.R);
        EXPECT_NEAR(d.Ru, (Rat(h, 0) - Rat(-h, 0)) / (2 * h), 1e-6 * scale);
        EXPECT_NEAR(d.Rv, (Rat(0, h) - Rat(0, -h)) / (2 * h), 1e-6 * scale);
        EXPECT_NEAR(d.Ruu, (Rat(h, 0) - 2 * d.R + Rat(-h, 0)) / (h * h), 1e-4 * scale);
        EXPECT_NEAR(d.Rvv, (Rat(0, h) - 2 * d.R + Rat(0, -h)) / (h * h), 1e-4 * scale);
    }
}

TEST(Ddc, MatchesFiniteDifferenceLaplacian)
{
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u(-1, 1), v(0.5, 2);
    const double h = 1e-4;
    int n = 0;
    while (n < 20)
    {
        const Sl2Vector x = random_vector(g);
        const UHPoint z(u(g), v(g));
        if (R(x, z) < 0.05)
            continue;
        ++n;
        auto f = [&](double du, double dv) { return xi(x, UHPoint(z.u + du, z.v + dv)); };
        const double lap = (f(h, 0) + f(-h, 0) + f(0, h) + f(0, -h) - 4 * f(0, 0)) / (h * h);
        const double fd = z.v * z.v / (4 * std::numbers::pi) * lap;
        const double an = ddc_xi(x, z);
        EXPECT_LE(std::abs(an - fd), 1e-5 * (1 + std::abs(an)));
        // away from D_x the smooth form is dd^c xi
        EXPECT_NEAR(omega(x, z), an, 1e-10 * (1 + std::abs(an)));
    }
    EXPECT_THROW(ddc_xi(x_i, UHPoint(0, 1)), OnSingularLocus);
}

TEST(Ddc, DecayBound)
{
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-3, 3), v(0.05, 5);
    int n = 0;
    while (n < 500)
    {
        const Sl2Vector x = random_vector(g);
        const UHPoint z(u(g), v(g));
        const double r = R(x, z);
        if (r < 5)
            continue;
        ++n;
        const double bound = (2 * std::abs(x.Q()) + 2 * r + 1 / two_pi) * std::exp(-two_pi * r);
        EXPECT_LE(std::abs(ddc_xi(x, z)), bound * (1 + 1e-12));
    }
}

TEST(Ddc, RotationSymmetryAboutCmPoint)
{
    for (double rho : {0.3, 1.0, 2.0})
    {
        const double ref = ddc_xi(x_i, detail::polar_point(UHPoint(0, 1), rho, 0.0));
        for (int k = 1; k < 16; ++k)
        {
            const double val = ddc_xi(x_i, detail::polar_point(UHPoint(0, 1), rho, two_pi * k / 16));
            EXPECT_NEAR(val, ref, 1e-12 * (1 + std::abs(ref))) << "rho=" << rho;
        }
    }
}

TEST(Omega, TotalMass)
{
    const auto a = omega_integral(x_i, UHPoint(0, 1));
    EXPECT_NEAR(a.value, 1.0, 1e-8);
    const auto b = omega_integral(x_i, UHPoint(0.3, 1.4));
    EXPECT_NEAR(b.value, 1.0, 1e-8);
    // for Q < 0 omega is constant along the geodesic D_x^perp, so the integral diverges
    const Sl2Vector neg{1.0, 0.3, 0.2};
    ASSERT_LT(neg.Q(), 0);
    EXPECT_THROW(omega_integral(neg, UHPoint(0, 1)), QuadratureFailure);
}

TEST(Lambda, RegressionAndSymmetry)
{
    const auto a = lambda_star(pair_11());
    EXPECT_NEAR(a.value, 8.07649652e-5, 1e-12);
    EXPECT_LE(a.error, 1e-8);
    const auto b = lambda_star(pair_11().swapped());
    EXPECT_LE(std::abs(a.value - b.value), a.error + b.error);
}

TEST(Lambda, RotationInvariance)
{
    for (const PairConfig &p : {pair_11(), PairConfig{{1.0, 0.3, 0.2}, {-0.4, 0.5, -1.1}}})
    {
        const auto a = lambda_star(p);
        for (double th : {0.4, 1.9, 3.3})
        {
            Eigen::Matrix2d k;
            k << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            const auto b = lambda_star(p.times(k));
            EXPECT_LE(std::abs(a.value - b.value), a.error + b.error) << "theta=" << th;
        }
    }
}

TEST(Lambda, IsometryInvariance)
{
    std::mt19937_64 g(13);
    const PairConfig p = pair_11();
    const auto a = lambda_star(p);
    for (int k = 0; k < 5; ++k)
    {
        const Mat2 m = random_sl2(g);
        const auto b = lambda_star({conjugate(m, p.x1), conjugate(m, p.x2)});
        EXPECT_LE(std::abs(a.value - b.value), a.error + b.error);
    }
}

TEST(Lambda, Errors)
{
    const Sl2Vector x{0.3, -1.0, 1.2};
    EXPECT_THROW(lambda_star({x, 2.0 * x}), SingularConfiguration);
    // isotropic x2
    EXPECT_THROW(lambda_star({x_i, Sl2Vector{0.0, 1.0, 0.0}}), PreconditionViolation);
    QuadratureSpec tight;
    tight.max_intervals = 1;
    tight.rel_tol = 1e-14;
    tight.abs_tol = 1e-16;
    EXPECT_THROW(lambda_star(pair_11(), tight), QuadratureFailure);
    QuadratureSpec bad;
    bad.singular_ball_radius = 1.5;
    EXPECT_THROW(lambda_star(pair_11(), bad), PreconditionViolation);
}

namespace
{
    // Integer g with g p_i = q_i g for both i, det g = +-1, by exact nullspace.
    bool equivalent(const SplitPair &p, const SplitPair &q)
    {
        // rows: entries of g X - Y g for X = p_i, Y = q_i, unknowns (a, b, c, d)
        std::vector<std::array<Rational, 4>> rows;
        for (int i = 0; i < 2; ++i)
        {
            const auto &X = p[i], &Y = q[i];
            const std::int64_t x11 = X.h, x12 = X.e, x21 = X.f, x22 = -X.h;
            const std::int64_t y11 = Y.h, y12 = Y.e, y21 = Y.f, y22 = -Y.h;
            // (gX)_{rc} - (Yg)_{rc}, g = [[a, b], [c, d]]
            rows.push_back({Rational(x11 - y11), Rational(x21), Rational(-y12), Rational(0)});
            rows.push_back({Rational(x12), Rational(x22 - y11), Rational(0), Rational(-y12)});
            rows.push_back({Rational(-y21), Rational(0), Rational(x11 - y22), Rational(x21)});
            rows.push_back({Rational(0), Rational(-y21), Rational(x12), Rational(x22 - y22)});
        }
        // reduced row echelon form
        int rank = 0;
        std::array<int, 4> pivot_col{-1, -1, -1, -1};
        for (int c = 0; c < 4 && rank < int(rows.size()); ++c)
        {
            int piv = -1;
            for (int r = rank; r < int(rows.size()); ++r)
                if (rows[r][c] != 0)
                {
                    piv = r;
                    break;
                }
            if (piv < 0)
                continue;
            std::swap(rows[rank], rows[piv]);
            const Rational lead = rows[rank][c];
            for (auto &e : rows[rank])
                e /= lead;
            for (int r = 0; r < int(rows.size()); ++r)
                if (r != rank && rows[r][c] != 0)
                {
                    const Rational f = rows[r][c];
                    for (int k = 0; k < 4; ++k)
                        rows[r][k] -= f * rows[rank][k];
                }
            pivot_col[rank++] = c;
        }
        if (rank != 3)
        {
            EXPECT_EQ(rank, 4) << "unexpected commutant dimension";
            return false;
        }
        int free_col = 0;
        for (int c = 0; c < 4; ++c)
            if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end())
                free_col = c;
        std::array<Rational, 4> g{};
        g[free_col] = 1;
        for (int r = 0; r < 3; ++r)
            g[pivot_col[r]] = -rows[r][free_col];
        // primitive integer vector
        Integer l = 1;
        for (auto &e : g)
            l = boost::multiprecision::lcm(l, denominator(e));
        Integer gc = 0;
        std::array<Integer, 4> gi;
        for (int k = 0; k < 4; ++k)
        {
            gi[k] = numerator(g[k] * Rational(l));
            gc = boost::multiprecision::gcd(gc, gi[k]);
        }
        for (auto &e : gi)
            e /= gc;
        const Integer det = gi[0] * gi[3] - gi[1] * gi[2];
        return det == 1 || det == -1;
    }
} // namespace

TEST(ZHat, OrbitRepresentativesIndependentCheck)
{
    const auto &L = m2z();
    const SplitModel model(L);
    for (const IntSym2 &T : {IntSym2{1, 0, -1}, IntSym2{2, 1, -1}, IntSym2{-1, 2, -1}, IntSym2{-1, 0, -1},
                             IntSym2{-2, 1, -4}, IntSym2{3, 0, -1}})
    {
        const auto reps = pair_orbit_representatives(L, T);
        ASSERT_FALSE(reps.empty());
        for (std::size_t i = 0; i < reps.size(); ++i)
        {
            EXPECT_EQ(reps[i][0].Q(), T.t1);
            EXPECT_EQ(reps[i][1].Q(), T.t2);
            for (std::size_t j = i + 1; j < reps.size(); ++j)
                EXPECT_FALSE(equivalent(reps[i], reps[j])) << "T=" << T.t1 << "," << T.m << "," << T.t2;
        }
        // every pair in a wide window is equivalent to exactly one representative
        const double bound = 6 * (std::abs(T.t1) + std::abs(T.t2)) + 30;
        std::vector<SplitVector> A1, A2;
        for (const auto &x : enumerate_by_majorant(L, UHPoint(0, 1), bound))
        {
            if (L.Q(x) == T.t1)
                A1.push_back(model.to_split(x));
            if (L.Q(x) == T.t2)
                A2.push_back(model.to_split(x));
        }
        int checked = 0;
        for (const auto &x1 : A1)
            for (const auto &x2 : A2)
            {
                if (-2 * x1.h * x2.h - (x1.e * x2.f + x1.f * x2.e) != 2 * T.m || checked >= 150)
                    continue;
                ++checked;
                int hits = 0;
                for (const auto &r : reps)
                    hits += equivalent(SplitPair{x1, x2}, r);
                EXPECT_EQ(hits, 1) << "T=" << T.t1 << "," << T.m << "," << T.t2;
            }
        EXPECT_GT(checked, 0);
    }
}

TEST(ZHat, RationalObstructionGivesZero)
{
    const Eigen::Matrix2d v = Eigen::Matrix2d::Identity();
    for (const IntSym2 &T : {IntSym2{1, 0, -3}, IntSym2{-3, 0, -3}})
    {
        const auto r = z_hat_indefinite(m2z(), T, v);
        EXPECT_TRUE(r.orbits.empty());
        EXPECT_EQ(r.value, 0.0);
    }
}

TEST(ZHat, SquareRootIndependence)
{
    Eigen::Matrix2d v;
    v << 1.3, 0.4, 0.4, 0.8;
    for (const IntSym2 &T : {IntSym2{1, 0, -1}, IntSym2{-1, 0, -1}, IntSym2{2, 1, -1}})
    {
        const auto a = z_hat_indefinite(m2z(), T, v, {}, SquareRoot::symmetric);
        const auto b = z_hat_indefinite(m2z(), T, v, {}, SquareRoot::triangular);
        EXPECT_LE(std::abs(a.value - b.value), a.error + b.error);
    }
}

TEST(ZHat, StableUnderTighterTolerance)
{
    const Eigen::Matrix2d v = Eigen::Matrix2d::Identity();
    const IntSym2 T{1, 0, -1};
    QuadratureSpec fine;
    fine.rel_tol = 1e-10;
    fine.abs_tol = 1e-11;
    const auto a = z_hat_indefinite(m2z(), T, v);
    const auto b = z_hat_indefinite(m2z(), T, v, fine);
    EXPECT_TRUE(std::isfinite(a.value));
    EXPECT_LE(std::abs(a.value - b.value), a.error + b.error);
}

TEST(ZHat, Errors)
{
    const Eigen::Matrix2d v = Eigen::Matrix2d::Identity();
    EXPECT_THROW(z_hat_indefinite(m2z(), IntSym2{1, 0, 1}, v), PreconditionViolation);
    EXPECT_THROW(z_hat_indefinite(m2z(), IntSym2{1, 1, 1}, v), SingularConfiguration);
    Eigen::Matrix2d bad;
    bad << 1, 2, 2, 1;
    EXPECT_THROW(z_hat_indefinite(m2z(), IntSym2{1, 0, -1}, bad), PreconditionViolation);
    const auto d6 = trace_zero_lattice(load_order(data_dir + "/orders/d6.json"));
    EXPECT_THROW(z_hat_indefinite(d6, IntSym2{1, 0, -1}, v), UnsupportedDiscriminant);
}

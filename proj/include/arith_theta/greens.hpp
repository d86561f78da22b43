#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "geometry.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace arith_theta
{
    struct QuadratureSpec
    {
        double rel_tol = 1e-8;
        double abs_tol = 1e-9;
        // bilinear-scale majorant radius for the truncated sums; doubled on demand
        double truncation_majorant_bound = 64.0;
        double singular_ball_radius = 0.25;
        int max_intervals = 2000;
        int max_periodic_points = 1 << 14;
        double singular_floor = 1e-14;

        void validate() const
        {
            if (!(rel_tol > 0 && abs_tol > 0 && truncation_majorant_bound > 0 && singular_ball_radius > 0 &&
                  singular_floor > 0 && max_intervals > 0 && max_periodic_points > 0))
                throw PreconditionViolation("quadrature parameters must be positive");
            if (!(singular_ball_radius < 1.0))
                throw PreconditionViolation("singular_ball_radius must be < 1");
        }
    };

    struct NumericResult
    {
        double value = 0.0;
        double error = 0.0;
    };

    constexpr double two_pi = 2.0 * std::numbers::pi;

    // Green function beta_1(2 pi R(x,z)); logarithmic along D_x.
    inline double xi(const Sl2Vector &x, const UHPoint &z, double singular_floor = 1e-14)
    {
        const double r = R(x, z);
        if (r < singular_floor)
            {
            char buf[64];
            std::snprintf(buf, sizeof buf, "R(x,z) = %.3e below the singular floor", r);
            throw OnSingularLocus(buf);
        }
        return beta1(two_pi * r);
    }

    // Smooth (1,1)-form: density against du dv / v^2 of dd^c xi + delta_{D_x}.
    inline double omega(const Sl2Vector &x, const UHPoint &z)
    {
        const double r = R(x, z);
        return std::exp(-two_pi * r) * (2.0 * (x.Q() + r) - 1.0 / two_pi);
    }

    struct RPartials
    {
        double R, Ru, Rv, Ruu, Rvv;
    };

    inline RPartials r_partials(const Sl2Vector &x, const UHPoint &z)
    {
        const Complex w = z.z();
        const Complex P = pairing_with_section(x, w);
        const Complex P1 = 2.0 * x.f * w - 2.0 * x.h;
        const Complex P2 = 2.0 * x.f;
        const Complex I(0.0, 1.0);
        const double v = z.v;
        const double N = std::norm(P);
        const double Nu = 2.0 * std::real(std::conj(P) * P1);
        const double Nv = 2.0 * std::real(std::conj(P) * I * P1);
        const double Nuu = 2.0 * (std::norm(P1) + std::real(std::conj(P) * P2));
        const double Nvv = 2.0 * (std::norm(P1) - std::real(std::conj(P) * P2));
        const double v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
        return {N / (4.0 * v2), Nu / (4.0 * v2), Nv / (4.0 * v2) - N / (2.0 * v3), Nuu / (4.0 * v2),
                Nvv / (4.0 * v2) - Nv / v3 + 1.5 * N / v4};
    }

    // dd^c xi(x, .) at z, as a density against du dv / v^2, by the chain rule on
    // beta_1(2 pi R). dd^c = (1/4 pi) Laplacian du ^ dv.
    inline double ddc_xi(const Sl2Vector &x, const UHPoint &z, double singular_floor = 1e-14)
    {
        const auto d = r_partials(x, z);
        if (d.R < singular_floor)
            throw OnSingularLocus("ddc_xi evaluated on D_x");
        const double r = two_pi * d.R;
        const double e = std::exp(-r);
        const double grad2 = d.Ru * d.Ru + d.Rv * d.Rv;
        const double lap = e * (1.0 / r + 1.0 / (r * r)) * two_pi * two_pi * grad2 - e / r * two_pi * (d.Ruu + d.Rvv);
        return z.v * z.v / (4.0 * std::numbers::pi) * lap;
    }

    struct XiSum
    {
        double value = 0.0;
        double tail_bound = 0.0;
        double truncation_bound = 0.0;
        std::size_t terms = 0;
    };

    namespace detail
    {
        // Certified bound for sum_{x in L(t), (x,x)_z > B} beta_1(2 pi v R(x,z)),
        // using (x,x)_z = 2t + 4R, beta_1(y) < e^{-y}/y and dyadic shells.
        inline double xi_tail_bound(const Eigen::Matrix3d &G, double B, double t, double v)
        {
            if (B <= 2.0 * t)
                return std::numeric_limits<double>::infinity();
            CompensatedSum sum;
            for (int k = 0; k < 200; ++k)
            {
                const double s = B * std::ldexp(1.0, k);
                const double y = two_pi * v * (s - 2.0 * t) / 4.0;
                if (y <= 0.0)
                    return std::numeric_limits<double>::infinity();
                const double term = point_count_bound(G, 2.0 * s) * std::exp(-y) / y;
                sum.add(term);
                if (k > 0 && term < 1e-300)
                    break;
            }
            return sum.value();
        }
    } // namespace detail

    // Xi(t,v)(z) = sum_{x in L(t)} beta_1(2 pi v R(x,z)), truncated in the majorant
    // at z with a certified tail below abs_tol.
    inline XiSum big_xi(const TraceZeroLattice &L, std::int64_t t, double v, const UHPoint &z,
                        const QuadratureSpec &spec = {})
    {
        spec.validate();
        if (L.is_definite())
            throw PreconditionViolation("big_xi needs an indefinite lattice");
        if (t == 0)
            throw PreconditionViolation("big_xi needs t != 0");
        if (!(v > 0))
            throw PreconditionViolation("big_xi needs v > 0");
        const Eigen::Matrix3d G = majorant(L, z);
        double B = spec.truncation_majorant_bound;
        double tail = detail::xi_tail_bound(G, B, double(t), v);
        while (tail > spec.abs_tol)
        {
            B *= 2.0;
            tail = detail::xi_tail_bound(G, B, double(t), v);
        }
        XiSum out;
        out.truncation_bound = B;
        out.tail_bound = tail;
        CompensatedSum sum;
        for (const auto &x : enumerate_by_majorant(L, z, B))
        {
            if (L.Q(x) != t)
                continue;
            const double r = R(L.real(x), z);
            if (r < spec.singular_floor)
                throw SingularEvaluation("z lies on D_x for x with Q(x) = " + std::to_string(t));
            sum.add(beta1(two_pi * v * r));
            ++out.terms;
        }
        out.value = sum.value();
        return out;
    }

    // A pair x = (x1, x2) in V(R)^2 with T = Q(x) = (1/2)((x_i, x_j)).
    struct PairConfig
    {
        Sl2Vector x1, x2;

        Eigen::Matrix2d T() const
        {
            Eigen::Matrix2d t;
            t << half_pairing(x1, x1), half_pairing(x1, x2), half_pairing(x2, x1), half_pairing(x2, x2);
            return t;
        }

        // x . a = (a11 x1 + a21 x2, a12 x1 + a22 x2)
        PairConfig times(const Eigen::Matrix2d &a) const
        {
            return {a(0, 0) * x1 + a(1, 0) * x2, a(0, 1) * x1 + a(1, 1) * x2};
        }

        PairConfig swapped() const { return {x2, x1}; }
    };

    // Positive unit vector whose point minimizes R(x1,.) + R(x2,.), for
    // nonsingular T of signature (1,1) or (0,2); returns its point in the upper sheet.
    inline UHPoint pair_center(const PairConfig &pair)
    {
        const Eigen::Matrix2d T = pair.T();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(T);
        const double lmax = es.eigenvalues()(1);
        if (lmax > 0)
        {
            const Eigen::Vector2d c = es.eigenvectors().col(1) / std::sqrt(lmax);
            return cm_point(c(0) * pair.x1 + c(1) * pair.x2);
        }
        // U negative definite: the positive line is U^perp. With B = -h h' - (e f' + f e')/2
        // the orthogonal complement is G^{-1} (x1 x x2), G = gram of B in (h,e,f).
        const Eigen::Vector3d a(pair.x1.h, pair.x1.e, pair.x1.f), b(pair.x2.h, pair.x2.e, pair.x2.f);
        Eigen::Matrix3d G;
        G << -1, 0, 0, 0, 0, -0.5, 0, -0.5, 0;
        const Eigen::Vector3d y = G.inverse() * a.cross(b);
        return cm_point(Sl2Vector{y(0), y(1), y(2)});
    }

    namespace detail
    {
        // Point at hyperbolic distance rho from c in direction theta.
        inline UHPoint polar_point(const UHPoint &c, double rho, double theta)
        {
            const Complex zeta = std::tanh(0.5 * rho) * std::polar(1.0, theta);
            const Complex w = Complex(0.0, 1.0) * (1.0 + zeta) / (1.0 - zeta);
            return {c.u + c.v * w.real(), c.v * w.imag(), 1};
        }

        // Unit positive vector u_c with point c, and an orthonormal pair n1, n2
        // (Q = -1) spanning u_c^perp; the geodesic from c in direction theta is
        // u(rho) = cosh rho u_c + sinh rho (cos theta n1 + sin theta n2) up to the
        // orientation of theta, which the bound below does not need.
        struct Frame
        {
            Sl2Vector u, n1, n2;
        };

        inline Frame frame_at(const UHPoint &c)
        {
            // at i: u = [[0,-1],[1,0]], n1 = diag(1,-1), n2 = [[0,1],[1,0]]; move by
            // g = [[sqrt v, u/sqrt v], [0, 1/sqrt v]] which sends i to c.
            const double s = std::sqrt(c.v);
            const Mat2 g{s, c.u / s, 0.0, 1.0 / s};
            return {conjugate(g, Sl2Vector{0, -1, 1}), conjugate(g, Sl2Vector{1, 0, 0}),
                    conjugate(g, Sl2Vector{0, 1, 1})};
        }

        // kappa_min = min_theta sum_i (a_i - b_i cos theta - c_i sin theta)^2 with
        // a_i = B(x_i,u), b_i, c_i = -B(x_i,n_k); then
        // sum_i Q_z(x_i) >= e^{2 rho} kappa_min / 2 at distance rho from c.
        inline double kappa_min(const PairConfig &pair, const Frame &f)
        {
            std::array<std::array<double, 3>, 2> abc{};
            const Sl2Vector xs[2] = {pair.x1, pair.x2};
            double curvature = 0.0;
            for (int i = 0; i < 2; ++i)
            {
                abc[i] = {half_pairing(xs[i], f.u), -half_pairing(xs[i], f.n1), -half_pairing(xs[i], f.n2)};
                const double h = std::hypot(abc[i][1], abc[i][2]);
                curvature += 2.0 * h * h + 2.0 * (std::abs(abc[i][0]) + h) * h;
            }
            const int n = 8192;
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; ++k)
            {
                const double th = two_pi * k / n;
                double kap = 0;
                for (int i = 0; i < 2; ++i)
                {
                    const double d = abc[i][0] - abc[i][1] * std::cos(th) - abc[i][2] * std::sin(th);
                    kap += d * d;
                }
                best = std::min(best, kap);
            }
            // kappa'(theta*) = 0 at the minimum, so the nearest grid value exceeds it by
            // at most curvature * (pi / n)^2 / 2
            const double step = std::numbers::pi / n;
            return std::max(0.0, best - 0.5 * curvature * step * step);
        }
    } // namespace detail

    // Lambda(x) = int_D xi(x1) * xi(x2): delta term xi(x1)(z_{x2}) when Q(x2) > 0,
    // plus the integral of omega(x1) xi(x2) over both sheets. The integral is taken
    // in geodesic polar coordinates about the singular point of xi(x2) (or the
    // minimum of R(x1,.) + R(x2,.) when there is none), so no excision is needed;
    // the radial variable is squared near the center to absorb the log.
    inline NumericResult lambda_star(const PairConfig &pair, const QuadratureSpec &spec = {})
    {
        spec.validate();
        const Eigen::Matrix2d T = pair.T();
        const double q1 = T(0, 0), q2 = T(1, 1);
        const double scale = std::max({std::abs(q1), std::abs(q2), std::abs(T(0, 1)), 1e-300});
        if (std::abs(T.determinant()) <= 1e-12 * scale * scale)
            throw SingularConfiguration("Q(x) is singular: D_x1 and D_x2 are not disjoint");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(T);
        if (es.eigenvalues()(0) > 0)
            throw PreconditionViolation("lambda_star needs T of signature (1,1) or (0,2)");
        if (q1 == 0.0 || q2 == 0.0)
            throw PreconditionViolation("lambda_star needs Q(x1) != 0 and Q(x2) != 0");

        UHPoint center;
        if (q2 > 0)
            center = cm_point(pair.x2);
        else if (q1 > 0)
            center = cm_point(pair.x1);
        else
            center = pair_center(pair);

        // tail: beyond rho, R1 + R2 >= S(rho) = (e^{2 rho} kappa / 2 - q1 - q2) / 2, and
        // |omega1 xi2| <= (2|q1| + 1 + 2S) e^{-2 pi S} log(1 + 1/(2 pi r2min)) once
        // 2 pi (2S + 2|q1| + 1) >= 2, with r2min a lower bound for R2 there.
        const detail::Frame frame = detail::frame_at(center);
        const double kappa = detail::kappa_min(pair, frame);
        if (!(kappa > 0))
            throw SingularConfiguration("degenerate pair: no decay of R(x1) + R(x2)");
        const double d2 = q2 > 0 ? hyperbolic_distance(center, cm_point(pair.x2)) : 0.0;
        auto tail_density = [&](double rho) {
            const double S = (0.5 * std::exp(2.0 * rho) * kappa - q1 - q2) / 2.0;
            if (S <= 1.0 / two_pi)
                return std::numeric_limits<double>::infinity();
            double r2min = q2 < 0 ? -q2 : q2 * std::pow(std::sinh(std::max(0.0, rho - d2)), 2);
            if (!(r2min > 0))
                return std::numeric_limits<double>::infinity();
            const double bound = (2.0 * std::abs(q1) + 1.0 + 2.0 * S) * std::exp(-two_pi * S) *
                                 std::log1p(1.0 / (two_pi * r2min));
            // integral over [rho, inf) x [0, 2 pi] in sinh(rho) d rho d theta; the
            // density decays at least like e^{-pi e^{2 rho} kappa / 2}, whose log-derivative
            // exceeds pi kappa e^{2 rho} - 1 > 1 once S > 1/(2 pi)
            const double rate = std::max(1.0, std::numbers::pi * kappa * std::exp(2.0 * rho) - 1.0);
            return two_pi * std::sinh(rho) * std::cosh(rho) * bound / rate;
        };
        double rho_max = spec.singular_ball_radius;
        const double tail_budget = 0.05 * spec.abs_tol;
        while (!(tail_density(rho_max) <= tail_budget))
        {
            rho_max += 0.05;
            if (rho_max > 40.0)
                throw QuadratureFailure("could not bound the integrand tail");
        }
        const double tail = tail_density(rho_max);

        double inner_err = 0.0;
        const double inner_abs = spec.abs_tol * 1e-2 / (two_pi * std::max(1.0, rho_max));
        auto ring = [&](double rho) {
            const auto res = integrate_periodic(
                [&](double th) {
                    const UHPoint z = detail::polar_point(center, rho, th);
                    const double r2 = R(pair.x2, z);
                    if (r2 <= 0.0)
                        return 0.0;
                    return omega(pair.x1, z) * beta1(two_pi * r2);
                },
                two_pi, inner_abs, spec.rel_tol * 1e-2, spec.max_periodic_points);
            inner_err = std::max(inner_err, res.error);
            return res.value;
        };

        const double rb = std::min(spec.singular_ball_radius, rho_max);
        // rho = rb s^2 on the ball
        const auto near = integrate([&](double s) { return ring(rb * s * s) * std::sinh(rb * s * s) * 2.0 * rb * s; },
                                    0.0, 1.0, 0.25 * spec.abs_tol, spec.rel_tol, spec.max_intervals);
        const auto far = integrate([&](double rho) { return ring(rho) * std::sinh(rho); }, rb, rho_max,
                                   0.25 * spec.abs_tol, spec.rel_tol, spec.max_intervals);
        if (!near.converged || !far.converged)
            throw QuadratureFailure("star-product integral did not reach tolerance within " +
                                    std::to_string(spec.max_intervals) + " panels");

        const double delta = q2 > 0 ? beta1(two_pi * R(pair.x1, cm_point(pair.x2))) : 0.0;
        NumericResult out;
        out.value = 2.0 * (delta + near.value + far.value);
        out.error = 2.0 * (near.error + far.error + tail + inner_err * std::sinh(rho_max) * rho_max +
                           std::abs(delta) * 1e-15);
        return out;
    }

    // Integral of omega(x) over the upper sheet, by the same polar scheme. Equals 1
    // for Q(x) > 0; for Q(x) < 0 omega does not decay along D_x and this throws.
    inline NumericResult omega_integral(const Sl2Vector &x, const UHPoint &center, const QuadratureSpec &spec = {})
    {
        const double q = x.Q();
        const detail::Frame f = detail::frame_at(center);
        const double a = half_pairing(x, f.u), b = half_pairing(x, f.n1), c = half_pairing(x, f.n2);
        const double kappa = std::pow(std::max(0.0, std::abs(a) - std::hypot(b, c)), 2);
        double rho_max = 1.0;
        // R >= (e^{2 rho} kappa / 2 - 2q) / 2 along every ray (single-vector case of the pair bound)
        while (true)
        {
            const double S = (0.5 * std::exp(2.0 * rho_max) * kappa - 2.0 * q) / 2.0;
            if (S > 1.0 && two_pi * std::sinh(rho_max) * std::cosh(rho_max) * (2 * std::abs(q) + 1 + 2 * S) *
                                   std::exp(-two_pi * S) <
                               1e-3 * spec.abs_tol)
                break;
            rho_max += 0.05;
            if (rho_max > 40.0)
                throw QuadratureFailure("omega_integral: no decay from this center");
        }
        const auto res = integrate(
            [&](double rho) {
                return std::sinh(rho) * integrate_periodic(
                                            [&](double th) { return omega(x, detail::polar_point(center, rho, th)); },
                                            two_pi, 1e-14, 1e-13, spec.max_periodic_points)
                                            .value;
            },
            0.0, rho_max, 0.1 * spec.abs_tol, spec.rel_tol, spec.max_intervals);
        return {res.value, res.error};
    }
} // namespace arith_theta

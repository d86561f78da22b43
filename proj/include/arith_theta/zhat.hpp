#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "greens.hpp"
#include "orbits.hpp"

namespace arith_theta
{
    // Integral symmetric T = [[t1, m], [m, t2]]; Q(x) = T means Q(x1) = t1, Q(x2) = t2
    // and (x1, x2) = 2m.
    struct IntSym2
    {
        std::int64_t t1 = 0, m = 0, t2 = 0;

        std::int64_t det() const { return t1 * t2 - m * m; }
        Eigen::Matrix2d real() const
        {
            Eigen::Matrix2d t;
            t << double(t1), double(m), double(m), double(t2);
            return t;
        }
    };

    enum class SquareRoot
    {
        symmetric,
        triangular
    };

    // a with v = a a^T: the positive square root, or the lower Cholesky factor.
    inline Eigen::Matrix2d square_root(const Eigen::Matrix2d &v, SquareRoot kind)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(v);
        if (!(es.eigenvalues()(0) > 0))
            throw PreconditionViolation("v must be positive definite");
        if (kind == SquareRoot::symmetric)
            return es.operatorSqrt();
        return Eigen::LLT<Eigen::Matrix2d>(v).matrixL();
    }

    using SplitPair = std::array<SplitVector, 2>;

    struct ZHatResult
    {
        double value = 0.0;
        double error = 0.0;
        std::vector<SplitPair> orbits;
    };

    namespace detail
    {
        inline PairConfig real_pair(const SplitPair &p) { return {p[0].real(), p[1].real()}; }

        inline bool in_closed_domain(const UHPoint &z, double tol = 1e-9)
        {
            return std::abs(z.u) <= 0.5 + tol && z.u * z.u + z.v * z.v >= 1.0 - tol;
        }

        inline std::array<std::int64_t, 6> key(const SplitPair &p)
        {
            return {p[0].h, p[0].e, p[0].f, p[1].h, p[1].e, p[1].f};
        }

        // Units of M2(Z) with entries in [-2, 2], modulo +-1.
        inline const std::vector<IntMat2> &small_units()
        {
            static const std::vector<IntMat2> units = [] {
                std::vector<IntMat2> out;
                for (std::int64_t a = -2; a <= 2; ++a)
                    for (std::int64_t b = -2; b <= 2; ++b)
                        for (std::int64_t c = -2; c <= 2; ++c)
                            for (std::int64_t d = -2; d <= 2; ++d)
                            {
                                const IntMat2 g{a, b, c, d};
                                if (g.det() != 1 && g.det() != -1)
                                    continue;
                                // keep one of g, -g: first nonzero entry positive
                                const std::int64_t first = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
                                if (first > 0)
                                    out.push_back(g);
                            }
                return out;
            }();
            return units;
        }

        // Point of the upper half-plane attached to the pair after acting by g
        // (det -1 elements are followed by complex conjugation).
        inline UHPoint act(const IntMat2 &g, const UHPoint &z)
        {
            const UHPoint w = moebius(g.real(), z);
            return {w.u, w.v, 1};
        }
    } // namespace detail

    // Representatives of the Gamma-orbits on {x in L^2 : Q(x) = T}, D(B) = 1. The
    // point z* minimizing R(x1,.) + R(x2,.) is equivariant, so every orbit meets
    // the set of pairs with z* in the closed fundamental domain; those pairs are
    // found by majorant enumeration of each component and identified by a
    // canonical lexmin image under the small units keeping z* in the domain.
    inline std::vector<SplitPair> pair_orbit_representatives(const TraceZeroLattice &L, const IntSym2 &T)
    {
        const SplitModel model(L);
        if (T.det() == 0)
            throw SingularConfiguration("T is singular");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(T.real());
        const double l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
        if (l0 > 0)
            throw PreconditionViolation("T must have signature (1,1) or (0,2)");
        // min of R1 + R2: -lambda_min for (1,1), -tr T for (0,2)
        const double fmin = l1 > 0 ? -l0 : -(l0 + l1);
        const double tau = std::max({double(T.t1), double(T.t2), 0.0});
        const double lo = std::sqrt(3.0) / 2.0;
        const double vmax = std::max(lo, std::sqrt(2.0 * (tau + 2.0 * fmin)));
        const double y0 = std::sqrt(lo * vmax);
        double cosh_d = 1.0;
        for (double v : {lo, vmax})
            cosh_d = std::max(cosh_d, 1.0 + (0.25 + (v - y0) * (v - y0)) / (2.0 * v * y0));
        const double e2d = std::exp(2.0 * std::acosh(cosh_d));
        const UHPoint z0(0.0, y0);

        auto component = [&](std::int64_t t) {
            std::vector<SplitVector> out;
            const double bound = 2.0 * (double(t) + 2.0 * fmin) * e2d * (1.0 + 1e-9) + 1e-9;
            if (bound <= 0)
                return out;
            for (const auto &x : enumerate_by_majorant(L, z0, bound))
                if (L.Q(x) == t)
                    out.push_back(model.to_split(x));
            return out;
        };
        const auto A1 = component(T.t1);
        const auto A2 = component(T.t2);

        std::map<std::array<std::int64_t, 6>, SplitPair> classes;
        for (const auto &x1 : A1)
            for (const auto &x2 : A2)
            {
                // (x1, x2) = -2 h h' - (e f' + f e')
                if (-2 * x1.h * x2.h - (x1.e * x2.f + x1.f * x2.e) != 2 * T.m)
                    continue;
                const SplitPair p{x1, x2};
                const UHPoint z = pair_center(detail::real_pair(p));
                if (!detail::in_closed_domain(z, 1e-7))
                    continue;
                auto best = detail::key(p);
                SplitPair best_pair = p;
                for (const auto &g : detail::small_units())
                {
                    if (!detail::in_closed_domain(detail::act(g, z), 1e-7))
                        continue;
                    const SplitPair q{conjugate(g, x1), conjugate(g, x2)};
                    const auto k = detail::key(q);
                    if (k < best)
                    {
                        best = k;
                        best_pair = q;
                    }
                }
                classes.emplace(best, best_pair);
            }
        std::vector<SplitPair> reps;
        for (auto &[k, p] : classes)
            reps.push_back(p);
        return reps;
    }

    // Archimedean part of Z^(T, v) for nonsingular T of signature (1,1) or (0,2):
    // sum over Gamma-orbits of pairs x with Q(x) = T of Lambda(x a), v = a a^T.
    inline ZHatResult z_hat_indefinite(const TraceZeroLattice &L, const IntSym2 &T, const Eigen::Matrix2d &v,
                                       const QuadratureSpec &spec = {}, SquareRoot kind = SquareRoot::symmetric)
    {
        const Eigen::Matrix2d a = square_root(v, kind);
        ZHatResult out;
        out.orbits = pair_orbit_representatives(L, T);
        CompensatedSum sum, err;
        for (const auto &p : out.orbits)
        {
            const auto r = lambda_star(detail::real_pair(p).times(a), spec);
            sum.add(r.value);
            err.add(r.error);
        }
        out.value = sum.value();
        out.error = err.value();
        return out;
    }
} // namespace arith_theta

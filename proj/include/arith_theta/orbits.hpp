#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "hurwitz.hpp"
#include "lattice.hpp"

namespace arith_theta
{
    // Integer trace-zero matrix [[h, e], [f, -h]]: an element of L for D(B) = 1
    // in the split model, det = -h^2 - e f = Q.
    struct SplitVector
    {
        std::int64_t h = 0, e = 0, f = 0;

        std::int64_t Q() const { return -h * h - e * f; }
        Sl2Vector real() const { return {double(h), double(e), double(f)}; }
        friend auto operator<=>(const SplitVector &, const SplitVector &) = default;
    };

    // Integer 2x2 matrix; the unit group acts on L by conjugation.
    struct IntMat2
    {
        std::int64_t a = 1, b = 0, c = 0, d = 1;

        std::int64_t det() const { return a * d - b * c; }
        Mat2 real() const { return {double(a), double(b), double(c), double(d)}; }
    };

    // g x g^{-1} for det g = +-1.
    inline SplitVector conjugate(const IntMat2 &g, const SplitVector &x)
    {
        const std::int64_t dt = g.det();
        if (dt != 1 && dt != -1)
            throw PreconditionViolation("conjugation by a non-unit");
        // g^{-1} = dt * [[d, -b], [-c, a]]
        const std::int64_t m11 = g.a * x.h + g.b * x.f, m12 = g.a * x.e - g.b * x.h;
        const std::int64_t m21 = g.c * x.h + g.d * x.f, m22 = g.c * x.e - g.d * x.h;
        const std::int64_t r11 = dt * (m11 * g.d - m12 * g.c);
        const std::int64_t r12 = dt * (-m11 * g.b + m12 * g.a);
        const std::int64_t r21 = dt * (m21 * g.d - m22 * g.c);
        return {r11, r12, r21};
    }

    // Exact identification of a D(B) = 1 lattice with the trace-zero integer
    // matrices via the real embedding; the lattice must be the full sl2(Z).
    class SplitModel
    {
    public:
        explicit SplitModel(const TraceZeroLattice &L) : L_(&L)
        {
            if (L.discriminant() != 1 || L.is_definite())
                throw UnsupportedDiscriminant("orbit machinery needs D(B) = 1, got D(B) = " +
                                              std::to_string(L.discriminant()));
            const auto &rb = L.real_basis();
            for (int k = 0; k < 3; ++k)
            {
                const double vals[3] = {rb[k].h, rb[k].e, rb[k].f};
                for (int r = 0; r < 3; ++r)
                {
                    to_split_[r][k] = std::llround(vals[r]);
                    if (std::abs(vals[r] - double(to_split_[r][k])) > 1e-12)
                        throw UnsupportedDiscriminant("lattice basis is not integral in the split model");
                }
            }
            // inverse by adjugate; must be unimodular
            const auto &m = to_split_;
            const std::int64_t det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            if (det != 1 && det != -1)
                throw UnsupportedDiscriminant("lattice is a proper sublattice of sl2(Z)");
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                {
                    const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
                    from_split_[r][c] = det * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]);
                }
        }

        SplitVector to_split(const LatticeVector &x) const
        {
            std::array<std::int64_t, 3> s{};
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k)
                    s[r] += to_split_[r][k] * x.coords[k];
            return {s[0], s[1], s[2]};
        }

        LatticeVector from_split(const SplitVector &x) const
        {
            const std::array<std::int64_t, 3> s{x.h, x.e, x.f};
            LatticeVector out;
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k)
                    out.coords[r] += from_split_[r][k] * s[k];
            return out;
        }

        const TraceZeroLattice &lattice() const { return *L_; }

    private:
        const TraceZeroLattice *L_;
        std::array<std::array<std::int64_t, 3>, 3> to_split_{};
        std::array<std::array<std::int64_t, 3>, 3> from_split_{};
    };

    // CM point of x with f > 0 lies in the half-open fundamental domain
    // -1/2 <= u < 1/2, |z| >= 1, u <= 0 on the unit circle. Exact in integers:
    // u = h/f, |z|^2 = -e/f.
    inline bool cm_point_in_fundamental_domain(const SplitVector &x)
    {
        if (x.f <= 0 || x.Q() <= 0)
            return false;
        if (!(-x.f <= 2 * x.h && 2 * x.h < x.f))
            return false;
        if (-x.e < x.f)
            return false;
        if (-x.e == x.f && x.h > 0)
            return false;
        return true;
    }

    // Order of the stabilizer of x in PSL2(Z) = Gamma / center. Stabilizers of
    // points in the closed fundamental domain have entries in {-1,0,1}.
    inline int stabilizer_order(const SplitVector &x)
    {
        int n = 0;
        for (std::int64_t a = -1; a <= 1; ++a)
            for (std::int64_t b = -1; b <= 1; ++b)
                for (std::int64_t c = -1; c <= 1; ++c)
                    for (std::int64_t d = -1; d <= 1; ++d)
                    {
                        const IntMat2 g{a, b, c, d};
                        if (g.det() == 1 && conjugate(g, x) == x)
                            ++n;
                    }
        return n / 2;
    }

    struct EnumerationCenter
    {
        UHPoint z;
        double bound;
    };

    // Center i y0 and bilinear majorant bound covering every x in L(t) whose CM
    // point lies in the closed fundamental domain: (x,x)_z0 = 2 t cosh(2 d(z0, z_x)),
    // and z_x has |u| <= 1/2, sqrt(3)/2 <= v <= sqrt(t).
    inline EnumerationCenter fundamental_domain_center(double t)
    {
        const double lo = std::sqrt(3.0) / 2.0, hi = std::max(std::sqrt(t), lo);
        const double y0 = std::sqrt(lo * hi);
        double cosh_d = 1.0;
        for (double v : {lo, hi})
            cosh_d = std::max(cosh_d, 1.0 + (0.25 + (v - y0) * (v - y0)) / (2.0 * v * y0));
        return {UHPoint(0.0, y0), 2.0 * t * (2.0 * cosh_d * cosh_d - 1.0) * (1.0 + 1e-9) + 1e-9};
    }

    // Representatives of the Gamma-orbits on L(t), t >= 1, with f > 0 and CM point
    // in the half-open fundamental domain, found by majorant enumeration in L.
    inline std::vector<SplitVector> orbit_representatives(const SplitModel &model, std::int64_t t)
    {
        if (t < 1)
            throw PreconditionViolation("orbit_representatives needs t >= 1");
        const auto &L = model.lattice();
        std::vector<SplitVector> reps;
        const auto center = fundamental_domain_center(double(t));
        for (const auto &x : enumerate_by_majorant(L, center.z, center.bound))
        {
            if (L.Q(x) != t)
                continue;
            const SplitVector s = model.to_split(x);
            if (cm_point_in_fundamental_domain(s))
                reps.push_back(s);
        }
        std::sort(reps.begin(), reps.end());
        return reps;
    }

    // Orbifold degree of Z(t): sum over Gamma-orbits on L(t) of 1/|stabilizer|.
    // The det -1 units swap the two sheets, so orbits on all of L(t) match
    // PSL2(Z)-orbits on the f > 0 half.
    inline Rational weighted_orbit_degree(const TraceZeroLattice &L, std::int64_t t)
    {
        const SplitModel model(L);
        Rational deg = 0;
        for (const auto &x : orbit_representatives(model, t))
            deg += Rational(1, stabilizer_order(x));
        return deg;
    }
} // namespace arith_theta

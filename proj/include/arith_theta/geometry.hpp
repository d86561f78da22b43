#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace arith_theta
{
    using Complex = std::complex<double>;

    // A point of the symmetric space: two copies of the upper half-plane. The
    // point is stored by its upper half-plane coordinate u + iv; sheet = -1 marks
    // the conjugate copy.
    struct UHPoint
    {
        double u = 0.0;
        double v = 1.0;
        int sheet = 1;

        UHPoint() = default;
        UHPoint(double u_, double v_, int sheet_ = 1) : u(u_), v(v_), sheet(sheet_)
        {
            if (!(v > 0.0) || !std::isfinite(u) || !std::isfinite(v))
                throw PreconditionViolation("UHPoint needs finite u and v > 0");
            if (sheet != 1 && sheet != -1)
                throw PreconditionViolation("UHPoint sheet must be +1 or -1");
        }

        static UHPoint from_complex(Complex z)
        {
            if (z.imag() > 0.0)
                return {z.real(), z.imag(), 1};
            if (z.imag() < 0.0)
                return {z.real(), -z.imag(), -1};
            throw PreconditionViolation("point on the real line is not in the symmetric space");
        }

        Complex z() const { return {u, v}; }
    };

    // Hyperbolic distance between upper half-plane coordinates (sheets ignored).
    inline double hyperbolic_distance(const UHPoint &a, const UHPoint &b)
    {
        const double du = a.u - b.u, dv = a.v - b.v;
        return std::acosh(1.0 + (du * du + dv * dv) / (2.0 * a.v * b.v));
    }

    // Trace-zero real 2x2 matrix [[h, e], [f, -h]]; V(R) for the split model,
    // quadratic form Q = det = -h^2 - e f.
    struct Sl2Vector
    {
        double h = 0.0;
        double e = 0.0;
        double f = 0.0;

        double Q() const { return -h * h - e * f; }

        friend Sl2Vector operator+(const Sl2Vector &x, const Sl2Vector &y) { return {x.h + y.h, x.e + y.e, x.f + y.f}; }
        friend Sl2Vector operator-(const Sl2Vector &x, const Sl2Vector &y) { return {x.h - y.h, x.e - y.e, x.f - y.f}; }
        friend Sl2Vector operator*(double s, const Sl2Vector &x) { return {s * x.h, s * x.e, s * x.f}; }
    };

    // Q-scale bilinear form B(x,y) = (x,y)/2, so B(x,x) = Q(x).
    inline double half_pairing(const Sl2Vector &x, const Sl2Vector &y)
    {
        return -x.h * y.h - 0.5 * (x.e * y.f + x.f * y.e);
    }

    // (x, w(z)) for the isotropic section w(z) = [[z, -z^2], [1, -z]].
    inline Complex pairing_with_section(const Sl2Vector &x, Complex z)
    {
        return x.f * z * z - 2.0 * x.h * z - x.e;
    }

    // |(w, conj w)| = 4 v^2 for the section above.
    inline double section_norm(double v) { return 4.0 * v * v; }

    // R(x,z) = |(x,w)|^2 / |(w, conj w)|. Independent of the sheet.
    inline double R(const Sl2Vector &x, const UHPoint &z)
    {
        return std::norm(pairing_with_section(x, z.z())) / section_norm(z.v);
    }

    // Point of D_x in the upper sheet, for Q(x) > 0.
    inline UHPoint cm_point(const Sl2Vector &x)
    {
        const double q = x.Q();
        if (!(q > 0.0))
            throw PreconditionViolation("cm_point needs Q(x) > 0");
        const double sq = std::sqrt(q);
        // roots of f z^2 - 2 h z - e: (h +- i sqrt(Q)) / f, f != 0 since Q > 0
        return {x.h / x.f, std::abs(sq / x.f), 1};
    }

    // Real 2x2 matrix [[a, b], [c, d]] acting on V by conjugation and on the
    // symmetric space by Moebius transformations.
    struct Mat2
    {
        double a = 1, b = 0, c = 0, d = 1;

        double det() const { return a * d - b * c; }
        Mat2 inverse() const
        {
            const double dt = det();
            return {d / dt, -b / dt, -c / dt, a / dt};
        }
        friend Mat2 operator*(const Mat2 &x, const Mat2 &y)
        {
            return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
        }
    };

    inline Sl2Vector conjugate(const Mat2 &g, const Sl2Vector &x)
    {
        const Mat2 m{x.h, x.e, x.f, -x.h};
        const Mat2 r = g * m * g.inverse();
        return {0.5 * (r.a - r.d), r.b, r.c};
    }

    inline UHPoint moebius(const Mat2 &g, const UHPoint &p)
    {
        const Complex z = p.sheet > 0 ? p.z() : std::conj(p.z());
        const Complex w = (g.a * z + g.b) / (g.c * z + g.d);
        return UHPoint::from_complex(w);
    }
} // namespace arith_theta

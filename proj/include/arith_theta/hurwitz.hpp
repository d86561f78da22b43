#pragma once

#include <cstdint>
#include <map>
#include <tuple>

#include "number_theory.hpp"

namespace arith_theta
{
    // Positive definite binary form a X^2 + b XY + c Y^2.
    struct BinaryForm
    {
        std::int64_t a, b, c;

        std::int64_t discriminant() const { return b * b - 4 * a * c; }
        friend auto operator<=>(const BinaryForm &, const BinaryForm &) = default;
    };

    // H(n) from reduced forms |b| <= a <= c (b >= 0 on the boundary), with
    // weight 1/2 at a = c, b = 0 and 1/3 at a = b = c. H(0) = -1/12.
    inline Rational hurwitz_class_number(std::int64_t n)
    {
        if (n < 0)
            throw PreconditionViolation("hurwitz_class_number needs n >= 0");
        if (n == 0)
            return Rational(-1, 12);
        if (n % 4 == 1 || n % 4 == 2)
            return 0;
        Rational h = 0;
        for (std::int64_t a = 1; 3 * a * a <= n; ++a)
            for (std::int64_t b = -a + 1; b <= a; ++b)
            {
                const std::int64_t num = b * b + n;
                if (num % (4 * a) != 0)
                    continue;
                const std::int64_t c = num / (4 * a);
                if (c < a || (c == a && b < 0))
                    continue;
                if (a == c && b == 0)
                    h += Rational(1, 2);
                else if (a == b && b == c)
                    h += Rational(1, 3);
                else
                    h += 1;
            }
        return h;
    }

    // Gauss reduction to the unique reduced representative of the SL2(Z) class.
    inline BinaryForm reduce_form(BinaryForm f)
    {
        if (f.a <= 0 || f.discriminant() >= 0)
            throw PreconditionViolation("reduce_form needs a positive definite form");
        while (true)
        {
            if (f.b > f.a || f.b <= -f.a)
            {
                // x -> x + k y brings b into (-a, a]
                const std::int64_t two_a = 2 * f.a;
                std::int64_t k = (f.a - f.b) / two_a;
                if (f.a - f.b < 0 && (f.a - f.b) % two_a != 0)
                    --k;
                const std::int64_t b = f.b + two_a * k;
                f.c = f.a * k * k + f.b * k + f.c;
                f.b = b;
            }
            if (f.c < f.a)
            {
                f = {f.c, -f.b, f.a};
                continue;
            }
            if ((f.c == f.a || f.b == f.a) && f.b < 0)
                f.b = -f.b;
            return f;
        }
    }

    // Number of gamma in SL2(Z) with gamma . f = f; for reduced f every automorph
    // has entries in {-1, 0, 1}, so a box of radius 2 is exhaustive.
    inline int automorph_count(const BinaryForm &f)
    {
        int n = 0;
        for (std::int64_t p = -2; p <= 2; ++p)
            for (std::int64_t q = -2; q <= 2; ++q)
                for (std::int64_t r = -2; r <= 2; ++r)
                    for (std::int64_t s = -2; s <= 2; ++s)
                    {
                        if (p * s - q * r != 1)
                            continue;
                        // f(p X + q Y, r X + s Y)
                        const std::int64_t a = f.a * p * p + f.b * p * r + f.c * r * r;
                        const std::int64_t b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s;
                        const std::int64_t c = f.a * q * q + f.b * q * s + f.c * s * s;
                        if (a == f.a && b == f.b && c == f.c)
                            ++n;
                    }
        return n;
    }

    // Independent route: every form in a box that contains all reduced forms and
    // more, reduced and deduplicated, weighted by 2 / |Aut|.
    inline Rational hurwitz_class_number_by_box(std::int64_t n)
    {
        if (n < 0)
            throw PreconditionViolation("hurwitz_class_number needs n >= 0");
        if (n == 0)
            return Rational(-1, 12);
        const std::int64_t A = isqrt(n) + 1;
        std::map<BinaryForm, int> classes;
        for (std::int64_t a = 1; a <= A; ++a)
            for (std::int64_t b = -2 * A; b <= 2 * A; ++b)
            {
                const std::int64_t num = b * b + n;
                if (num % (4 * a) != 0)
                    continue;
                const BinaryForm r = reduce_form({a, b, num / (4 * a)});
                classes.emplace(r, 0);
            }
        Rational h = 0;
        for (auto &[f, _] : classes)
            h += Rational(2, automorph_count(f));
        return h;
    }
} // namespace arith_theta

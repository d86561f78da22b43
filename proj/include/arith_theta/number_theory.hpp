#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace arith_theta
{
    using Integer = boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;

    inline Integer numerator(const Rational &q) { return boost::multiprecision::numerator(q); }
    inline Integer denominator(const Rational &q) { return boost::multiprecision::denominator(q); }

    inline bool is_integral(const Rational &q) { return denominator(q) == 1; }

    inline double to_double(const Rational &q) { return q.convert_to<double>(); }

    inline std::int64_t to_int64(const Integer &n)
    {
        if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
            throw PreconditionViolation("integer " + n.str() + " does not fit in 64 bits");
        return n.convert_to<std::int64_t>();
    }

    // Reduced fraction "p/q", or "p" when the denominator is 1.
    inline std::string to_string(const Rational &q)
    {
        if (denominator(q) == 1)
            return numerator(q).str();
        return numerator(q).str() + "/" + denominator(q).str();
    }

    // Accepts "p", "p/q", "-p/q" with optional surrounding whitespace.
    inline Rational parse_rational(const std::string &text)
    {
        auto trim = [](std::string s) {
            const auto first = s.find_first_not_of(" \t");
            const auto last = s.find_last_not_of(" \t");
            return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
        };
        const std::string s = trim(text);
        auto valid_int = [](const std::string &t) {
            if (t.empty())
                return false;
            std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
            if (i == t.size())
                return false;
            return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
        };
        const auto slash = s.find('/');
        if (slash == std::string::npos)
        {
            if (!valid_int(s))
                throw PreconditionViolation("not a rational: '" + text + "'");
            return Rational(Integer(s[0] == '+' ? s.substr(1) : s));
        }
        const std::string num = trim(s.substr(0, slash));
        const std::string den = trim(s.substr(slash + 1));
        if (!valid_int(num) || !valid_int(den))
            throw PreconditionViolation("not a rational: '" + text + "'");
        const Integer d(den[0] == '+' ? den.substr(1) : den);
        if (d == 0)
            throw PreconditionViolation("zero denominator in '" + text + "'");
        return Rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
    }

    inline std::int64_t mod(std::int64_t a, std::int64_t m)
    {
        const std::int64_t r = a % m;
        return r < 0 ? r + m : r;
    }

    inline std::int64_t isqrt(std::int64_t n)
    {
        if (n < 0)
            throw PreconditionViolation("isqrt of negative number");
        auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
        while (r * r > n)
            --r;
        while ((r + 1) * (r + 1) <= n)
            ++r;
        return r;
    }

    inline bool is_square(std::int64_t n) { return n >= 0 && isqrt(n) * isqrt(n) == n; }

    inline bool is_prime(std::int64_t n)
    {
        if (n < 2)
            return false;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    struct PrimePower
    {
        std::int64_t prime;
        int exponent;
    };

    // Trial division of |n|; n must be nonzero.
    inline std::vector<PrimePower> factor(std::int64_t n)
    {
        if (n == 0)
            throw PreconditionViolation("factor(0)");
        std::vector<PrimePower> out;
        std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
        for (std::uint64_t d = 2; d * d <= m; ++d)
        {
            if (m % d != 0)
                continue;
            int e = 0;
            while (m % d == 0)
            {
                m /= d;
                ++e;
            }
            out.push_back({static_cast<std::int64_t>(d), e});
        }
        if (m > 1)
            out.push_back({static_cast<std::int64_t>(m), 1});
        return out;
    }

    inline std::vector<std::int64_t> prime_divisors(std::int64_t n)
    {
        std::vector<std::int64_t> ps;
        for (const auto &pp : factor(n))
            ps.push_back(pp.prime);
        return ps;
    }

    inline bool is_squarefree(std::int64_t n)
    {
        if (n == 0)
            return false;
        for (const auto &pp : factor(n))
            if (pp.exponent > 1)
                return false;
        return true;
    }

    // Exponent of p in n (n != 0).
    inline int valuation(Integer n, std::int64_t p)
    {
        if (n == 0)
            throw PreconditionViolation("valuation of zero");
        int v = 0;
        while (n % p == 0)
        {
            n /= p;
            ++v;
        }
        return v;
    }

    inline int valuation(std::int64_t n, std::int64_t p) { return valuation(Integer(n), p); }

    // Squarefree s with n = s * k^2 (sign kept).
    inline std::int64_t squarefree_part(std::int64_t n)
    {
        std::int64_t s = n < 0 ? -1 : 1;
        for (const auto &pp : factor(n))
            if (pp.exponent % 2 == 1)
                s *= pp.prime;
        return s;
    }

    inline Integer pow_mod(Integer base, Integer exp, const Integer &m)
    {
        Integer result = 1;
        base %= m;
        if (base < 0)
            base += m;
        while (exp > 0)
        {
            if ((exp & 1) != 0)
                result = (result * base) % m;
            base = (base * base) % m;
            exp >>= 1;
        }
        return result;
    }

    // Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
    inline int legendre(const Integer &a, std::int64_t p)
    {
        Integer r = a % p;
        if (r < 0)
            r += p;
        if (r == 0)
            return 0;
        return pow_mod(r, Integer((p - 1) / 2), Integer(p)) == 1 ? 1 : -1;
    }

    // Kronecker symbol (d/p) for a prime p.
    inline int kronecker(std::int64_t d, std::int64_t p)
    {
        if (p == 2)
        {
            if (d % 2 == 0)
                return 0;
            const std::int64_t r = mod(d, 8);
            return (r == 1 || r == 7) ? 1 : -1;
        }
        return legendre(Integer(d), p);
    }

    // Discriminant of the imaginary quadratic field Q(sqrt(-t)), t > 0.
    inline std::int64_t fundamental_discriminant_of_minus(std::int64_t t)
    {
        if (t <= 0)
            throw PreconditionViolation("fundamental_discriminant_of_minus needs t > 0");
        const std::int64_t s = -squarefree_part(t);
        return mod(s, 4) == 1 ? s : 4 * s;
    }
} // namespace arith_theta

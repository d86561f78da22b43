#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>

#include "greens.hpp"
#include "orbits.hpp"
#include "quatalg.hpp"
#include "special.hpp"
#include "zhat.hpp"

namespace arith_theta
{
    // Configured degrees for D(B) > 1: D -> (t -> deg). Taken as given, unverified.
    using DegreeTables = std::map<std::int64_t, std::map<std::int64_t, Rational>>;

    // Generating series of deg Z^(t, v), t in [-N, N].
    struct DegreeSeries
    {
        double v = 1.0;
        std::map<std::int64_t, Rational> coefficients;
        Rational hodge_degree;

        Rational coefficient(std::int64_t t) const
        {
            auto it = coefficients.find(t);
            return it == coefficients.end() ? Rational(0) : it->second;
        }
    };

    inline DegreeSeries degree_series(const TraceZeroLattice &L, double v, std::int64_t N,
                                      const Rational &hodge_degree = Rational(1, 12), const DegreeTables &tables = {})
    {
        if (N < 0)
            throw PreconditionViolation("degree_series needs N >= 0");
        if (!(v > 0))
            throw PreconditionViolation("degree_series needs v > 0");
        DegreeSeries s{v, {}, hodge_degree};
        const std::int64_t D = L.discriminant();
        const std::map<std::int64_t, Rational> *table = nullptr;
        if (D != 1)
        {
            auto it = tables.find(D);
            if (it == tables.end())
                throw UnsupportedDiscriminant("no degree table configured for D(B) = " + std::to_string(D));
            table = &it->second;
        }
        for (std::int64_t t = -N; t < 0; ++t)
            s.coefficients[t] = 0;
        s.coefficients[0] = -hodge_degree;
        for (std::int64_t t = 1; t <= N; ++t)
        {
            if (!table)
            {
                s.coefficients[t] = weighted_orbit_degree(L, t);
                continue;
            }
            auto it = table->find(t);
            if (it == table->end())
                throw UnsupportedDiscriminant("degree table for D(B) = " + std::to_string(D) + " has no entry t = " +
                                              std::to_string(t));
            s.coefficients[t] = it->second;
        }
        return s;
    }

    // Function on the modular curve with a bound for its integral above height V
    // (hyperbolic measure, over the part of the fundamental domain with v >= V).
    struct CuspIntegrand
    {
        std::function<double(const UHPoint &)> g;
        std::function<double(double)> tail_above;
    };

    // (1/2) int_F g du dv / v^2 over the standard fundamental domain of PSL2(Z);
    // PGL2(Z) identifies the two sheets, so this is (1/2) int_{M(C)} g.
    inline NumericResult arithmetic_degree_archimedean(const CuspIntegrand &f, const QuadratureSpec &spec = {})
    {
        spec.validate();
        double V = 2.0;
        while (f.tail_above(V) > 0.25 * spec.abs_tol)
        {
            V *= 1.25;
            if (V > 1e4)
                throw QuadratureFailure("integrand does not decay at the cusp");
        }
        const double tail = f.tail_above(V);
        double inner_err = 0.0;
        // by the u -> -u symmetry of F only when g is; integrate the full width
        const auto res = integrate(
            [&](double u) {
                const double lo = std::sqrt(1.0 - u * u);
                const auto in = integrate([&](double v) { return f.g(UHPoint(u, v)) / (v * v); }, lo, V,
                                          0.01 * spec.abs_tol, 0.1 * spec.rel_tol, spec.max_intervals);
                if (!in.converged)
                    throw QuadratureFailure("inner integral over v did not converge");
                inner_err = std::max(inner_err, in.error);
                return in.value;
            },
            -0.5, 0.5, 0.25 * spec.abs_tol, spec.rel_tol, spec.max_intervals);
        if (!res.converged)
            throw QuadratureFailure("integral over the fundamental domain did not converge");
        return {0.5 * res.value, 0.5 * (res.error + inner_err + tail)};
    }

    // Xi(t, v) for t < 0 on the D(B) = 1 model as a cusp integrand. Every x in L(t)
    // has f != 0 when -t is not a square, so |(x,w)| >= |f| v^2 and R >= v^2/4; the
    // count of x with majorant <= s at height v >= 1 is at most
    // (2 sqrt(2s)/v + 1)(2 sqrt(s) + 1)(2 v sqrt(2s) + 1).
    inline CuspIntegrand big_xi_integrand(const TraceZeroLattice &L, std::int64_t t, double v,
                                          const QuadratureSpec &spec = {})
    {
        const SplitModel model(L);
        if (t >= 0)
            throw PreconditionViolation("big_xi_integrand needs t < 0");
        if (is_square(-t))
            throw QuadratureFailure("Xi(" + std::to_string(t) +
                                    ") has a non-integrable cusp: -t is a square, so L(t) meets the unipotent radical");
        CuspIntegrand f;
        const TraceZeroLattice *Lp = &L;
        f.g = [Lp, t, v, spec](const UHPoint &z) { return big_xi(*Lp, t, v, z, spec).value; };
        f.tail_above = [t, v](double V) {
            if (V < 1.0)
                return std::numeric_limits<double>::infinity();
            auto count = [](double s, double y) {
                return (2 * std::sqrt(2 * s) / y + 1) * (2 * std::sqrt(s) + 1) * (2 * y * std::sqrt(2 * s) + 1);
            };
            // sup over z with Im z = y of Xi, by dyadic shells in R starting at y^2/4
            auto sup_at = [&](double y) {
                CompensatedSum s;
                for (int k = 0; k < 200; ++k)
                {
                    const double r = y * y / 4.0 * std::ldexp(1.0, k);
                    const double q = two_pi * v * r;
                    const double term = count(double(-t) + 2.0 * 2.0 * r, y) * std::exp(-q) / q;
                    s.add(term);
                    if (term < 1e-300)
                        break;
                }
                return s.value();
            };
            // int_V^inf sup(y) dy / y^2 over |u| <= 1/2, by a left-endpoint sum on
            // unit steps (sup decays in y)
            CompensatedSum total;
            for (double y = V; y < V + 200.0; y += 1.0)
            {
                const double term = sup_at(y) / (y * y);
                total.add(term);
                if (term < 1e-300)
                    break;
            }
            return total.value();
        };
        return f;
    }

    // zeta_D(-1) = zeta(-1) prod_{p | D} (1 - p) with zeta(-1) = -1/12.
    inline Rational zeta_DB_at_minus1(std::int64_t D)
    {
        if (D < 1)
            throw PreconditionViolation("D must be positive");
        if (!is_squarefree(D))
            throw NotSquarefree(std::to_string(D) + " is not squarefree");
        Rational z(-1, 12);
        if (D > 1)
            for (auto p : prime_divisors(D))
                z *= Rational(1 - p);
        return z;
    }

    // 2 zeta'(-1)/zeta(-1) + 1 - log(4 pi) - gamma - sum_{p | D} p log p / (p - 1)
    inline long double constant_bracket(std::int64_t D)
    {
        long double b = 2.0L * zeta_prime_minus1 / (-1.0L / 12.0L) + 1.0L -
                        std::log(4.0L * std::numbers::pi_v<long double>) - euler_gamma;
        if (D > 1)
            for (auto p : prime_divisors(D))
                b -= static_cast<long double>(p) * std::log(static_cast<long double>(p)) / (p - 1);
        return b;
    }

    // c = pairing_coefficient * hodge_pairing + bracket_coefficient * bracket, from
    // (1/2) hodge_degree c = hodge_pairing - zeta_D(-1) bracket.
    struct ConstantC
    {
        Rational pairing_coefficient;
        Rational bracket_coefficient;
        long double bracket = 0;
        long double value = 0;
    };

    inline ConstantC constant_c(long double hodge_pairing, std::int64_t D, const Rational &hodge_degree)
    {
        if (hodge_degree <= 0)
            throw PreconditionViolation("hodge_degree must be positive");
        ConstantC c;
        c.pairing_coefficient = Rational(2) / hodge_degree;
        c.bracket_coefficient = -Rational(2) * zeta_DB_at_minus1(D) / hodge_degree;
        c.bracket = constant_bracket(D);
        c.value = static_cast<long double>(to_double(c.pairing_coefficient)) * hodge_pairing +
                  static_cast<long double>(to_double(c.bracket_coefficient)) * c.bracket;
        return c;
    }

    // ord_p(t) >= 2 and no prime l | D, l != p, splits in Q(sqrt(-t)).
    inline bool vertical_components(std::int64_t t, std::int64_t D, std::int64_t p)
    {
        if (t <= 0)
            throw PreconditionViolation("vertical_components needs t > 0");
        if (!is_squarefree(D))
            throw NotSquarefree(std::to_string(D) + " is not squarefree");
        const auto primes = prime_divisors(D);
        if (primes.size() < 2)
            throw PreconditionViolation("vertical_components needs D(B) > 1 with an even number of primes");
        if (!is_prime(p) || D % p != 0)
            throw PreconditionViolation(std::to_string(p) + " is not a prime dividing D");
        if (valuation(t, p) < 2)
            return false;
        const std::int64_t disc = fundamental_discriminant_of_minus(t);
        for (auto l : primes)
            if (l != p && kronecker(disc, l) == 1)
                return false;
        return true;
    }

    enum class PrimeStatus
    {
        found,
        none,
        inconclusive
    };

    struct FundamentalPrime
    {
        PrimeStatus status = PrimeStatus::none;
        std::int64_t prime = 0;
    };

    namespace detail
    {
        // Primes dividing n found by trial division below limit; cofactor left over.
        inline std::pair<std::set<std::int64_t>, std::int64_t> primes_below(std::int64_t n, std::int64_t limit)
        {
            std::set<std::int64_t> ps;
            n = n < 0 ? -n : n;
            for (std::int64_t d = 2; d <= limit && d * d <= n; ++d)
                while (n % d == 0)
                {
                    ps.insert(d);
                    n /= d;
                }
            if (n > 1 && n <= limit)
            {
                ps.insert(n);
                n = 1;
            }
            else if (n > 1 && is_prime(n) && n < limit * limit)
            {
                ps.insert(n);
                n = 1;
            }
            return {ps, n};
        }
    } // namespace detail

    // The unique p such that V^(p) (trace-zero part of the twin of B at p)
    // represents T over Q. Diagonalizing T as <t1, det/t1>, V^(p) represents T iff
    // B^(p) = (-t1, -det/t1), i.e. Ram_f(-t1, -det/t1) = Ram_f(B) sym-diff {p}.
    inline FundamentalPrime fundamental_prime(const IntSym2 &T, std::int64_t D, std::int64_t scan_limit = 1000000)
    {
        if (T.t1 <= 0 || T.det() <= 0)
            throw PreconditionViolation("fundamental_prime needs T positive definite");
        if (!is_squarefree(D))
            throw NotSquarefree(std::to_string(D) + " is not squarefree");
        const Rational alpha(T.t1), beta(T.det(), T.t1);
        // the candidates are 2, the primes of D, and the primes of t1 * det
        auto [ps, rest] = detail::primes_below(T.t1, scan_limit);
        auto [qs, rest2] = detail::primes_below(T.det(), scan_limit);
        if (rest > 1 || rest2 > 1)
            return {PrimeStatus::inconclusive, 0};
        ps.insert(qs.begin(), qs.end());
        ps.insert(2);
        std::set<std::int64_t> ramB;
        if (D > 1)
            for (auto p : prime_divisors(D))
            {
                ramB.insert(p);
                ps.insert(p);
            }
        std::vector<std::int64_t> diff;
        for (auto p : ps)
        {
            const bool ramT = hilbert_symbol(-alpha, -beta, Place::prime(p)) == -1;
            if (ramT != (ramB.count(p) == 1))
                diff.push_back(p);
        }
        if (diff.size() == 1)
            return {PrimeStatus::found, diff.front()};
        return {PrimeStatus::none, 0};
    }

    // True iff p does not divide D, or p^2 does not divide every entry of T.
    inline bool is_regular(const IntSym2 &T, std::int64_t p, std::int64_t D)
    {
        const auto fp = fundamental_prime(T, D);
        if (fp.status != PrimeStatus::found || fp.prime != p)
            throw PreconditionViolation(std::to_string(p) + " is not the fundamental prime of T");
        if (D % p != 0)
            return true;
        const std::int64_t p2 = p * p;
        return !(T.t1 % p2 == 0 && T.m % p2 == 0 && T.t2 % p2 == 0);
    }

    struct CycleClassification
    {
        IntSym2 T;
        std::int64_t D = 1;
        PrimeStatus status = PrimeStatus::none;
        std::optional<std::int64_t> fundamental_prime;
        std::optional<bool> regular;
        bool supersingular_support = false;
    };

    inline CycleClassification classify(const IntSym2 &T, std::int64_t D, std::int64_t scan_limit = 1000000)
    {
        CycleClassification c;
        c.T = T;
        c.D = D;
        const auto fp = fundamental_prime(T, D, scan_limit);
        c.status = fp.status;
        if (fp.status == PrimeStatus::found)
        {
            c.fundamental_prime = fp.prime;
            c.regular = is_regular(T, fp.prime, D);
            c.supersingular_support = true;
        }
        return c;
    }
} // namespace arith_theta

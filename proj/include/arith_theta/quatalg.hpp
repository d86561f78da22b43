#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "number_theory.hpp"

namespace arith_theta
{
    // A place of Q: a finite prime, or the real place.
    class Place
    {
    public:
        static Place infinity() { return Place(0); }
        static Place prime(std::int64_t p)
        {
            if (!is_prime(p))
                throw PreconditionViolation(std::to_string(p) + " is not prime");
            return Place(p);
        }

        bool is_infinite() const { return p_ == 0; }
        std::int64_t prime_number() const { return p_; }

        std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

        friend bool operator==(const Place &, const Place &) = default;
        friend auto operator<=>(const Place &, const Place &) = default;

    private:
        explicit Place(std::int64_t p) : p_(p) {}
        std::int64_t p_;
    };

    namespace detail
    {
        // Same square class as q, as an integer: num * den.
        inline Integer square_class_integer(const Rational &q) { return numerator(q) * denominator(q); }

        inline int hilbert_symbol_integer(Integer a, Integer b, const Place &place)
        {
            if (place.is_infinite())
                return (a < 0 && b < 0) ? -1 : 1;

            const std::int64_t p = place.prime_number();
            const int alpha = valuation(a, p);
            const int beta = valuation(b, p);
            for (int k = 0; k < alpha; ++k)
                a /= p;
            for (int k = 0; k < beta; ++k)
                b /= p;

            if (p != 2)
            {
                int sign = 1;
                if ((alpha * beta) % 2 == 1 && ((p - 1) / 2) % 2 == 1)
                    sign = -sign;
                if (beta % 2 == 1)
                    sign *= legendre(a, p);
                if (alpha % 2 == 1)
                    sign *= legendre(b, p);
                return sign;
            }

            // p = 2: u, v odd units; eps(u) = (u-1)/2, omega(u) = (u^2-1)/8 (mod 2).
            auto mod8 = [](const Integer &x) {
                Integer r = x % 8;
                if (r < 0)
                    r += 8;
                return r.convert_to<int>();
            };
            const int u = mod8(a);
            const int v = mod8(b);
            auto eps = [](int x) { return ((x - 1) / 2) % 2; };
            auto omega = [](int x) { return ((x * x - 1) / 8) % 2; };
            const int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            return e % 2 == 0 ? 1 : -1;
        }
    } // namespace detail

    // (a,b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v.
    inline int hilbert_symbol(const Rational &a, const Rational &b, const Place &place)
    {
        if (a == 0 || b == 0)
            throw ZeroStructureConstant("hilbert_symbol needs nonzero arguments");
        return detail::hilbert_symbol_integer(detail::square_class_integer(a), detail::square_class_integer(b), place);
    }

    // Primes dividing 2*num(a)*den(a)*num(b)*den(b): the only finite places where
    // (a,b)_p can be -1.
    inline std::vector<std::int64_t> relevant_primes(const Rational &a, const Rational &b)
    {
        std::set<std::int64_t> ps{2};
        for (const Integer &n : {numerator(a), denominator(a), numerator(b), denominator(b)})
            for (auto p : prime_divisors(to_int64(n)))
                ps.insert(p);
        return {ps.begin(), ps.end()};
    }

    class QuaternionElement;

    // The algebra (a,b): basis 1, i, j, ij with i^2 = a, j^2 = b, ij = -ji.
    class QuaternionAlgebra
    {
    public:
        QuaternionAlgebra(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b))
        {
            if (a_ == 0 || b_ == 0)
                throw ZeroStructureConstant("quaternion algebra (" + arith_theta::to_string(a_) + ", " + arith_theta::to_string(b_) + ")");
            for (auto p : relevant_primes(a_, b_))
                if (hilbert_symbol(a_, b_, Place::prime(p)) == -1)
                    ramified_.push_back(p);
            ramified_at_infinity_ = hilbert_symbol(a_, b_, Place::infinity()) == -1;
            discriminant_ = 1;
            for (auto p : ramified_)
                discriminant_ *= p;
        }

        const Rational &a() const { return a_; }
        const Rational &b() const { return b_; }

        // Finite ramified primes, sorted.
        const std::vector<std::int64_t> &ramified_primes() const { return ramified_; }
        bool ramified_at_infinity() const { return ramified_at_infinity_; }
        std::int64_t discriminant() const { return discriminant_; }

        bool is_definite() const { return ramified_at_infinity_; }
        bool is_indefinite() const { return !ramified_at_infinity_; }

        bool is_ramified_at(const Place &v) const
        {
            if (v.is_infinite())
                return ramified_at_infinity_;
            return std::find(ramified_.begin(), ramified_.end(), v.prime_number()) != ramified_.end();
        }

        // All ramified places, the real place last.
        std::vector<Place> ramified_places() const
        {
            std::vector<Place> out;
            for (auto p : ramified_)
                out.push_back(Place::prime(p));
            if (ramified_at_infinity_)
                out.push_back(Place::infinity());
            return out;
        }

        QuaternionElement element(Rational x0, Rational x1, Rational x2, Rational x3) const;
        QuaternionElement one() const;
        QuaternionElement i() const;
        QuaternionElement j() const;
        QuaternionElement k() const;

        friend bool operator==(const QuaternionAlgebra &x, const QuaternionAlgebra &y)
        {
            return x.a_ == y.a_ && x.b_ == y.b_;
        }

        std::string to_string() const
        {
            return "(" + arith_theta::to_string(a_) + ", " + arith_theta::to_string(b_) + ")";
        }

    private:
        Rational a_, b_;
        std::vector<std::int64_t> ramified_;
        bool ramified_at_infinity_ = false;
        std::int64_t discriminant_ = 1;
    };

    inline QuaternionAlgebra make_algebra(const Rational &a, const Rational &b) { return QuaternionAlgebra(a, b); }

    class QuaternionElement
    {
    public:
        QuaternionElement(Rational a, Rational b, std::array<Rational, 4> coeffs)
            : a_(std::move(a)), b_(std::move(b)), c_(std::move(coeffs))
        {
        }

        const std::array<Rational, 4> &coefficients() const { return c_; }
        const Rational &operator[](std::size_t k) const { return c_[k]; }

        Rational trace() const { return 2 * c_[0]; }
        Rational norm() const { return c_[0] * c_[0] - a_ * c_[1] * c_[1] - b_ * c_[2] * c_[2] + a_ * b_ * c_[3] * c_[3]; }
        QuaternionElement conj() const { return {a_, b_, {c_[0], -c_[1], -c_[2], -c_[3]}}; }
        bool is_pure() const { return c_[0] == 0; }
        bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

        bool same_algebra(const QuaternionElement &o) const { return a_ == o.a_ && b_ == o.b_; }

        friend QuaternionElement operator*(const QuaternionElement &x, const QuaternionElement &y)
        {
            x.check(y);
            const auto &p = x.c_;
            const auto &q = y.c_;
            const Rational &a = x.a_;
            const Rational &b = x.b_;
            return {a, b,
                    {p[0] * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3],
                     p[0] * q[1] + p[1] * q[0] - b * p[2] * q[3] + b * p[3] * q[2],
                     p[0] * q[2] + p[2] * q[0] + a * p[1] * q[3] - a * p[3] * q[1],
                     p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1]}};
        }

        friend QuaternionElement operator+(const QuaternionElement &x, const QuaternionElement &y)
        {
            x.check(y);
            return {x.a_, x.b_, {x.c_[0] + y.c_[0], x.c_[1] + y.c_[1], x.c_[2] + y.c_[2], x.c_[3] + y.c_[3]}};
        }

        friend QuaternionElement operator-(const QuaternionElement &x, const QuaternionElement &y)
        {
            x.check(y);
            return {x.a_, x.b_, {x.c_[0] - y.c_[0], x.c_[1] - y.c_[1], x.c_[2] - y.c_[2], x.c_[3] - y.c_[3]}};
        }

        friend QuaternionElement operator*(const Rational &s, const QuaternionElement &x)
        {
            return {x.a_, x.b_, {s * x.c_[0], s * x.c_[1], s * x.c_[2], s * x.c_[3]}};
        }

        friend bool operator==(const QuaternionElement &x, const QuaternionElement &y)
        {
            return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
        }

        std::string to_string() const
        {
            return "[" + arith_theta::to_string(c_[0]) + ", " + arith_theta::to_string(c_[1]) + ", " +
                   arith_theta::to_string(c_[2]) + ", " + arith_theta::to_string(c_[3]) + "]";
        }

    private:
        void check(const QuaternionElement &o) const
        {
            if (!same_algebra(o))
                throw AlgebraMismatch("elements of different quaternion algebras");
        }

        Rational a_, b_;
        std::array<Rational, 4> c_;
    };

    // Bilinear form attached to the reduced norm: (x,y) = nu(x+y) - nu(x) - nu(y).
    inline Rational norm_pairing(const QuaternionElement &x, const QuaternionElement &y)
    {
        return (x + y).norm() - x.norm() - y.norm();
    }

    inline QuaternionElement QuaternionAlgebra::element(Rational x0, Rational x1, Rational x2, Rational x3) const
    {
        return {a_, b_, {std::move(x0), std::move(x1), std::move(x2), std::move(x3)}};
    }
    inline QuaternionElement QuaternionAlgebra::one() const { return element(1, 0, 0, 0); }
    inline QuaternionElement QuaternionAlgebra::i() const { return element(0, 1, 0, 0); }
    inline QuaternionElement QuaternionAlgebra::j() const { return element(0, 0, 1, 0); }
    inline QuaternionElement QuaternionAlgebra::k() const { return element(0, 0, 0, 1); }

    // Algebra whose ramification is that of alg with the local invariants at p and
    // at the real place switched. For indefinite alg this is the definite algebra
    // agreeing with alg away from p. Structure constants are found by bounded
    // search, smallest max(|a'|,|b'|) first; exhausting the bound says nothing
    // about existence.
    inline QuaternionAlgebra definite_twin(const QuaternionAlgebra &alg, std::int64_t p, std::int64_t search_bound = 64)
    {
        if (!is_prime(p))
            throw PreconditionViolation(std::to_string(p) + " is not prime");

        std::set<std::int64_t> target(alg.ramified_primes().begin(), alg.ramified_primes().end());
        if (!target.erase(p))
            target.insert(p);
        const bool target_infinite = !alg.ramified_at_infinity();

        auto matches = [&](std::int64_t a, std::int64_t b) {
            if ((a < 0 && b < 0) != target_infinite)
                return false;
            const Rational ra(a), rb(b);
            const auto candidates = relevant_primes(ra, rb);
            // every target prime must divide 2ab, otherwise (a,b) is split there
            for (auto q : target)
                if (std::find(candidates.begin(), candidates.end(), q) == candidates.end())
                    return false;
            for (auto q : candidates)
            {
                const bool ramified = hilbert_symbol(ra, rb, Place::prime(q)) == -1;
                if (ramified != (target.count(q) == 1))
                    return false;
            }
            return true;
        };

        for (std::int64_t m = 1; m <= search_bound; ++m)
            for (std::int64_t a = -m; a <= m; ++a)
                for (std::int64_t b = -m; b <= m; ++b)
                {
                    if (a == 0 || b == 0 || (std::abs(a) != m && std::abs(b) != m))
                        continue;
                    if (matches(a, b))
                        return QuaternionAlgebra(a, b);
                }
        throw SearchExhausted("no structure constants with |a|,|b| <= " + std::to_string(search_bound) +
                              " realize the twin of " + alg.to_string() + " at " + std::to_string(p));
    }
} // namespace arith_theta

#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "arith_theta/quatalg.hpp"

using namespace arith_theta;

namespace
{
    // n (nonzero integer) is a square in Q_p: even valuation and unit part a
    // residue square mod p (odd p) or 1 mod 8 (p = 2).
    bool is_local_square(std::int64_t n, std::int64_t p)
    {
        int v = 0;
        while (n % p == 0)
        {
            n /= p;
            ++v;
        }
        if (v % 2)
            return false;
        if (p == 2)
            return mod(n, 8) == 1;
        for (std::int64_t r = 0; r < p; ++r)
            if (mod(r * r - n, p) == 0)
                return true;
        return false;
    }

    // z^2 = a x^2 + b y^2 solvable over Q_p, by searching x, y over a residue box.
    int brute_hilbert(std::int64_t a, std::int64_t b, std::int64_t p)
    {
        if (is_local_square(a, p) || is_local_square(b, p) || is_local_square(-a * b, p))
            return 1;
        const std::int64_t range = p == 2 ? 64 : p * p * p;
        for (std::int64_t x = 0; x < range; ++x)
            for (std::int64_t y = 0; y < range; ++y)
            {
                const std::int64_t n = a * x * x + b * y * y;
                if (n != 0 && is_local_square(n, p))
                    return 1;
            }
        return -1;
    }

    std::vector<Place> all_places(const Rational &a, const Rational &b)
    {
        std::vector<Place> out{Place::infinity()};
        for (auto p : relevant_primes(a, b))
            out.push_back(Place::prime(p));
        return out;
    }

    std::set<std::int64_t> ramification(const QuaternionAlgebra &alg)
    {
        return {alg.ramified_primes().begin(), alg.ramified_primes().end()};
    }
} // namespace

TEST(Algebra, SpecExamples)
{
    const auto m2 = make_algebra(1, 1);
    EXPECT_EQ(m2.discriminant(), 1);
    EXPECT_TRUE(m2.is_indefinite());

    const auto b6 = make_algebra(-1, 3);
    EXPECT_EQ(b6.discriminant(), 6);
    EXPECT_TRUE(b6.is_indefinite());

    const auto h = make_algebra(-1, -1);
    EXPECT_EQ(h.discriminant(), 2);
    EXPECT_TRUE(h.is_definite());

    EXPECT_THROW(make_algebra(0, 1), ZeroStructureConstant);
    EXPECT_THROW(make_algebra(2, 0), ZeroStructureConstant);
}

TEST(Hilbert, Examples)
{
    for (auto v : {Place::infinity(), Place::prime(2), Place::prime(3), Place::prime(5)})
        EXPECT_EQ(hilbert_symbol(1, 7, v), 1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(2)), -1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(5)), 1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::infinity()), -1);
}

TEST(Hilbert, MatchesResidueSearch)
{
    for (std::int64_t p : {2, 3, 5, 7})
        for (std::int64_t a = -12; a <= 12; ++a)
            for (std::int64_t b = -12; b <= 12; ++b)
            {
                if (a == 0 || b == 0)
                    continue;
                ASSERT_EQ(hilbert_symbol(a, b, Place::prime(p)), brute_hilbert(a, b, p))
                    << "a=" << a << " b=" << b << " p=" << p;
            }
}

TEST(Hilbert, ProductFormula)
{
    std::mt19937_64 rng(20261019);
    std::uniform_int_distribution<std::int64_t> num(-400, 400), den(1, 60);
    for (int n = 0; n < 1000; ++n)
    {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        if (a == 0 || b == 0)
        {
            --n;
            continue;
        }
        int prod = 1;
        for (const auto &v : all_places(a, b))
            prod *= hilbert_symbol(a, b, v);
        ASSERT_EQ(prod, 1) << to_string(a) << ", " << to_string(b);

        const QuaternionAlgebra alg(a, b);
        EXPECT_TRUE(is_squarefree(alg.discriminant()));
        EXPECT_EQ((alg.ramified_primes().size() + (alg.ramified_at_infinity() ? 1 : 0)) % 2, 0u);
        EXPECT_EQ(alg.is_indefinite(), a > 0 || b > 0);
    }
}

TEST(Element, MultiplicationTable)
{
    const auto B = make_algebra(-1, 3);
    EXPECT_EQ(B.i().norm(), 1);
    EXPECT_EQ(B.i().trace(), 0);
    EXPECT_EQ(B.j().norm(), -3);
    EXPECT_EQ(B.i() * B.j(), B.k());
    EXPECT_EQ(B.j() * B.i(), Rational(-1) * B.k());
    EXPECT_EQ(B.i() * B.i(), Rational(-1) * B.one());
    EXPECT_EQ(B.k() * B.k(), Rational(3) * B.one());
    // (ij)^2 = -ab = 3, so nu(ij) = ab = -3
    EXPECT_EQ(B.k().norm(), -3);
}

TEST(Element, NormIsMultiplicativeAndConjIsAntiInvolution)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(-9, 9), s(-6, 6);
    for (int n = 0; n < 200; ++n)
    {
        int a = s(rng), b = s(rng);
        if (a == 0 || b == 0)
            continue;
        const auto B = make_algebra(a, b);
        const auto x = B.element(Rational(c(rng), 2), c(rng), Rational(c(rng), 3), c(rng));
        const auto y = B.element(c(rng), Rational(c(rng), 5), c(rng), c(rng));
        EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
        EXPECT_EQ((x * y).conj(), y.conj() * x.conj());
        EXPECT_EQ(x * x.conj(), x.norm() * B.one());
        EXPECT_EQ(x + x.conj(), x.trace() * B.one());
        const auto pure = B.element(0, x[1], x[2], x[3]);
        EXPECT_EQ(Rational(-1) * (pure * pure), pure.norm() * B.one());
    }
}

TEST(Element, MismatchThrows)
{
    const auto x = make_algebra(-1, 3).i();
    const auto y = make_algebra(-1, -1).i();
    EXPECT_THROW(x * y, AlgebraMismatch);
    EXPECT_THROW(x + y, AlgebraMismatch);
}

TEST(Element, TraceZeroSignature)
{
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {-1, 3}, {-2, 5}, {-1, -1}, {-2, -5}, {3, -7}})
    {
        const auto B = make_algebra(a, b);
        const std::array<QuaternionElement, 3> e{B.i(), B.j(), B.k()};
        Eigen::Matrix3d g;
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                g(r, s) = to_double(norm_pairing(e[r], e[s]));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        int pos = 0;
        for (int k = 0; k < 3; ++k)
            pos += es.eigenvalues()(k) > 0;
        EXPECT_EQ(pos, B.is_definite() ? 3 : 1) << a << "," << b;
    }
}

TEST(Twin, Examples)
{
    const auto t1 = definite_twin(make_algebra(1, 1), 2);
    EXPECT_TRUE(t1.is_definite());
    EXPECT_EQ(ramification(t1), (std::set<std::int64_t>{2}));
    EXPECT_EQ(t1.a(), -1);
    EXPECT_EQ(t1.b(), -1);

    const auto b6 = make_algebra(-1, 3);
    const auto t2 = definite_twin(b6, 2);
    EXPECT_TRUE(t2.is_definite());
    EXPECT_EQ(ramification(t2), (std::set<std::int64_t>{3}));

    const auto t5 = definite_twin(b6, 5);
    EXPECT_TRUE(t5.is_definite());
    EXPECT_EQ(ramification(t5), (std::set<std::int64_t>{2, 3, 5}));

    EXPECT_THROW(definite_twin(b6, 5, 2), SearchExhausted);
    EXPECT_THROW(definite_twin(b6, 4), PreconditionViolation);
}

TEST(Twin, Involution)
{
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {-1, 3}, {-2, 5}, {3, 5}})
        for (std::int64_t p : {2, 3, 5, 7})
        {
            const auto alg = make_algebra(a, b);
            const auto back = definite_twin(definite_twin(alg, p), p);
            EXPECT_EQ(ramification(back), ramification(alg));
            EXPECT_EQ(back.ramified_at_infinity(), alg.ramified_at_infinity());
        }
}

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "number_theory.hpp"
#include "quatalg.hpp"

namespace arith_theta
{
    using RationalMatrix4 = std::array<std::array<Rational, 4>, 4>;

    namespace detail
    {
        // Inverse of a 4x4 rational matrix; nullopt when singular.
        inline std::optional<RationalMatrix4> inverse(RationalMatrix4 m)
        {
            RationalMatrix4 inv{};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    inv[r][c] = r == c ? 1 : 0;
            for (int col = 0; col < 4; ++col)
            {
                int pivot = -1;
                for (int r = col; r < 4; ++r)
                    if (m[r][col] != 0)
                    {
                        pivot = r;
                        break;
                    }
                if (pivot < 0)
                    return std::nullopt;
                std::swap(m[pivot], m[col]);
                std::swap(inv[pivot], inv[col]);
                const Rational p = m[col][col];
                for (int c = 0; c < 4; ++c)
                {
                    m[col][c] /= p;
                    inv[col][c] /= p;
                }
                for (int r = 0; r < 4; ++r)
                {
                    if (r == col || m[r][col] == 0)
                        continue;
                    const Rational s = m[r][col];
                    for (int c = 0; c < 4; ++c)
                    {
                        m[r][c] -= s * m[col][c];
                        inv[r][c] -= s * inv[col][c];
                    }
                }
            }
            return inv;
        }

        inline Rational determinant(RationalMatrix4 m)
        {
            Rational det = 1;
            for (int col = 0; col < 4; ++col)
            {
                int pivot = -1;
                for (int r = col; r < 4; ++r)
                    if (m[r][col] != 0)
                    {
                        pivot = r;
                        break;
                    }
                if (pivot < 0)
                    return 0;
                if (pivot != col)
                {
                    std::swap(m[pivot], m[col]);
                    det = -det;
                }
                det *= m[col][col];
                for (int r = col + 1; r < 4; ++r)
                {
                    const Rational s = m[r][col] / m[col][col];
                    for (int c = col; c < 4; ++c)
                        m[r][c] -= s * m[col][c];
                }
            }
            return det;
        }
    } // namespace detail

    // A Z-order of a quaternion algebra, given by a basis. Maximality is taken on
    // trust from the data source; integrality, closure and 1 in the span are checked.
    class Order
    {
    public:
        Order(QuaternionAlgebra algebra, std::array<QuaternionElement, 4> basis, std::string label = {})
            : algebra_(std::move(algebra)), basis_(std::move(basis)), label_(std::move(label))
        {
            RationalMatrix4 rows{};
            for (int r = 0; r < 4; ++r)
            {
                if (!basis_[r].same_algebra(algebra_.one()))
                    throw AlgebraMismatch("order basis element outside the algebra");
                rows[r] = basis_[r].coefficients();
            }
            auto inv = detail::inverse(rows);
            if (!inv)
                throw InvalidOrder("order basis is linearly dependent");
            to_basis_ = *inv;

            auto integral_coords = [&](const QuaternionElement &x) {
                for (const auto &c : coordinates(x))
                    if (!is_integral(c))
                        return false;
                return true;
            };
            if (!integral_coords(algebra_.one()))
                throw InvalidOrder("1 is not in the span of the order basis");
            for (const auto &x : basis_)
            {
                if (!is_integral(x.trace()) || !is_integral(x.norm()))
                    throw InvalidOrder("basis element " + x.to_string() + " is not integral");
                for (const auto &y : basis_)
                    if (!integral_coords(x * y))
                        throw InvalidOrder("span not closed under multiplication: " + x.to_string() + " * " +
                                           y.to_string());
            }
        }

        const QuaternionAlgebra &algebra() const { return algebra_; }
        const std::array<QuaternionElement, 4> &basis() const { return basis_; }
        const std::string &label() const { return label_; }

        // Coordinates of x with respect to the order basis.
        std::array<Rational, 4> coordinates(const QuaternionElement &x) const
        {
            std::array<Rational, 4> out{};
            for (int c = 0; c < 4; ++c)
                for (int r = 0; r < 4; ++r)
                    out[c] += x[r] * to_basis_[r][c];
            return out;
        }

        // Reduced discriminant: sqrt |det(tr(e_i e_j))|.
        std::int64_t reduced_discriminant() const
        {
            RationalMatrix4 g{};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    g[r][c] = (basis_[r] * basis_[c]).trace();
            const Rational det = abs(detail::determinant(g));
            if (!is_integral(det))
                throw InvalidOrder("non-integral discriminant");
            const std::int64_t d = to_int64(numerator(det));
            const std::int64_t s = isqrt(d);
            if (s * s != d)
                throw InvalidOrder("discriminant determinant " + std::to_string(d) + " is not a square");
            return s;
        }

    private:
        QuaternionAlgebra algebra_;
        std::array<QuaternionElement, 4> basis_;
        std::string label_;
        RationalMatrix4 to_basis_{};
    };

    // Order file: {"label", "a", "b", "basis": 4 rows of 4 rationals in 1,i,j,ij
    // coordinates, "discriminant"}. The stated discriminant must match both the
    // algebra and the order.
    inline Order order_from_json(const nlohmann::json &j)
    {
        auto rational_field = [](const nlohmann::json &v) {
            if (v.is_string())
                return parse_rational(v.get<std::string>());
            if (v.is_number_integer())
                return Rational(v.get<std::int64_t>());
            throw InvalidOrder("rational fields must be strings \"p/q\" or integers");
        };
        try
        {
            const QuaternionAlgebra alg(rational_field(j.at("a")), rational_field(j.at("b")));
            const auto &rows = j.at("basis");
            if (!rows.is_array() || rows.size() != 4)
                throw InvalidOrder("basis must have 4 rows");
            std::array<Rational, 4> c{};
            std::vector<QuaternionElement> elts;
            for (const auto &row : rows)
            {
                if (!row.is_array() || row.size() != 4)
                    throw InvalidOrder("basis rows must have 4 entries");
                for (int k = 0; k < 4; ++k)
                    c[k] = rational_field(row[k]);
                elts.push_back(alg.element(c[0], c[1], c[2], c[3]));
            }
            Order order(alg, {elts[0], elts[1], elts[2], elts[3]}, j.value("label", std::string{}));
            if (j.contains("discriminant"))
            {
                const auto stated = j.at("discriminant").get<std::int64_t>();
                if (stated != alg.discriminant())
                    throw InvalidOrder("stated discriminant " + std::to_string(stated) + " but algebra " +
                                       alg.to_string() + " has D(B) = " + std::to_string(alg.discriminant()));
                if (order.reduced_discriminant() != stated)
                    throw InvalidOrder("order has reduced discriminant " +
                                       std::to_string(order.reduced_discriminant()) + ", expected " +
                                       std::to_string(stated));
            }
            return order;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw InvalidOrder(std::string("malformed order file: ") + e.what());
        }
        catch (const PreconditionViolation &e)
        {
            throw InvalidOrder(e.what());
        }
    }

    inline Order load_order(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw InvalidOrder("cannot open order file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw InvalidOrder("'" + path + "': " + e.what());
        }
        return order_from_json(j);
    }

    struct LatticeVector
    {
        std::array<std::int64_t, 3> coords{};

        friend bool operator==(const LatticeVector &, const LatticeVector &) = default;
        friend auto operator<=>(const LatticeVector &, const LatticeVector &) = default;
        bool is_zero() const { return coords[0] == 0 && coords[1] == 0 && coords[2] == 0; }
        LatticeVector operator-() const { return {{-coords[0], -coords[1], -coords[2]}}; }
    };

    using Gram3 = std::array<std::array<std::int64_t, 3>, 3>;

    // Images of i, j, ij under a fixed isomorphism B (x) R = M_2(R), for
    // indefinite B. For (1,1) this is i -> diag(1,-1), j -> [[0,1],[1,0]].
    inline std::array<Sl2Vector, 3> real_embedding(const QuaternionAlgebra &alg)
    {
        if (alg.is_definite())
            throw PreconditionViolation("definite algebra has no real split model");
        const double a = to_double(alg.a());
        const double b = to_double(alg.b());
        if (a > 0)
        {
            const double s = std::sqrt(a);
            return {Sl2Vector{s, 0, 0}, Sl2Vector{0, b, 1}, Sl2Vector{0, s * b, -s}};
        }
        const double s = std::sqrt(b);
        return {Sl2Vector{0, a, 1}, Sl2Vector{s, 0, 0}, Sl2Vector{0, -a * s, s}};
    }

    // L = O_B cap V with Q = reduced norm and gram (x,y) = nu(x+y) - nu(x) - nu(y).
    class TraceZeroLattice
    {
    public:
        TraceZeroLattice(Order order, std::array<QuaternionElement, 3> basis)
            : order_(std::move(order)), basis_(std::move(basis))
        {
            for (int r = 0; r < 3; ++r)
            {
                if (!basis_[r].is_pure())
                    throw DegenerateOrder("lattice basis vector with nonzero trace");
                for (int c = 0; c < 3; ++c)
                {
                    const Rational g = norm_pairing(basis_[r], basis_[c]);
                    if (!is_integral(g))
                        throw DegenerateOrder("non-integral gram entry");
                    gram_[r][c] = to_int64(numerator(g));
                }
            }
            if (order_.algebra().is_indefinite())
            {
                const auto emb = real_embedding(order_.algebra());
                std::array<Sl2Vector, 3> rb{};
                for (int r = 0; r < 3; ++r)
                    rb[r] = to_double(basis_[r][1]) * emb[0] + to_double(basis_[r][2]) * emb[1] +
                            to_double(basis_[r][3]) * emb[2];
                real_basis_ = rb;
            }
        }

        const Order &order() const { return order_; }
        const QuaternionAlgebra &algebra() const { return order_.algebra(); }
        const std::array<QuaternionElement, 3> &basis() const { return basis_; }
        const Gram3 &gram() const { return gram_; }
        bool is_definite() const { return algebra().is_definite(); }
        std::int64_t discriminant() const { return algebra().discriminant(); }

        std::int64_t pairing(const LatticeVector &x, const LatticeVector &y) const
        {
            std::int64_t s = 0;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    s += x.coords[r] * gram_[r][c] * y.coords[c];
            return s;
        }

        std::int64_t Q(const LatticeVector &x) const { return pairing(x, x) / 2; }

        QuaternionElement element(const LatticeVector &x) const
        {
            return Rational(x.coords[0]) * basis_[0] + Rational(x.coords[1]) * basis_[1] +
                   Rational(x.coords[2]) * basis_[2];
        }

        Sl2Vector real(const LatticeVector &x) const
        {
            const auto &rb = real_basis();
            return static_cast<double>(x.coords[0]) * rb[0] + static_cast<double>(x.coords[1]) * rb[1] +
                   static_cast<double>(x.coords[2]) * rb[2];
        }

        const std::array<Sl2Vector, 3> &real_basis() const
        {
            if (!real_basis_)
                throw PreconditionViolation("definite lattice has no real split model");
            return *real_basis_;
        }

        // (positive, negative) index of inertia of the gram matrix.
        std::pair<int, int> signature() const
        {
            Eigen::Matrix3d g;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    g(r, c) = static_cast<double>(gram_[r][c]);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
            int pos = 0, neg = 0;
            for (int k = 0; k < 3; ++k)
                (es.eigenvalues()(k) > 0 ? pos : neg) += 1;
            return {pos, neg};
        }

    private:
        Order order_;
        std::array<QuaternionElement, 3> basis_;
        Gram3 gram_{};
        std::optional<std::array<Sl2Vector, 3>> real_basis_;
    };

    // Saturated kernel of the trace functional on the order basis, by unimodular
    // column reduction of the integer row (tr e_1, ..., tr e_4).
    inline TraceZeroLattice trace_zero_lattice(const Order &order)
    {
        std::array<std::int64_t, 4> t{};
        for (int k = 0; k < 4; ++k)
        {
            const Rational tr = order.basis()[k].trace();
            if (!is_integral(tr))
                throw DegenerateOrder("non-integral trace");
            t[k] = to_int64(numerator(tr));
        }
        std::array<std::array<std::int64_t, 4>, 4> U{}; // columns are new basis vectors
        for (int k = 0; k < 4; ++k)
            U[k][k] = 1;

        while (true)
        {
            int piv = -1;
            for (int k = 0; k < 4; ++k)
                if (t[k] != 0 && (piv < 0 || std::abs(t[k]) < std::abs(t[piv])))
                    piv = k;
            if (piv < 0)
                throw DegenerateOrder("trace vanishes on the whole order");
            bool reduced = true;
            for (int k = 0; k < 4; ++k)
            {
                if (k == piv || t[k] == 0)
                    continue;
                const std::int64_t q = t[k] / t[piv];
                t[k] -= q * t[piv];
                for (int r = 0; r < 4; ++r)
                    U[r][k] -= q * U[r][piv];
                if (t[k] != 0)
                    reduced = false;
            }
            if (reduced)
            {
                std::vector<QuaternionElement> kernel;
                for (int k = 0; k < 4; ++k)
                {
                    if (k == piv)
                        continue;
                    QuaternionElement x = Rational(U[0][k]) * order.basis()[0];
                    for (int r = 1; r < 4; ++r)
                        x = x + Rational(U[r][k]) * order.basis()[r];
                    kernel.push_back(x);
                }
                if (kernel.size() != 3)
                    throw DegenerateOrder("trace-zero sublattice has rank " + std::to_string(kernel.size()));
                return TraceZeroLattice(order, {kernel[0], kernel[1], kernel[2]});
            }
        }
    }

    // Bilinear-scale majorant value (x,x)_z = (x,x) + 4 R(x,z) = 2 (Q(x) + 2 R(x,z)).
    inline double majorant_value(const TraceZeroLattice &L, const UHPoint &z, const LatticeVector &x)
    {
        return 2.0 * static_cast<double>(L.Q(x)) + 4.0 * R(L.real(x), z);
    }

    // Gram matrix of the majorant at z in the lattice basis.
    inline Eigen::Matrix3d majorant(const TraceZeroLattice &L, const UHPoint &z)
    {
        if (L.is_definite())
            throw PreconditionViolation("majorant requested for a definite lattice");
        const auto &rb = L.real_basis();
        std::array<Complex, 3> p{};
        for (int k = 0; k < 3; ++k)
            p[k] = pairing_with_section(rb[k], z.z());
        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m(r, c) = static_cast<double>(L.gram()[r][c]) + 4.0 * std::real(p[r] * std::conj(p[c])) / section_norm(z.v);
        return m;
    }

    namespace detail
    {
        // Upper bound on #{x in Z^3 : x^T G x <= s}: the smaller of the bounding box
        // |x_i| <= sqrt(s (G^-1)_ii) and the ellipsoid grown by a unit cube.
        inline double point_count_bound(const Eigen::Matrix3d &G, double s)
        {
            const Eigen::Matrix3d ginv = G.inverse();
            double box = 1.0;
            for (int k = 0; k < 3; ++k)
                box *= 2.0 * std::floor(std::sqrt(std::max(0.0, s * ginv(k, k)))) + 1.0;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
            const double grown = std::sqrt(s) + 0.5 * std::sqrt(3.0 * es.eigenvalues().maxCoeff());
            const double ellipsoid = 4.0 / 3.0 * std::numbers::pi * grown * grown * grown / std::sqrt(G.determinant());
            return std::min(box, ellipsoid);
        }

        // Depth-first enumeration of x with x^T G x <= bound (G positive definite),
        // using the decomposition x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
        // Ranges are widened by a margin; callers recheck with an exact evaluator.
        template <class Visit>
        void fincke_pohst(const Eigen::Matrix3d &G, double bound, Visit &&visit)
        {
            Eigen::Matrix3d q = G;
            for (int i = 0; i < 3; ++i)
            {
                for (int j = i + 1; j < 3; ++j)
                {
                    q(j, i) = q(i, j);
                    q(i, j) = q(i, j) / q(i, i);
                }
                for (int k = i + 1; k < 3; ++k)
                    for (int l = k; l < 3; ++l)
                        q(k, l) -= q(k, i) * q(i, l);
            }
            for (int i = 0; i < 3; ++i)
                if (!(q(i, i) > 0.0))
                    throw PreconditionViolation("fincke_pohst needs a positive definite form");

            const double margin = 1e-9 * (1.0 + bound);
            std::array<std::int64_t, 3> x{};
            auto recurse = [&](auto &&self, int i, double remaining) -> void {
                double center = 0.0;
                for (int j = i + 1; j < 3; ++j)
                    center -= q(i, j) * static_cast<double>(x[j]);
                const double half = std::sqrt(std::max(0.0, (remaining + margin) / q(i, i))) + 1e-9;
                const auto lo = static_cast<std::int64_t>(std::ceil(center - half));
                const auto hi = static_cast<std::int64_t>(std::floor(center + half));
                for (std::int64_t xi = lo; xi <= hi; ++xi)
                {
                    x[i] = xi;
                    const double d = static_cast<double>(xi) - center;
                    const double rem = remaining - q(i, i) * d * d;
                    if (rem < -margin)
                        continue;
                    if (i == 0)
                        visit(LatticeVector{x});
                    else
                        self(self, i - 1, rem);
                }
            };
            recurse(recurse, 2, bound);
        }
    } // namespace detail

    struct EnumerationLimits
    {
        double max_points = 5e6;
    };

    // All nonzero x in L with (x,x)_z <= bound.
    inline std::vector<LatticeVector> enumerate_by_majorant(const TraceZeroLattice &L, const UHPoint &z, double bound,
                                                            EnumerationLimits limits = {})
    {
        if (!(bound > 0.0))
            throw PreconditionViolation("enumeration bound must be positive");
        const Eigen::Matrix3d G = majorant(L, z);
        const double predicted = detail::point_count_bound(G, bound);
        if (predicted > limits.max_points)
            throw BoundTooLarge("majorant bound " + std::to_string(bound) + " predicts up to " +
                                std::to_string(predicted) + " points");
        std::vector<LatticeVector> out;
        detail::fincke_pohst(G, bound, [&](const LatticeVector &x) {
            if (!x.is_zero() && majorant_value(L, z, x) <= bound)
                out.push_back(x);
        });
        return out;
    }

    // All nonzero x in a definite L with (x,x) = 2 Q(x) <= bound, exact.
    inline std::vector<LatticeVector> enumerate_short_vectors(const TraceZeroLattice &L, std::int64_t bound,
                                                              EnumerationLimits limits = {})
    {
        if (!L.is_definite())
            throw PreconditionViolation("enumerate_short_vectors needs a definite lattice");
        Eigen::Matrix3d G;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                G(r, c) = static_cast<double>(L.gram()[r][c]);
        const double predicted = detail::point_count_bound(G, static_cast<double>(bound));
        if (predicted > limits.max_points)
            throw BoundTooLarge("short-vector bound " + std::to_string(bound) + " too large");
        std::vector<LatticeVector> out;
        detail::fincke_pohst(G, static_cast<double>(bound), [&](const LatticeVector &x) {
            if (!x.is_zero() && L.pairing(x, x) <= bound)
                out.push_back(x);
        });
        return out;
    }

    // |{x in L : Q(x) = t}| for definite L.
    inline std::int64_t representation_count(const TraceZeroLattice &L, std::int64_t t)
    {
        if (!L.is_definite())
            throw PreconditionViolation("representation_count needs a definite lattice");
        if (t <= 0)
            throw PreconditionViolation("representation_count needs t > 0");
        std::int64_t n = 0;
        for (const auto &x : enumerate_short_vectors(L, 2 * t))
            if (L.Q(x) == t)
                ++n;
        return n;
    }
} // namespace arith_theta

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace arith_theta
{
    // Neumaier compensated sum.
    class CompensatedSum
    {
    public:
        void add(double x)
        {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                c_ += (sum_ - t) + x;
            else
                c_ += (x - t) + sum_;
            sum_ = t;
        }
        double value() const { return sum_ + c_; }

    private:
        double sum_ = 0.0, c_ = 0.0;
    };

    struct QuadResult
    {
        double value = 0.0;
        double error = 0.0;
        int intervals = 0;
        bool converged = true;
    };

    namespace detail
    {
        inline constexpr std::array<double, 8> gk15_nodes = {
            0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
        inline constexpr std::array<double, 8> gk15_weights = {
            0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        inline constexpr std::array<double, 4> g7_weights = {
            0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
            0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

        struct Panel
        {
            double a, b, value, error;
            bool operator<(const Panel &o) const { return error < o.error; }
        };

        template <class F>
        Panel gk15(F &f, double a, double b)
        {
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            const double fc = f(c);
            double kron = fc * gk15_weights[7];
            double gauss = fc * g7_weights[3];
            for (int k = 0; k < 7; ++k)
            {
                const double x = h * gk15_nodes[k];
                const double s = f(c - x) + f(c + x);
                kron += gk15_weights[k] * s;
                if (k % 2 == 1)
                    gauss += g7_weights[k / 2] * s;
            }
            return {a, b, kron * h, std::abs((kron - gauss) * h)};
        }
    } // namespace detail

    // Adaptive Gauss-Kronrod (7,15) with global bisection of the worst panel.
    // Deterministic: the panel schedule depends only on f and the tolerances.
    template <class F>
    QuadResult integrate(F &&f, double a, double b, double abs_tol, double rel_tol, int max_intervals)
    {
        std::priority_queue<detail::Panel> heap;
        heap.push(detail::gk15(f, a, b));
        double total = heap.top().value, err = heap.top().error;
        int n = 1;
        while (err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals)
        {
            const auto worst = heap.top();
            heap.pop();
            const double m = 0.5 * (worst.a + worst.b);
            const auto left = detail::gk15(f, worst.a, m);
            const auto right = detail::gk15(f, m, worst.b);
            heap.push(left);
            heap.push(right);
            total += left.value + right.value - worst.value;
            err += left.error + right.error - worst.error;
            ++n;
        }
        QuadResult out;
        CompensatedSum sum, e;
        std::vector<detail::Panel> panels;
        while (!heap.empty())
        {
            panels.push_back(heap.top());
            heap.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const auto &x, const auto &y) { return x.a < y.a; });
        for (const auto &p : panels)
        {
            sum.add(p.value);
            e.add(p.error);
        }
        out.value = sum.value();
        out.error = e.value();
        out.intervals = n;
        out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
        return out;
    }

    // Trapezoid rule over a full period with doubling; exponentially accurate
    // for smooth periodic f. The error estimate is the last change.
    template <class F>
    QuadResult integrate_periodic(F &&f, double period, double abs_tol, double rel_tol, int max_points)
    {
        int n = 16;
        CompensatedSum s0;
        for (int k = 0; k < n; ++k)
            s0.add(f(period * k / n));
        double sum = s0.value();
        double value = sum * period / n;
        QuadResult out;
        while (true)
        {
            CompensatedSum s;
            s.add(sum);
            for (int k = 0; k < n; ++k)
                s.add(f(period * (2 * k + 1) / (2.0 * n)));
            sum = s.value();
            n *= 2;
            const double next = sum * period / n;
            const double change = std::abs(next - value);
            value = next;
            if (change <= std::max(abs_tol, rel_tol * std::abs(value)) || n >= max_points)
            {
                out.value = value;
                out.error = change;
                out.intervals = n;
                out.converged = change <= std::max(abs_tol, rel_tol * std::abs(value));
                return out;
            }
        }
    }
} // namespace arith_theta

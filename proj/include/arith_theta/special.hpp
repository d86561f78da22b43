#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "errors.hpp"

namespace arith_theta
{
    // Euler's constant and zeta'(-1), to 35 digits.
    inline constexpr long double euler_gamma = 0.57721566490153286060651209008240243L;
    inline constexpr long double zeta_prime_minus1 = -0.16542114370045092921391966024278064L;

    // beta_1(r) = int_1^inf e^{-ru} u^{-1} du = E_1(r).
    inline double beta1(double r)
    {
        if (!(r > 0.0))
            throw NonpositiveArgument("beta1 needs r > 0");
        if (r <= 1.0)
        {
            // -gamma - log r - sum_{k>=1} (-r)^k / (k k!)
            double term = 1.0, sum = 0.0;
            for (int k = 1; k < 60; ++k)
            {
                term *= -r / k;
                const double add = term / k;
                sum += add;
                if (std::abs(add) < 1e-18 * std::abs(sum))
                    break;
            }
            return -static_cast<double>(euler_gamma) - std::log(r) - sum;
        }
        if (r > 700.0)
            return 0.0;
        // modified Lentz on e^r E_1(r) = 1/(r+1- 1/(r+3- 4/(r+5- ...)))
        const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
        double b = r + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
        for (int i = 1; i < 1000; ++i)
        {
            const double an = -static_cast<double>(i) * i;
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const double del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < 1e-17)
                break;
        }
        return h * std::exp(-r);
    }

    // -d/dr beta_1(r)
    inline double beta1_minus_derivative(double r) { return std::exp(-r) / r; }
} // namespace arith_theta

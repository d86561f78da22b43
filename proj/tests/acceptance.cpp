// Acceptance run: one PASS/FAIL line per criterion, then the failing detail.
#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <sys/wait.h>

#include "arith_theta/suites.hpp"

using namespace arith_theta;

namespace
{
    struct Outcome
    {
        bool pass;
        std::string summary;
        std::vector<std::string> detail;
    };

    std::vector<std::string> failures(const SuiteReport &r)
    {
        std::vector<std::string> out;
        for (const auto &l : r.lines)
            if (l.rfind("  FAIL", 0) == 0)
                out.push_back(l);
        return out;
    }

    template <class F>
    std::pair<SuiteReport, double> timed(F &&f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        SuiteReport r = f();
        return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    }

    std::string secs(double s)
    {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f s", s);
        return b;
    }

    std::pair<int, std::string> capture(const std::string &cmd)
    {
        FILE *p = popen(cmd.c_str(), "r");
        if (!p)
            return {-1, {}};
        std::string out;
        std::array<char, 4096> buf{};
        while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p))
            out.append(buf.data(), n);
        const int st = pclose(p);
        return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
    }

    Outcome suite_criterion(SuiteFn fn, const SuiteContext &ctx, double limit, const std::string &what)
    {
        auto [rep, t] = timed([&] { return fn(ctx); });
        const bool fast = limit <= 0 || t < limit;
        std::string s = what + ", " + std::to_string(rep.lines.size()) + " checks in " + secs(t);
        if (limit > 0)
            s += " (limit " + secs(limit) + ")";
        auto d = failures(rep);
        if (!fast)
            d.push_back("  runtime over limit");
        return {rep.pass && fast, s, d};
    }
} // namespace

int main()
{
    SuiteContext ctx;
    ctx.threads = 1;
    std::vector<Outcome> out;

    out.push_back(suite_criterion(suite_hurwitz, ctx, 5.0, "Hurwitz class numbers: two strategies agree for n <= 200, H(3), H(4), H(23)"));
    out.push_back(suite_criterion(suite_zagier, ctx, 30.0, "degree series equals H(4t) for 1 <= t <= 50, constant term -1/12"));
    out.push_back(suite_criterion(suite_beta1, ctx, 0, "beta1 within 1e-12 of the quadrature oracle at 50 r, small-r law"));
    out.push_back(suite_criterion(suite_o2_invariance, ctx, 600.0, "Lambda(x k) = Lambda(x) on 20 random pairs, tol 5e-3 (1 + |Lambda|)"));
    out.push_back(suite_criterion(suite_symmetry, ctx, 0, "Lambda swap symmetry and T-only dependence, 20 instances each"));
    out.push_back(suite_criterion(suite_a_independence, ctx, 0, "Z^(T,v) independent of the square root of v, 5 T x 5 v per signature"));
    out.push_back(suite_criterion(suite_enumeration, ctx, 0, "majorant enumeration equals box scan on 50 random (z, bound)"));
    out.push_back(suite_criterion(suite_classification, ctx, 0, "vertical components, fundamental prime uniqueness and witnesses, r3(t)"));

    {
        // literal expected values
        Outcome o{true, "", {}};
        for (auto [D, want] : {std::pair{1, "-1/12"}, {6, "-1/6"}, {10, "-3/4"}})
        {
            const Rational z = zeta_DB_at_minus1(D);
            if (z != parse_rational(want))
            {
                o.pass = false;
                o.detail.push_back("  FAIL zeta_D(-1) at D=" + std::to_string(D) + " is " + to_string(z) + ", expected " +
                                   want);
            }
        }
        const auto rep = suite_constants(ctx);
        for (const auto &l : failures(rep))
            o.detail.push_back(l);
        o.pass = o.pass && rep.pass;
        o.summary = "zeta_D(-1) at D = 1, 6, 10 equals -1/12, -1/6, -3/4; constant_c linearity exact";
        if (!o.pass)
            o.detail.push_back("  note: the product (-1/12)(1-2)(1-5) over p | 10 is -1/3");
        out.push_back(o);
    }

    {
        const std::string cmd = std::string(ARITH_THETA_CLI) + " check full --seed 20260101 --threads 1 2>&1";
        const auto t0 = std::chrono::steady_clock::now();
        const auto a = capture(cmd);
        const auto b = capture(cmd);
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Outcome o{a.second == b.second && !a.second.empty(),
                  "check full twice with one seed, single thread: " + std::to_string(a.second.size()) +
                      " bytes, identical=" + (a.second == b.second ? "yes" : "no") + " in " + secs(t),
                  {}};
        if (a.first != 0)
            o.detail.push_back("  note: check full exited " + std::to_string(a.first));
        out.push_back(o);
    }

    bool all = true;
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        std::cout << (out[i].pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << out[i].summary << "\n";
        all = all && out[i].pass;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!out[i].detail.empty())
        {
            std::cout << "\ncriterion " << (i + 1) << " detail:\n";
            for (const auto &l : out[i].detail)
                std::cout << l << "\n";
        }
    return all ? 0 : 1;
}

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arith_theta/config.hpp"
#include "arith_theta/suites.hpp"

using namespace arith_theta;
using nlohmann::json;

namespace
{
    // Raised for bad arguments; exit code 2.
    struct UsageError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    std::string num(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12e", x);
        return buf;
    }

    class Emitter
    {
    public:
        explicit Emitter(OutputFormat f) : f_(f) {}

        bool json_mode() const { return f_ == OutputFormat::json; }

        void exact(const std::string &op, const json &input, const Rational &value, const std::string &human)
        {
            if (json_mode())
                line({{"op", op}, {"input", input}, {"value", to_string(value)}, {"err", nullptr}});
            else
                std::cout << human << "\n";
        }

        void numeric(const std::string &op, const json &input, double value, double err, const std::string &label)
        {
            if (json_mode())
                line({{"op", op}, {"input", input}, {"value", value}, {"err", err}});
            else
                std::cout << label << " = " << num(value) << " +- " << num(err) << "\n";
        }

        void line(const json &j) { std::cout << j.dump() << "\n"; }

    private:
        OutputFormat f_;
    };

    IntSym2 parse_T(const std::vector<std::int64_t> &v)
    {
        if (v.size() != 3)
            throw UsageError("--T needs three integers t1,m,t2");
        return {v[0], v[1], v[2]};
    }

    LatticeVector parse_coords(const std::vector<std::int64_t> &v, const std::string &flag)
    {
        if (v.size() != 3)
            throw UsageError(flag + " needs three integer lattice coordinates");
        return {{v[0], v[1], v[2]}};
    }

    TraceZeroLattice open_lattice(const RunConfig &cfg)
    {
        try
        {
            return trace_zero_lattice(load_order(cfg.order_path));
        }
        catch (const InvalidOrder &e)
        {
            throw UsageError(e.what());
        }
    }

    std::string show_point(const UHPoint &z) { return num(z.u) + "+" + num(z.v) + "i"; }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Arithmetic theta series toolkit: degrees, Green functions, star products, classification"};
    app.require_subcommand(1);
    // global flags may also follow the subcommand
    app.fallthrough();

    std::string config_path, out_flag, order_flag;
    std::uint64_t seed_flag = 0;
    int threads_flag = 1;
    app.add_option("--config", config_path, "JSON config file (default: $ARITHTHETA_CONFIG)");
    app.add_option("--out", out_flag, "Output format")->check(CLI::IsMember({"human", "json"}));
    app.add_option("--seed", seed_flag, "Seed for randomized suites");
    app.add_option("--threads", threads_flag, "Worker threads for suites")->check(CLI::PositiveNumber);
    app.add_option("--order", order_flag, "Order file (JSON)");

    auto *theta = app.add_subcommand("theta-deg", "Degree series coefficients for 0 <= t <= max-t");
    double theta_v = 1.0;
    std::int64_t max_t = 10;
    theta->add_option("--v", theta_v, "Imaginary part of tau")->check(CLI::PositiveNumber);
    theta->add_option("--max-t", max_t, "Largest index")->check(CLI::NonNegativeNumber);

    auto *green = app.add_subcommand("green", "Xi(t, v) at a point z");
    std::int64_t green_t = 0;
    double green_v = 1.0;
    std::vector<double> green_z;
    green->add_option("--t", green_t, "Index t != 0")->required();
    green->add_option("--v", green_v, "Imaginary part of tau")->check(CLI::PositiveNumber);
    green->add_option("--z", green_z, "Point u,v of the upper half-plane")->delimiter(',')->expected(2)->required();

    auto *lambda = app.add_subcommand("lambda", "Lambda(x a) for lattice vectors x1, x2 and v = a a^T");
    std::vector<std::int64_t> x1c, x2c;
    std::vector<double> lambda_v{1.0, 0.0, 1.0};
    lambda->add_option("--x1", x1c, "Lattice coordinates of x1")->delimiter(',')->expected(3)->required();
    lambda->add_option("--x2", x2c, "Lattice coordinates of x2")->delimiter(',')->expected(3)->required();
    lambda->add_option("--v", lambda_v, "v11,v12,v22 positive definite")->delimiter(',')->expected(3);

    auto *classify_cmd = app.add_subcommand("classify", "Fundamental prime and regularity of T");
    std::vector<std::int64_t> T_raw;
    std::int64_t D = 1;
    classify_cmd->add_option("--T", T_raw, "t1,m,t2")->delimiter(',')->expected(3)->required();
    classify_cmd->add_option("--D", D, "Squarefree discriminant")->check(CLI::PositiveNumber);

    auto *hurwitz = app.add_subcommand("hurwitz", "Hurwitz class number H(n)");
    std::int64_t hurwitz_n = 0;
    hurwitz->add_option("n", hurwitz_n, "n >= 0")->required()->check(CLI::NonNegativeNumber);

    auto *check = app.add_subcommand("check", "Run a verification suite");
    std::string suite = "full";
    std::string suite_help = "Suite: full";
    for (const auto &[name, fn] : suite_registry())
        suite_help += ", " + name;
    check->add_option("suite", suite, suite_help);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto given = [&](const std::string &flag) { return app.count(flag) > 0; };

    RunConfig cfg;
    cfg.order_path = std::string(ARITH_THETA_DATA_DIR) + "/orders/m2z.json";
    std::string instance;
    try
    {
        const std::string path = given("--config") ? config_path : config_path_from_env();
        if (!path.empty())
            load_config_file(cfg, path);
        if (given("--order"))
            cfg.order_path = order_flag;
        if (given("--out"))
            cfg.out = parse_output_format(out_flag);
        if (given("--seed"))
            cfg.seed = seed_flag;
        if (given("--threads"))
            cfg.threads = threads_flag;
    }
    catch (const error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    Emitter out(cfg.out);
    try
    {
        if (theta->parsed())
        {
            const auto L = open_lattice(cfg);
            instance = "theta-deg v=" + num(theta_v) + " max-t=" + std::to_string(max_t);
            const auto s = degree_series(L, theta_v, max_t, cfg.hodge_degree, cfg.degree_tables);
            if (!out.json_mode())
                std::cout << "t\tcoefficient\n";
            for (std::int64_t t = 0; t <= max_t; ++t)
                out.exact("theta-deg", {{"t", t}, {"v", theta_v}, {"order", cfg.order_path}}, s.coefficient(t),
                          std::to_string(t) + "\t" + to_string(s.coefficient(t)));
        }
        else if (green->parsed())
        {
            const auto L = open_lattice(cfg);
            if (!(green_z[1] > 0))
                throw UsageError("--z needs Im z > 0");
            const UHPoint z(green_z[0], green_z[1]);
            instance = "green t=" + std::to_string(green_t) + " v=" + num(green_v) + " z=" + show_point(z);
            const auto r = big_xi(L, green_t, green_v, z, cfg.quadrature);
            out.numeric("green", {{"t", green_t}, {"v", green_v}, {"z", green_z}, {"order", cfg.order_path}}, r.value,
                        r.tail_bound, "Xi(t=" + std::to_string(green_t) + ", v=" + num(green_v) + ", z=" + show_point(z) + ")");
        }
        else if (lambda->parsed())
        {
            const auto L = open_lattice(cfg);
            const auto x1 = parse_coords(x1c, "--x1"), x2 = parse_coords(x2c, "--x2");
            Eigen::Matrix2d v;
            v << lambda_v[0], lambda_v[1], lambda_v[1], lambda_v[2];
            instance = "lambda x1=" + std::to_string(x1c[0]) + "," + std::to_string(x1c[1]) + "," + std::to_string(x1c[2]) +
                       " x2=" + std::to_string(x2c[0]) + "," + std::to_string(x2c[1]) + "," + std::to_string(x2c[2]) +
                       " v=" + num(lambda_v[0]) + "," + num(lambda_v[1]) + "," + num(lambda_v[2]);
            Eigen::Matrix2d a;
            try
            {
                a = square_root(v, SquareRoot::symmetric);
            }
            catch (const PreconditionViolation &e)
            {
                throw UsageError(e.what());
            }
            const PairConfig pair = PairConfig{L.real(x1), L.real(x2)}.times(a);
            const auto r = lambda_star(pair, cfg.quadrature);
            out.numeric("lambda", {{"x1", x1c}, {"x2", x2c}, {"v", lambda_v}, {"order", cfg.order_path}}, r.value,
                        r.error, "Lambda");
        }
        else if (classify_cmd->parsed())
        {
            const IntSym2 T = parse_T(T_raw);
            instance = "classify T=" + std::to_string(T.t1) + "," + std::to_string(T.m) + "," + std::to_string(T.t2) +
                       " D=" + std::to_string(D);
            CycleClassification c;
            try
            {
                c = classify(T, D, cfg.scan_limit);
            }
            catch (const NotSquarefree &e)
            {
                throw UsageError(e.what());
            }
            catch (const PreconditionViolation &e)
            {
                throw UsageError(e.what());
            }
            const char *status = c.status == PrimeStatus::found  ? "found"
                                 : c.status == PrimeStatus::none ? "none"
                                                                 : "inconclusive";
            if (out.json_mode())
            {
                json value{{"status", status},
                           {"fundamental_prime", c.fundamental_prime ? json(*c.fundamental_prime) : json(nullptr)},
                           {"regular", c.regular ? json(*c.regular) : json(nullptr)},
                           {"supersingular_support", c.supersingular_support}};
                out.line({{"op", "classify"}, {"input", {{"T", T_raw}, {"D", D}}}, {"value", value}, {"err", nullptr}});
            }
            else if (c.fundamental_prime)
                std::cout << "fundamental prime " << *c.fundamental_prime << "\nregular " << (*c.regular ? "true" : "false")
                          << "\n";
            else
                std::cout << "fundamental prime " << status << "\n";
        }
        else if (hurwitz->parsed())
        {
            const Rational h = hurwitz_class_number(hurwitz_n);
            out.exact("hurwitz", {{"n", hurwitz_n}}, h, to_string(h));
        }
        else if (check->parsed())
        {
            SuiteContext ctx;
            ctx.seed = cfg.seed;
            ctx.threads = cfg.threads;
            ctx.spec = cfg.quadrature;
            std::vector<SuiteReport> reports;
            try
            {
                reports = run_suite(suite, ctx);
            }
            catch (const PreconditionViolation &e)
            {
                throw UsageError(e.what());
            }
            bool pass = true;
            for (const auto &r : reports)
            {
                pass = pass && r.pass;
                if (out.json_mode())
                    out.line({{"op", "check"},
                              {"input", {{"suite", r.name}, {"seed", cfg.seed}}},
                              {"value", {{"pass", r.pass}, {"lines", r.lines}}},
                              {"err", nullptr}});
                else
                    std::cout << r.text();
            }
            if (!out.json_mode() && reports.size() > 1)
                std::cout << (pass ? "PASS " : "FAIL ") << suite << "\n";
            return pass ? 0 : 1;
        }
    }
    catch (const UsageError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const PreconditionViolation &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const error &e)
    {
        std::cerr << "error: " << e.what() << "\n  instance: " << instance << "\n";
        return 1;
    }
    return 0;
}

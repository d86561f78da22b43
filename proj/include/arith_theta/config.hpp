#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "greens.hpp"
#include "identities.hpp"

namespace arith_theta
{
    enum class OutputFormat
    {
        human,
        json
    };

    struct RunConfig
    {
        std::string order_path;
        QuadratureSpec quadrature;
        OutputFormat out = OutputFormat::human;
        std::uint64_t seed = 20260101;
        int threads = 1;
        Rational hodge_degree{1, 12};
        DegreeTables degree_tables;
        std::int64_t scan_limit = 1000000;
    };

    inline OutputFormat parse_output_format(const std::string &s)
    {
        if (s == "human")
            return OutputFormat::human;
        if (s == "json")
            return OutputFormat::json;
        throw PreconditionViolation("output format must be 'human' or 'json', got '" + s + "'");
    }

    // Overlay the fields present in j onto cfg.
    inline void apply_config(RunConfig &cfg, const nlohmann::json &j)
    {
        try
        {
            if (j.contains("order"))
                cfg.order_path = j.at("order").get<std::string>();
            if (j.contains("seed"))
                cfg.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("threads"))
                cfg.threads = j.at("threads").get<int>();
            if (j.contains("out"))
                cfg.out = parse_output_format(j.at("out").get<std::string>());
            if (j.contains("quadrature"))
            {
                const auto &q = j.at("quadrature");
                auto &s = cfg.quadrature;
                s.rel_tol = q.value("rel_tol", s.rel_tol);
                s.abs_tol = q.value("abs_tol", s.abs_tol);
                s.truncation_majorant_bound = q.value("truncation_majorant_bound", s.truncation_majorant_bound);
                s.singular_ball_radius = q.value("singular_ball_radius", s.singular_ball_radius);
                s.max_intervals = q.value("max_intervals", s.max_intervals);
                s.max_periodic_points = q.value("max_periodic_points", s.max_periodic_points);
                s.singular_floor = q.value("singular_floor", s.singular_floor);
                s.validate();
            }
            if (j.contains("identities"))
            {
                const auto &id = j.at("identities");
                if (id.contains("hodge_degree"))
                    cfg.hodge_degree = parse_rational(id.at("hodge_degree").get<std::string>());
                if (id.contains("scan_limit"))
                    cfg.scan_limit = id.at("scan_limit").get<std::int64_t>();
                if (id.contains("degree_tables"))
                    for (const auto &[D, table] : id.at("degree_tables").items())
                        for (const auto &[t, deg] : table.items())
                            cfg.degree_tables[std::stoll(D)][std::stoll(t)] = parse_rational(deg.get<std::string>());
            }
        }
        catch (const nlohmann::json::exception &e)
        {
            throw PreconditionViolation(std::string("bad config: ") + e.what());
        }
        if (cfg.threads < 1)
            throw PreconditionViolation("threads must be >= 1");
    }

    inline void load_config_file(RunConfig &cfg, const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw PreconditionViolation("cannot open config file '" + path + "'");
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw PreconditionViolation("config file '" + path + "': " + e.what());
        }
        apply_config(cfg, j);
    }

    // Path named by ARITHTHETA_CONFIG, or empty.
    inline std::string config_path_from_env()
    {
        const char *p = std::getenv("ARITHTHETA_CONFIG");
        return p ? std::string(p) : std::string();
    }
} // namespace arith_theta

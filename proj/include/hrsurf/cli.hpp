#pragma once

// Command-line front end. Everything writes to the given streams so tests can drive it in-process;
// logging goes through spdlog on stderr, level from HRSURF_LOG.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "hrsurf/io.hpp"
#include "hrsurf/profile.hpp"
#include "hrsurf/verify.hpp"

namespace hrsurf::cli {

enum ExitCode : int { kPass = 0, kVerifyFail = 1, kRegime = 2, kUsage = 64 };

inline int exit_code(const Error &e) {
    switch (e.kind()) {
        case ErrorKind::InvalidArgument: return kUsage;
        default: return kRegime;
    }
}

inline std::shared_ptr<spdlog::logger> logger() {
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> log;
    std::call_once(once, [] {
        log = spdlog::stderr_logger_mt("hrsurf");
        log->set_pattern("[%l] %v");
        auto level = spdlog::level::warn;
        if (const char *env = std::getenv("HRSURF_LOG")) level = spdlog::level::from_str(env);
        log->set_level(level);
    });
    return log;
}

struct JobConfig {
    std::string space = "hfm:R:3";
    std::string family = "spheres";
    int r = 1;
    double hr = 0.0;
    std::string scenario = "sphere";
    std::optional<double> lambda;
    int samples = 2048;
    double s_max = 40.0;
    std::optional<double> tol;
    std::string out = "-";
    std::string format = "csv";
    int azimuthal = 128;

    ConstructParams params() const {
        ConstructParams p;
        p.lambda = lambda;
        p.samples = samples;
        p.s_max = s_max;
        return p;
    }

    HypersurfaceModel build() const {
        if (samples < 16) throw Error(ErrorKind::InvalidArgument, "--samples must be >= 16");
        if (!(s_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "--s-max must be positive");
        return construct(AmbientSpace::parse(space), parse_family(family), r, hr, parse_scenario(scenario), params());
    }
};

namespace detail {

inline std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &text, std::ostream &out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    f << text;
}

inline std::string binom_text(int n, int k) { return "C(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

}  // namespace detail

/// constants: every constant defined for (space, r[, H_r]), decimal plus exact form where there is one.
inline int cmd_constants(const std::string &space_text, int r, std::optional<double> hr, std::ostream &out) {
    auto space = AmbientSpace::parse(space_text);
    const int n = space.n;
    if (r < 1 || r > n) throw Error(ErrorKind::InvalidArgument, "--r must lie in 1..n = " + std::to_string(n));
    auto line = [&](const std::string &name, double v, const std::string &exact = "") {
        out << name << " = " << detail::fmt(v);
        if (!exact.empty()) out << "  [" << exact << "]";
        out << "\n";
    };
    out << "space " << space.spec() << " (n = " << n << "), r = " << r << "\n";
    IsoparametricFamily spheres(space, FamilyKind::GeodesicSpheres);
    if (space.is_hyperbolic()) {
        std::string name = std::string("C_") + field_letter(space.field) + "(" + std::to_string(r) + ")";
        std::string exact;
        if (r == n) exact = "0";
        else if (space.field == Field::R) exact = detail::binom_text(n - 1, r);
        else if (space.field == Field::C && r == n - 1) exact = "1/2^" + std::to_string(n - 2);
        line(name, c_limit(space, r), exact);
        if (r <= n - 1) {
            line("H_" + std::to_string(r) + "^0", horosphere_hr0(space, r),
                 space.field == Field::R ? detail::binom_text(n - 1, r) : "");
        }
        if (space.field == Field::R && r < n) {
            line("C_" + std::to_string(r), cr_constant(n, r), "(" + std::to_string(n - r) + "/" + std::to_string(n) +
                                                                    ")*" + detail::binom_text(n, r));
        }
    } else {
        line("S(" + std::to_string(n) + ")", sn_constant(n), n == 2 ? "1" : n == 3 ? "pi/4" : "");
        if (r < n) {
            line("C_" + std::to_string(r), cr_constant(n, r), "(" + std::to_string(n - r) + "/" + std::to_string(n) +
                                                                    ")*" + detail::binom_text(n, r));
        }
    }
    if (hr) {
        if (!(*hr > 0.0)) throw Error(ErrorKind::InvalidArgument, "--hr must be positive for delta and s_r");
        if (r < n) {
            double d = delta_hr(spheres, r, *hr);
            line("delta", d, std::isinf(d) ? "H_r <= C_F(r): no unit crossing" : "");
        }
        if (space.is_hyperbolic() && space.field == Field::R && r < n && *hr < cr_constant(n, r)) {
            line("s_r", s_r_constant(n, r, *hr));
        }
    }
    return kPass;
}

inline std::string summary(const HypersurfaceModel &m) {
    size_t samples = 0;
    for (const auto &p : m.pieces) samples += p.curve.size();
    std::ostringstream os;
    os << classification_name(m.classification) << ": " << scenario_name(m.scenario) << " in " << m.space.spec()
       << ", r=" << m.r << ", H_r=" << detail::fmt(m.hr);
    if (m.lambda) os << ", lambda=" << detail::fmt(*m.lambda);
    os << ", " << m.pieces.size() << " piece(s), " << samples << " samples";
    if (m.period) os << ", period=" << detail::fmt(*m.period);
    if (m.slab) os << ", slab half-width=" << detail::fmt(*m.slab);
    return os.str();
}

inline int cmd_construct(const JobConfig &cfg, std::ostream &out, std::ostream &err) {
    logger()->info("construct {} {} r={} H_r={} {}", cfg.space, cfg.family, cfg.r, cfg.hr, cfg.scenario);
    auto m = cfg.build();
    detail::write_file(cfg.out, write_profile(m), out);
    (cfg.out == "-" ? err : out) << summary(m) << "\n";
    return kPass;
}

inline int cmd_classify(const JobConfig &cfg, std::ostream &out) {
    IsoparametricFamily fam(AmbientSpace::parse(cfg.space), parse_family(cfg.family));
    auto init = cfg.lambda ? InitialCondition::unit_at(*cfg.lambda) : InitialCondition::regular_at_zero();
    auto res = classify(fam, cfg.r, cfg.hr, init);
    if (!res.label) {
        out << "none: " << res.note << "\n";
        return kRegime;
    }
    out << classification_name(*res.label);
    if (res.convexity) out << " (" << convexity_name(*res.convexity) << ")";
    out << "\n";
    return kPass;
}

inline int cmd_verify(const std::string &path, std::optional<double> tol, const std::string &report_path,
                      std::ostream &out) {
    auto m = read_profile(detail::read_file(path));
    auto rep = verify_constancy(m, tol);
    auto j = report_to_json(rep);
    for (const auto &c : rep.checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    auto conv = verify_convexity(m);
    out << "convexity: " << convexity_name(conv.aggregate()) << " (" << conv.strict << " strict, " << conv.convex
        << " convex, " << conv.nonconvex << " nonconvex samples)\n";
    j["convexity"] = convexity_name(conv.aggregate());
    bool ok = rep.passed();
    try {
        auto h = verify_height_estimate(m);
        out << (h.pass ? "PASS " : "FAIL ") << "height_estimate: height " << detail::fmt(h.height) << " <= 1/min k "
            << detail::fmt(h.bound) << " (slack " << detail::fmt(h.slack) << ")\n";
        j["height_estimate"] = {{"height", h.height}, {"bound", h.bound}, {"slack", h.slack}, {"pass", h.pass}};
        ok = ok && h.pass;
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::NotApplicable) throw;
        logger()->debug("height estimate skipped: {}", e.what());
    }
    j["passed"] = ok;
    if (!report_path.empty()) detail::write_file(report_path, j.dump(1) + "\n", out);
    return ok ? kPass : kVerifyFail;
}

inline int cmd_export(const std::string &path, const JobConfig &cfg, std::ostream &out) {
    auto m = read_profile(detail::read_file(path));
    std::ostringstream os;
    if (cfg.format == "csv") {
        write_csv(m, os);
    } else if (cfg.format == "obj") {
        auto mesh = revolution_mesh(m, {cfg.azimuthal, 256});
        logger()->info("mesh: {} vertices, {} triangles, chi = {}", mesh.vertices.size(), mesh.triangles.size(),
                       euler_characteristic(mesh));
        write_obj(m, mesh, os);
    } else {
        throw Error(ErrorKind::InvalidArgument, "--format must be csv or obj");
    }
    detail::write_file(cfg.out, os.str(), out);
    return kPass;
}

struct SweepRow {
    double hr = 0.0;
    std::string status;  // pass, fail, regime
    std::string label;
    double residual = 0.0;
    std::string note;
};

/// Independent construct + verify jobs, spread over `jobs` threads; rows come back in input order.
inline std::vector<SweepRow> run_sweep(const JobConfig &base, const std::vector<double> &hrs, int jobs) {
    std::vector<SweepRow> rows(hrs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < hrs.size(); i = next++) {
            JobConfig cfg = base;
            cfg.hr = hrs[i];
            SweepRow row;
            row.hr = hrs[i];
            try {
                auto m = cfg.build();
                auto rep = verify_constancy(m, cfg.tol);
                row.label = classification_name(m.classification);
                row.residual = rep.max_hr_residual;
                row.status = rep.passed() ? "pass" : "fail";
            } catch (const Error &e) {
                row.status = exit_code(e) == kRegime ? "regime" : "error";
                row.note = e.what();
            }
            rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, jobs); t++) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
    return rows;
}

inline int cmd_sweep(const JobConfig &base, std::vector<double> hrs, int jobs, std::ostream &out) {
    if (hrs.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs --hr-list");
    auto rows = run_sweep(base, hrs, jobs);
    bool ok = true;
    out << "hr,status,classification,max_residual,note\r\n";
    for (const auto &r : rows) {
        ok = ok && r.status != "fail" && r.status != "error";
        std::string note = r.note;
        std::replace(note.begin(), note.end(), '"', '\'');
        out << shortest(r.hr) << ',' << r.status << ',' << r.label << ',' << shortest(r.residual) << ",\"" << note
            << "\"\r\n";
    }
    return ok ? kPass : kVerifyFail;
}

inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"hrsurf: constant H_r hypersurfaces of M x R"};
    app.require_subcommand(1);
    JobConfig cfg;
    std::string profile, report;
    std::vector<double> hr_list;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    auto space_opt = [&](CLI::App *c) { c->add_option("--space", cfg.space, "hfm:<F>:<m> | sn:<n>")->required(); };
    auto job_opts = [&](CLI::App *c, bool need_hr) {
        space_opt(c);
        c->add_option("--family", cfg.family, "spheres|horospheres|equidistants");
        c->add_option("--r", cfg.r, "order r")->required();
        auto h = c->add_option("--hr", cfg.hr, "target H_r");
        if (need_hr) h->required();
        c->add_option("--lambda", cfg.lambda, "initial parameter");
    };

    auto *constants = app.add_subcommand("constants", "print the threshold constants");
    space_opt(constants);
    constants->add_option("--r", cfg.r)->required();
    std::optional<double> const_hr;
    constants->add_option("--hr", const_hr);

    auto *construct_cmd = app.add_subcommand("construct", "build a profile and write it as JSON");
    job_opts(construct_cmd, true);
    construct_cmd->add_option("--scenario", cfg.scenario)->required();
    construct_cmd->add_option("--samples", cfg.samples);
    construct_cmd->add_option("--s-max", cfg.s_max);
    construct_cmd->add_option("--out", cfg.out, "profile path, - for stdout");

    auto *classify_cmd = app.add_subcommand("classify", "label the model from (H_r, initial condition)");
    job_opts(classify_cmd, true);

    auto *verify_cmd = app.add_subcommand("verify", "check constancy of H_r along a stored profile");
    verify_cmd->add_option("profile", profile)->required();
    verify_cmd->add_option("--tol", cfg.tol);
    verify_cmd->add_option("--out", report, "report JSON path");

    auto *export_cmd = app.add_subcommand("export", "write CSV samples or an OBJ mesh");
    export_cmd->add_option("profile", profile)->required();
    export_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "obj"}));
    export_cmd->add_option("--out", cfg.out);
    export_cmd->add_option("--azimuthal", cfg.azimuthal)->check(CLI::Range(3, 1 << 16));

    auto *sweep_cmd = app.add_subcommand("sweep", "construct and verify over a list of H_r values");
    job_opts(sweep_cmd, false);
    sweep_cmd->add_option("--scenario", cfg.scenario)->required();
    sweep_cmd->add_option("--hr-list", hr_list)->delimiter(',')->required();
    sweep_cmd->add_option("--samples", cfg.samples);
    sweep_cmd->add_option("--s-max", cfg.s_max);
    sweep_cmd->add_option("--tol", cfg.tol);
    sweep_cmd->add_option("--jobs", jobs)->check(CLI::Range(1, 256));

    std::vector<std::string> argv_store{"hrsurf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    try {
        if (*constants) return cmd_constants(cfg.space, cfg.r, const_hr, out);
        if (*construct_cmd) return cmd_construct(cfg, out, err);
        if (*classify_cmd) return cmd_classify(cfg, out);
        if (*verify_cmd) return cmd_verify(profile, cfg.tol, report, out);
        if (*export_cmd) return cmd_export(profile, cfg, out);
        if (*sweep_cmd) return cmd_sweep(cfg, hr_list, jobs, out);
    } catch (const Error &e) {
        err << e.what() << "\n";
        return exit_code(e);
    } catch (const nlohmann::json::exception &e) {
        err << "malformed profile: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace hrsurf::cli

// volkit command-line driver: fit, gof, risk, simulate, diagnostics, rerun.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "volkit/bootstrap.hpp"
#include "volkit/data.hpp"
#include "volkit/errors.hpp"
#include "volkit/estimation.hpp"
#include "volkit/garch.hpp"
#include "volkit/gof.hpp"
#include "volkit/risk.hpp"
#include "volkit/serialize.hpp"

#ifndef VOLKIT_VERSION
#define VOLKIT_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace volkit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNonConvergence = 2;

// Raised for bad flag values; the message names the flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataFlags {
    std::string csv;
    std::string date_column = "date";
    std::string price_column = "price";
    std::string date_format = "%Y-%m-%d";

    void add(CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--csv", csv, "price CSV file");
        if (required) opt->required();
        cmd->add_option("--date-column", date_column, "name of the date column")->capture_default_str();
        cmd->add_option("--price-column", price_column, "name of the price column")->capture_default_str();
        cmd->add_option("--date-format", date_format, "std::get_time date format")->capture_default_str();
    }
};

struct SpecFlags {
    std::string family = "garch";
    int p = 1;
    int q = 1;
    std::string innovation = "gaussian";
    double power = 2.0;

    void add(CLI::App* cmd, bool with_innovation = true) {
        cmd->add_option("--family", family, "garch | egarch | ngarch | ngarch_power | gjr | augmented")
            ->capture_default_str();
        cmd->add_option("--p", p, "number of beta lags (garch only)")->capture_default_str();
        cmd->add_option("--q", q, "number of alpha lags (garch only)")->capture_default_str();
        if (with_innovation) {
            cmd->add_option("--innovation", innovation, "gaussian | ged")->capture_default_str();
        }
        cmd->add_option("--power", power, "shock exponent of ngarch_power")->capture_default_str();
    }

    [[nodiscard]] garch::GarchSpec build(const std::string& innovation_kind, double nu = 1.5) const {
        garch::GarchSpec s;
        try {
            s.family = garch::parse_family(family);
        } catch (const DomainError& e) {
            throw UsageError(std::string("--family: ") + e.what());
        }
        s.p = p;
        s.q = q;
        s.power = power;
        if (innovation_kind == "ged") {
            s.innovation = garch::Innovation::ged(nu);
        } else if (innovation_kind == "gaussian") {
            s.innovation = garch::Innovation::gaussian();
        } else {
            throw UsageError("--innovation: expected gaussian or ged, got '" + innovation_kind + "'");
        }
        try {
            s.validate();
        } catch (const DomainError& e) {
            throw UsageError(std::string("--p/--q: ") + e.what());
        }
        return s;
    }
};

struct FitFlags {
    double tol = 1e-8;
    int max_iter = 50'000;
    std::optional<double> sigma1_sq;
    bool no_polish = false;

    void add(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "simplex size tolerance")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "simplex iteration cap")->capture_default_str();
        cmd->add_option("--sigma1-sq", sigma1_sq, "initial variance (default: sample variance)");
        cmd->add_flag("--no-polish", no_polish, "skip the quasi-Newton polish after the simplex");
    }

    [[nodiscard]] estimation::FitOptions options() const {
        estimation::FitOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.sigma1_sq = sigma1_sq;
        o.polish = !no_polish;
        return o;
    }
};

struct Manifest {
    json doc = json::object();
    std::vector<json> inputs;
    std::vector<std::string> outputs;
};

std::string fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json describe_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    const auto size = in ? static_cast<long long>(in.tellg()) : -1;
    return {{"path", path}, {"bytes", size}, {"fnv1a64", fnv1a64(path)}};
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json read_json_file(const std::string& path, const char* flag) {
    std::ifstream in(path);
    if (!in) throw UsageError(std::string(flag) + ": cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string(flag) + ": invalid JSON in '" + path + "': " + e.what());
    }
}

std::vector<double> load_returns(const DataFlags& d, Manifest& m) {
    m.inputs.push_back(describe_input(d.csv));
    const auto prices = data::load_csv(d.csv, {d.date_column, d.price_column, d.date_format});
    return data::log_returns(prices).returns;
}

unsigned resolve_jobs(std::optional<unsigned> jobs) {
    if (jobs) return *jobs;
    if (const char* env = std::getenv("VOLKIT_JOBS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("VOLKIT_JOBS: not a count: '") + env + "'");
        }
    }
    return 0;
}

void write_text(const std::string& path, const std::string& text, Manifest& m) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    m.outputs.push_back(path);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

// Fit from flags, or load a previous fit document.
struct FitSource {
    std::string fit_file;

    void add(CLI::App* cmd) { cmd->add_option("--fit", fit_file, "fit JSON from `volkit fit` (skips estimation)"); }

    estimation::FitResult obtain(const SpecFlags& spec_flags, const std::string& innovation, const FitFlags& fit_flags,
                                 const std::vector<double>& returns, Manifest& m) const {
        if (!fit_file.empty()) {
            m.inputs.push_back(describe_input(fit_file));
            auto fit = serialize::fit_from_json(read_json_file(fit_file, "--fit"));
            const auto expected = innovation == "ged" ? garch::Innovation::Kind::Ged : garch::Innovation::Kind::Gaussian;
            if (fit.spec.innovation.kind != expected) {
                throw UsageError("--fit: the fit's innovation does not match --null " + innovation);
            }
            // Recompute the likelihood on the supplied data so the document is self-consistent.
            auto at = estimation::evaluate_at(fit.spec, fit.params, returns);
            at.converged = fit.converged;
            return at;
        }
        return estimation::fit(spec_flags.build(innovation), returns, fit_flags.options());
    }
};

int report_fit_status(const estimation::FitResult& fit, std::ostream& err) {
    if (fit.converged) return kExitOk;
    err << "warning: optimizer did not converge (gradient " << fit.gradient_norm << ", " << fit.iterations
        << " iterations); best point reported\n";
    return kExitNonConvergence;
}

json options_of(const CLI::App* cmd) {
    json o = json::object();
    for (const auto* opt : cmd->get_options()) {
        if (opt->get_name().empty() || opt->count() == 0) continue;
        const auto& res = opt->results();
        std::string name = opt->get_name();
        if (res.empty()) {
            o[name] = true;
        } else if (res.size() == 1) {
            o[name] = res.front();
        } else {
            o[name] = res;
        }
    }
    return o;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_rerun(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    const auto doc = read_json_file(manifest_path, "--manifest");
    if (!doc.contains("argv") || !doc.at("argv").is_array()) throw UsageError("--manifest: missing argv");
    std::vector<std::string> argv;
    const auto& a = doc.at("argv");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto s = a[i].get<std::string>();
        if (s == "--manifest") {
            ++i;  // the rerun reports its own manifest on stderr
            continue;
        }
        if (s.rfind("--manifest=", 0) == 0) continue;
        argv.push_back(s);
    }
    return run(argv, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"volkit: GARCH estimation, goodness-of-fit and risk"};
    app.set_version_flag("--version", VOLKIT_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "write the run manifest to this file instead of stderr");

    // fit
    DataFlags fit_data;
    SpecFlags fit_spec;
    FitFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit; FitResult JSON on stdout");
    fit_data.add(fit_cmd, true);
    fit_spec.add(fit_cmd);
    fit_flags.add(fit_cmd);

    // gof
    DataFlags gof_data;
    SpecFlags gof_spec;
    FitFlags gof_fit_flags;
    FitSource gof_source;
    std::string null_kind = "gaussian";
    std::optional<std::size_t> bootstrap_n;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
    bool no_refit = false;
    double s_max = 0.99;
    std::string inner = "gk";
    std::string emit_process;
    std::string emit_null;
    auto* gof_cmd = app.add_subcommand("gof", "goodness-of-fit test of the innovation law; GofReport JSON on stdout");
    gof_data.add(gof_cmd, true);
    gof_spec.add(gof_cmd, false);
    gof_fit_flags.add(gof_cmd);
    gof_source.add(gof_cmd);
    gof_cmd->add_option("--null", null_kind, "gaussian (Khmaladze transform) | ged (EDF + bootstrap)")
        ->capture_default_str();
    gof_cmd->add_option("--bootstrap", bootstrap_n, "parametric bootstrap replicates (>= 99)");
    gof_cmd->add_option("--seed", seed, "bootstrap seed (required with --bootstrap)");
    gof_cmd->add_option("--jobs", jobs, "bootstrap worker threads (default: VOLKIT_JOBS or all cores)");
    gof_cmd->add_flag("--no-refit", no_refit, "bootstrap without refitting each replicate");
    gof_cmd->add_option("--s-max", s_max, "truncation point of the transform")->capture_default_str();
    gof_cmd->add_option("--inner", inner, "inner integral: gk | midpoint | tailsum")->capture_default_str();
    gof_cmd->add_option("--emit-process", emit_process, "write v,w pairs of the transformed process to CSV");
    gof_cmd->add_option("--emit-null", emit_null, "write the bootstrap null distribution to CSV");

    // risk
    DataFlags risk_data;
    SpecFlags risk_spec;
    FitFlags risk_fit_flags;
    FitSource risk_source;
    std::string levels = "0.01,0.05";
    auto* risk_cmd = app.add_subcommand("risk", "one-step-ahead VaR and ES; JSON on stdout");
    risk_data.add(risk_cmd, true);
    risk_spec.add(risk_cmd);
    risk_fit_flags.add(risk_cmd);
    risk_source.add(risk_cmd);
    risk_cmd->add_option("--levels", levels, "comma-separated tail levels in (0, 1)")->capture_default_str();

    // simulate
    SpecFlags sim_spec;
    std::size_t sim_n = 1000;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_params;
    std::string omega = "0.1";
    std::string alpha = "0.1";
    std::string beta = "0.8";
    double gamma = 0.0;
    double rho = 0.0;
    double mean = 0.0;
    double sigma1_sq = 1.0;
    double nu = 1.5;
    double start_price = 100.0;
    std::string start_date = "2020-01-01";
    std::string sim_out;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate a price path; CSV date,price,return,sigma_sq");
    sim_spec.add(sim_cmd);
    sim_cmd->add_option("--n", sim_n, "number of returns")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "random seed (required)")->required();
    sim_cmd->add_option("--params", sim_params, "parameter JSON (overrides the coefficient flags)");
    sim_cmd->add_option("--omega", omega, "omega")->capture_default_str();
    sim_cmd->add_option("--alpha", alpha, "alpha (comma list for garch q > 1)")->capture_default_str();
    sim_cmd->add_option("--beta", beta, "beta (comma list for garch p > 1)")->capture_default_str();
    sim_cmd->add_option("--gamma", gamma, "gjr / egarch asymmetry")->capture_default_str();
    sim_cmd->add_option("--rho", rho, "ngarch leverage")->capture_default_str();
    sim_cmd->add_option("--mean", mean, "constant mean")->capture_default_str();
    sim_cmd->add_option("--sigma1-sq", sigma1_sq, "initial variance")->capture_default_str();
    sim_cmd->add_option("--nu", nu, "GED shape (with --innovation ged)")->capture_default_str();
    sim_cmd->add_option("--start-price", start_price, "price before the first return")->capture_default_str();
    sim_cmd->add_option("--start-date", start_date, "date of the starting price (yyyy-mm-dd)")->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "output CSV (default stdout)");

    // diagnostics
    DataFlags diag_data;
    std::size_t max_lag = 20;
    bool summary = false;
    std::string diag_out;
    auto* diag_cmd = app.add_subcommand("diagnostics", "ACF/PACF CSV (lag,acf,pacf) and moment summary");
    diag_data.add(diag_cmd, true);
    diag_cmd->add_option("--max-lag", max_lag, "largest lag")->capture_default_str();
    diag_cmd->add_flag("--summary", summary, "print the moment summary as JSON on stdout");
    diag_cmd->add_option("--out", diag_out, "CSV output (default stdout unless --summary)");

    // rerun
    std::string rerun_manifest;
    auto* rerun_cmd = app.add_subcommand("rerun", "replay a run manifest");
    rerun_cmd->add_option("--manifest", rerun_manifest, "manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        std::ostringstream msg;
        app.exit(e, msg, msg);
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    if (rerun_cmd->parsed()) return run_rerun(rerun_manifest, out, err);

    const auto started = std::chrono::steady_clock::now();
    Manifest m;
    m.doc["tool"] = "volkit";
    m.doc["version"] = VOLKIT_VERSION;
    m.doc["argv"] = args;
    m.doc["started_at"] = utc_now();
    m.doc["spec"] = nullptr;
    m.doc["seed"] = nullptr;
    int code = kExitOk;
    std::ostringstream stdout_buf;

    const CLI::App* active = nullptr;
    try {
        if (fit_cmd->parsed()) {
            active = fit_cmd;
            const auto x = load_returns(fit_data, m);
            const auto fit = estimation::fit(fit_spec.build(fit_spec.innovation), x, fit_flags.options());
            auto j = serialize::fit_to_json(fit);
            j["stationarity"] = serialize::stationarity_to_json(garch::stationarity(fit.spec, fit.params));
            m.doc["spec"] = j["params"];
            stdout_buf << j.dump(2) << "\n";
            code = report_fit_status(fit, err);
        } else if (gof_cmd->parsed()) {
            active = gof_cmd;
            if (null_kind != "gaussian" && null_kind != "ged") {
                throw UsageError("--null: expected gaussian or ged, got '" + null_kind + "'");
            }
            if (bootstrap_n && !seed) throw UsageError("--seed: required with --bootstrap");
            gof::TransformOptions topt;
            topt.s_max = s_max;
            try {
                topt.inner = gof::parse_inner_integral(inner);
            } catch (const DomainError& e) {
                throw UsageError(std::string("--inner: ") + e.what());
            }
            if (!(s_max > 0.0 && s_max < 1.0)) throw UsageError("--s-max: must lie in (0, 1)");
            const auto x = load_returns(gof_data, m);
            const auto fit = gof_source.obtain(gof_spec, null_kind, gof_fit_flags, x, m);
            m.doc["spec"] = serialize::params_to_json(fit.spec, fit.params);
            json doc = {{"fit", serialize::fit_to_json(fit)}, {"bootstrap", nullptr}};
            code = report_fit_status(fit, err);
            if (code == kExitOk) {
                auto report = null_kind == "gaussian" ? gof::test_gaussian_innovations(fit.spec, fit.params, x, topt)
                                                      : gof::test_ged_innovations_edf(fit.spec, fit.params, x);
                if (bootstrap_n) {
                    bootstrap::BootstrapConfig cfg;
                    cfg.replicates = *bootstrap_n;
                    cfg.seed = *seed;
                    cfg.refit = !no_refit;
                    cfg.workers = resolve_jobs(jobs);
                    cfg.transform = topt;
                    cfg.fit_options = gof_fit_flags.options();
                    m.doc["seed"] = *seed;
                    const auto boot = bootstrap::bootstrap_pvalue(fit, x, cfg);
                    doc["bootstrap"] = serialize::bootstrap_to_json(boot);
                    if (null_kind == "ged") {
                        report.ks_pvalue = boot.ks_pvalue;
                        report.cvm_pvalue = boot.cvm_pvalue;
                    }
                    if (!emit_null.empty()) {
                        std::ostringstream csv;
                        bootstrap::write_null_csv(csv, boot);
                        write_text(emit_null, csv.str(), m);
                    }
                } else if (!emit_null.empty()) {
                    throw UsageError("--emit-null: requires --bootstrap");
                }
                if (!emit_process.empty()) {
                    if (!report.process) throw UsageError("--emit-process: only available with --null gaussian");
                    std::ostringstream csv;
                    csv << "v,w\n";
                    for (std::size_t i = 0; i < report.process->v.size(); ++i) {
                        csv << fmt(report.process->v[i]) << ',' << fmt(report.process->w[i]) << '\n';
                    }
                    write_text(emit_process, csv.str(), m);
                }
                doc["gof"] = serialize::gof_to_json(report);
            }
            stdout_buf << doc.dump(2) << "\n";
        } else if (risk_cmd->parsed()) {
            active = risk_cmd;
            const auto ps = parse_list(levels, "--levels");
            for (double p : ps) {
                if (!(p > 0.0 && p < 1.0)) throw UsageError("--levels: levels must lie in (0, 1), got " + fmt(p));
            }
            const auto x = load_returns(risk_data, m);
            const auto fit = risk_source.obtain(risk_spec, risk_spec.innovation, risk_fit_flags, x, m);
            m.doc["spec"] = serialize::params_to_json(fit.spec, fit.params);
            const auto r = risk::forecast(fit.spec, fit.params, x, ps);
            const json doc = {{"fit", serialize::fit_to_json(fit)}, {"risk", serialize::risk_to_json(r)}};
            stdout_buf << doc.dump(2) << "\n";
            code = report_fit_status(fit, err);
        } else if (sim_cmd->parsed()) {
            active = sim_cmd;
            garch::GarchSpec spec;
            garch::GarchParams params;
            if (!sim_params.empty()) {
                m.inputs.push_back(describe_input(sim_params));
                auto j = read_json_file(sim_params, "--params");
                if (j.contains("params")) j = j.at("params");
                try {
                    std::tie(spec, params) = serialize::params_from_json(j);
                } catch (const DomainError& e) {
                    throw UsageError(std::string("--params: ") + e.what());
                }
            } else {
                spec = sim_spec.build(sim_spec.innovation, nu);
                params.omega = parse_list(omega, "--omega").front();
                params.alpha = parse_list(alpha, "--alpha");
                params.beta = parse_list(beta, "--beta");
                params.gamma = gamma;
                params.rho = rho;
                params.mean = mean;
                params.sigma1_sq = sigma1_sq;
                if (spec.family == garch::Family::Garch) {
                    spec.q = static_cast<int>(params.alpha.size());
                    spec.p = static_cast<int>(params.beta.size());
                }
                if (spec.family == garch::Family::Augmented) {
                    throw UsageError("--family augmented: pass coefficients with --params");
                }
                try {
                    params.validate(spec);
                } catch (const DomainError& e) {
                    throw UsageError(std::string("coefficient flags: ") + e.what());
                }
            }
            if (!(start_price > 0.0)) throw UsageError("--start-price: must be positive");
            data::PriceSeries anchor;
            try {
                std::istringstream probe("date,price\n" + start_date + ",1\n");
                anchor = data::read_csv(probe);
            } catch (const ParseError&) {
                throw UsageError("--start-date: expected yyyy-mm-dd, got '" + start_date + "'");
            }
            m.doc["seed"] = *sim_seed;
            m.doc["spec"] = serialize::params_to_json(spec, params);
            numerics::RngStream g(*sim_seed, 0);
            const auto path = garch::simulate(spec, params, sim_n, g);
            std::ostringstream csv;
            csv << "date,price,return,sigma_sq\n";
            const std::int64_t day0 = anchor.epoch_seconds.front() / 86400;
            auto date_of = [&](std::int64_t offset) {
                using namespace std::chrono;
                const year_month_day ymd{sys_days{days{day0 + offset}}};
                char buf[16];
                std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                              static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
                return std::string(buf);
            };
            double price = start_price;
            csv << date_of(0) << ',' << fmt(price) << ",,\n";
            for (std::size_t i = 0; i < path.returns.size(); ++i) {
                price *= std::exp(path.returns[i]);
                csv << date_of(static_cast<std::int64_t>(i) + 1) << ',' << fmt(price) << ',' << fmt(path.returns[i])
                    << ',' << fmt(path.sigma_sq[i]) << '\n';
            }
            if (sim_out.empty()) {
                stdout_buf << csv.str();
            } else {
                write_text(sim_out, csv.str(), m);
            }
        } else if (diag_cmd->parsed()) {
            active = diag_cmd;
            const auto x = load_returns(diag_data, m);
            const auto d = data::diagnostics(x, max_lag);
            std::ostringstream csv;
            csv << "lag,acf,pacf\n";
            for (std::size_t k = 0; k < d.acf.size(); ++k) {
                csv << k << ',' << fmt(d.acf[k]) << ',' << fmt(d.pacf[k]) << '\n';
            }
            if (!diag_out.empty()) write_text(diag_out, csv.str(), m);
            if (summary) {
                stdout_buf << serialize::diagnostics_to_json(d).dump(2) << "\n";
            } else if (diag_out.empty()) {
                stdout_buf << csv.str();
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        code = kExitInput;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        code = kExitNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        code = kExitInput;
    }

    out << stdout_buf.str();
    out.flush();

    if (active != nullptr) {
        m.doc["command"] = active->get_name();
        m.doc["options"] = options_of(active);
    }
    m.doc["inputs"] = m.inputs;
    m.doc["outputs"] = m.outputs;
    m.doc["exit_code"] = code;
    m.doc["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (manifest_path.empty()) {
        err << "manifest: " << m.doc.dump() << "\n";
    } else {
        std::ofstream mf(manifest_path);
        mf << m.doc.dump(2) << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

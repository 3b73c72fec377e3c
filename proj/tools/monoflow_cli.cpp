// Command-line front end: JSON experiment configs in, CSV series and JSON
// reports out. Exit codes: 0 success, 2 config error, 3 blow-up, 4
// equilibrium-property violation, 5 decay-fit failure, 1 failed verdicts.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monoflow/equilibria.hpp"
#include "monoflow/linear.hpp"
#include "monoflow/models.hpp"
#include "monoflow/semiflow.hpp"
#include "monoflow/topologies.hpp"

using json = nlohmann::json;
using namespace monoflow;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    fs::path out = ".";
    unsigned seed = 1;
    int jobs = 1;
    std::optional<double> tolerance;
    json cfg;
};

CoefficientSignal parse_signal(const json& j) {
    if (j.is_number()) return CoefficientSignal::constant(j.get<double>());
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("signal spec needs a kind");
    std::string kind = j.at("kind");
    if (kind == "constant") return CoefficientSignal::constant(j.at("value").get<double>());
    if (kind == "step")
        return CoefficientSignal::step(j.at("period").get<double>(),
                                       j.at("breaks").get<std::vector<double>>(),
                                       j.at("values").get<std::vector<double>>());
    if (kind == "piecewise-linear")
        return CoefficientSignal::piecewise_linear(j.at("period").get<double>(),
                                                   j.at("nodes").get<std::vector<double>>(),
                                                   j.at("values").get<std::vector<double>>());
    if (kind == "quasiperiodic")
        return CoefficientSignal::quasi_periodic(j.at("base").get<double>(),
                                                 j.at("a1").get<double>(),
                                                 j.at("a2").get<double>());
    if (kind == "spike")
        return CoefficientSignal::spike(j.at("amplitude").get<double>(),
                                        j.at("period").get<double>());
    throw ConfigError("unknown signal kind: " + kind);
}

SaturationShape parse_shape(const std::string& name) {
    if (name == "rational") return SaturationShape::Rational;
    if (name == "exp") return SaturationShape::ExpSaturating;
    if (name == "clip") return SaturationShape::Clip;
    if (name == "identity") return SaturationShape::Identity;
    throw ConfigError("unknown shape: " + name);
}

ScalarPopulationModel parse_scalar_model(const json& cfg) {
    if (cfg.contains("preset")) return scalar_preset(cfg.at("preset").get<std::string>());
    if (!cfg.contains("model")) throw ConfigError("config needs a preset or an inline model");
    const auto& m = cfg.at("model");
    NonlinearitySpec h{parse_signal(m.at("base")), parse_signal(m.at("gain")),
                       parse_shape(m.value("shape", "rational"))};
    return make_scalar_population(parse_signal(m.at("alpha")), h);
}

bool is_cyclic(const json& cfg) {
    if (!cfg.contains("preset")) return cfg.contains("model") && cfg.at("model").contains("alphas");
    auto name = cfg.at("preset").get<std::string>();
    for (const auto& n : cyclic_preset_names())
        if (n == name) return true;
    return false;
}

CyclicFeedbackModel parse_cyclic_model(const json& cfg) {
    if (cfg.contains("preset")) return cyclic_preset(cfg.at("preset").get<std::string>());
    const auto& m = cfg.at("model");
    std::vector<CoefficientSignal> alphas;
    for (const auto& a : m.at("alphas")) alphas.push_back(parse_signal(a));
    NonlinearitySpec h{parse_signal(m.at("base")), parse_signal(m.at("gain")),
                       parse_shape(m.value("shape", "rational"))};
    return make_cyclic_feedback(std::move(alphas), h);
}

VectorField parse_field(const json& cfg) {
    if (is_cyclic(cfg)) return parse_cyclic_model(cfg).nonlinear();
    auto model = parse_scalar_model(cfg);
    if (cfg.value("variant", std::string("nonlinear")) == "majorant") return model.majorant();
    if (cfg.value("variant", std::string("nonlinear")) == "minorant") return model.minorant();
    return model.nonlinear();
}

History parse_history(const json& cfg, int dim) {
    if (!cfg.contains("history")) return History::constant(std::vector<double>(dim, 1.0));
    const auto& h = cfg.at("history");
    if (h.is_number()) return History::constant(std::vector<double>(dim, h.get<double>()));
    auto v = h.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != dim) throw ConfigError("history dimension mismatch");
    return History::constant(v);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << content;
}

void write_json(const fs::path& p, const json& j) { write_file(p, j.dump(2) + "\n"); }

int cmd_simulate(const Context& ctx) {
    auto f = parse_field(ctx.cfg);
    auto phi = parse_history(ctx.cfg, f.dim());
    double T = ctx.cfg.value("T", 40.0);
    SolveOptions opts;
    auto seg = solve_dde(f, phi, T, opts);
    write_file(ctx.out / "trajectory.csv", seg.to_csv(ctx.cfg.value("output_dt", 0.25)));
    json summary;
    summary["T"] = T;
    summary["dim"] = f.dim();
    bool blew_up = seg.status() == TrajectorySegment::Status::BlewUp;
    summary["status"] = blew_up ? "blow-up" : "complete";
    if (blew_up) {
        summary["blowup_time"] = seg.blowup_time();
    } else {
        json terminal = json::array();
        for (int c = 0; c < f.dim(); ++c) terminal.push_back(seg.value(T, c));
        summary["terminal"] = terminal;
    }
    write_json(ctx.out / "summary.json", summary);
    return blew_up ? 3 : 0;
}

int cmd_pullback(const Context& ctx) {
    double t_lo = ctx.cfg.value("t_lo", -40.0);
    double t_hi = ctx.cfg.value("t_hi", 6.0);
    double dt = ctx.cfg.value("dt", 0.5);
    PullbackOptions popts;
    popts.tau_step = ctx.cfg.value("tau_step", 2.0);
    popts.max_iterations = ctx.cfg.value("max_iterations", 40);
    if (ctx.tolerance) popts.tolerance = *ctx.tolerance;
    LinearTraceResult traces;
    VectorField f;
    if (is_cyclic(ctx.cfg)) {
        auto model = parse_cyclic_model(ctx.cfg);
        traces = equilibrium_traces_from_linear(model, t_lo, t_hi, dt);
        f = model.nonlinear();
    } else {
        auto model = parse_scalar_model(ctx.cfg);
        traces = equilibrium_traces_from_linear(model, t_lo, t_hi, dt);
        f = model.nonlinear();
    }
    write_file(ctx.out / "a.csv", traces.a.to_csv());
    write_file(ctx.out / "b.csv", traces.b.to_csv());
    try {
        auto lim = limit_equilibrium(f, traces.a, traces.b, popts);
        write_file(ctx.out / "u.csv", lim.u.to_csv());
        write_file(ctx.out / "v.csv", lim.v.to_csv());
        write_file(ctx.out / "diagnostics.json", lim.diagnostics.to_json() + "\n");
        return lim.diagnostics.converged ? 0 : 4;
    } catch (const std::runtime_error& e) {
        json err;
        err["error"] = e.what();
        write_json(ctx.out / "diagnostics.json", err);
        return 4;
    }
}

int cmd_verify(const Context& ctx) {
    std::string suite = ctx.cfg.value("suite", "assumptions");
    json report;
    report["suite"] = suite;
    bool pass = true;
    if (suite == "kamke") {
        auto f = parse_field(ctx.cfg);
        ConditionSampler sampler;
        sampler.seed = ctx.seed;
        if (ctx.tolerance) sampler.tolerance = *ctx.tolerance;
        std::vector<ConditionFlag> conds =
            f.delayed() ? std::vector<ConditionFlag>{ConditionFlag::Kx, ConditionFlag::Ky,
                                                     ConditionFlag::S}
                        : std::vector<ConditionFlag>{ConditionFlag::K1, ConditionFlag::S};
        // fan the independent condition checks out to the worker pool
        std::vector<std::future<ConditionReport>> futs;
        for (auto c : conds)
            futs.push_back(std::async(
                ctx.jobs > 1 ? std::launch::async : std::launch::deferred,
                [&, c] { return check_condition(f, c, sampler); }));
        json items = json::array();
        for (auto& fut : futs) {
            auto rep = fut.get();
            pass = pass && rep.pass;
            items.push_back(json::parse(rep.to_json()));
        }
        report["conditions"] = items;
    } else if (suite == "assumptions") {
        auto rep = is_cyclic(ctx.cfg) ? validate_assumptions(parse_cyclic_model(ctx.cfg))
                                      : validate_assumptions(parse_scalar_model(ctx.cfg));
        pass = rep.all_pass();
        report["assumptions"] = json::parse(rep.to_json());
    } else if (suite == "monotone") {
        auto f = parse_field(ctx.cfg);
        PairSampler sampler;
        sampler.seed = ctx.seed;
        sampler.count = ctx.cfg.value("trials", 50);
        HarnessOptions hopts;
        if (ctx.tolerance) hopts.budget = *ctx.tolerance;
        auto res = monotonicity_harness(f, sampler, hopts);
        pass = res.pass;
        report["harness"] = json::parse(res.to_json());
    } else {
        throw ConfigError("unknown suite: " + suite);
    }
    report["verdict"] = pass ? "pass" : "fail";
    write_json(ctx.out / "verify.json", report);
    return pass ? 0 : 1;
}

int cmd_distance(const Context& ctx) {
    auto basis = SeminormBasis::standard(1, ctx.seed);
    json report;
    if (ctx.cfg.contains("translations")) {
        // distance from the preset field to its time-translates f_{2^{-k}}
        auto f = parse_field(ctx.cfg);
        int kmax = ctx.cfg.at("translations").value("k_max", 10);
        std::ostringstream csv;
        csv.precision(17);
        csv << "k,shift,tp_distance\n";
        json series = json::array();
        for (int k = 0; k <= kmax; ++k) {
            double s = std::pow(2.0, -k);
            double d = tp_distance(translate(f, s), f, basis);
            csv << k << "," << s << "," << d << "\n";
            series.push_back(d);
        }
        write_file(ctx.out / "distance.csv", csv.str());
        report["series"] = series;
    } else {
        auto fa = parse_field(ctx.cfg.at("a"));
        auto fb = parse_field(ctx.cfg.at("b"));
        if (fa.dim() != fb.dim()) throw ConfigError("field dimensions differ");
        auto full = SeminormBasis::standard(fa.dim(), ctx.seed);
        auto rep = tp_distance_report(fa, fb, full);
        report["tp"] = json::parse(rep.to_json());
        report["sigma_p"] = sigma_p_distance(fa, fb, full);
    }
    write_json(ctx.out / "distance.json", report);
    return 0;
}

int cmd_decay(const Context& ctx) {
    double horizon = ctx.cfg.value("horizon", 40.0);
    DecayEstimate est;
    if (is_cyclic(ctx.cfg)) {
        auto model = parse_cyclic_model(ctx.cfg);
        est = fit_decay(
            FundamentalSolution::matrix_ode(model.alphas, model.beta(), 0.0, horizon));
    } else {
        auto model = parse_scalar_model(ctx.cfg);
        est = fit_decay(
            FundamentalSolution::scalar_delay(model.alpha, model.beta(), 0.0, horizon));
    }
    write_file(ctx.out / "decay.json", est.to_json() + "\n");
    return est.pass ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monoflow: monotone skew-product semiflow experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    unsigned seed = 1;
    int jobs = 1;
    double tolerance = -1.0;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized samplers");
    app.add_option("--jobs", jobs, "worker pool size for independent trials");
    app.add_option("--tolerance", tolerance, "override the default tolerance");
    auto* sim = app.add_subcommand("simulate", "integrate a model forward");
    auto* pull = app.add_subcommand("pullback", "iterate the pullback to the equilibrium");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    auto* dist = app.add_subcommand("distance", "field distances in the integral metrics");
    auto* decay = app.add_subcommand("decay", "fit exponential decay of the linear majorant");
    for (auto* sub : {sim, pull, verify, dist, decay}) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.seed = seed;
    ctx.jobs = std::max(1, jobs);
    if (tolerance > 0.0) ctx.tolerance = tolerance;
    if (const char* env = std::getenv("MONOFLOW_OUT"); env && *env) out_dir = env;
    ctx.out = out_dir;

    try {
        std::ifstream is(config_path);
        if (!is) throw ConfigError("cannot read config: " + config_path);
        try {
            ctx.cfg = json::parse(is);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        std::error_code ec;
        fs::create_directories(ctx.out, ec);
        if (sim->parsed()) return cmd_simulate(ctx);
        if (pull->parsed()) return cmd_pullback(ctx);
        if (verify->parsed()) return cmd_verify(ctx);
        if (dist->parsed()) return cmd_distance(ctx);
        if (decay->parsed()) return cmd_decay(ctx);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

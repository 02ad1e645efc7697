// uddmag CLI — reproducible data behind the coherence/sensitivity figures

#include "uddmag/bath.hpp"
#include "uddmag/coherence.hpp"
#include "uddmag/dephasing.hpp"
#include "uddmag/errors.hpp"
#include "uddmag/montecarlo.hpp"
#include "uddmag/sensitivity.hpp"
#include "uddmag/sequences.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    return os;
}

// stdout unless a path is given
struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream& stream() { return file ? *file : std::cout; }
    explicit Sink(const std::string& path) {
        if (!path.empty()) file = std::make_unique<std::ofstream>(open_out(path));
    }
};

void csv_header(std::ostream& os, const std::string& name, const std::string& columns) {
    os << "# uddmag csv " << name << " v1\n" << columns << "\n";
}

struct CommonOpts {
    double concentration = 0.011;
    double readout_c = 1.0;
    double pulse_width = 0.0;
    double pulse_error = 0.01;
    std::uint64_t seed = 20260810;
    std::string output;
    std::string format = "csv";
};

uddmag::MeasurementConfig to_config(const CommonOpts& o) {
    uddmag::MeasurementConfig cfg;
    cfg.C = o.readout_c;
    cfg.pulse_width = o.pulse_width;
    cfg.pulse_error = o.pulse_error;
    return cfg;
}

uddmag::PulseSequence make_seq(const std::string& kind, int n, int level, double tau) {
    if (kind == "hahn") return uddmag::hahn(tau);
    if (kind == "udd") return uddmag::udd(n, tau);
    if (kind == "cdd") return uddmag::cdd(level, tau);
    throw std::invalid_argument("unknown sequence kind: " + kind);
}

void write_sidecar(const std::string& output, const nlohmann::json& parameters,
                   std::uint64_t seed, int n_traj, const std::string& kind) {
    if (output.empty()) return;
    nlohmann::json meta;
    meta["seed"] = seed;
    meta["n_traj"] = n_traj;
    meta["kind"] = kind;
    meta["parameters"] = parameters;
    meta["tool_version"] = kVersion;
    std::ofstream os(open_out(output + ".meta.json"));
    os << meta.dump(2) << "\n";
}

// ----------------------------- subcommands ----------------------------------

void cmd_bath(const CommonOpts& o) {
    const auto env = uddmag::bath_from_concentration(o.concentration);
    const auto& k = uddmag::default_constants();
    const double th = uddmag::theta(env, k.gamma_e);
    const double t2_star = 1.0 / uddmag::gamma_rate(env.sigma0, 0, k.gamma_e);
    Sink sink(o.output);
    auto& os = sink.stream();
    if (o.format == "json") {
        nlohmann::json j;
        j["concentration"] = o.concentration;
        j["sigma0_T"] = env.sigma0;
        j["tau_int_s"] = env.tau_c;
        j["theta_int"] = th;
        j["t2_star_s"] = t2_star;
        os << j.dump(2) << "\n";
    } else {
        os << "concentration = " << fmt17(o.concentration) << "\n"
           << "sigma0_T = " << fmt17(env.sigma0) << "\n"
           << "tau_int_s = " << fmt17(env.tau_c) << "\n"
           << "theta_int = " << fmt17(th) << "\n"
           << "t2_star_s = " << fmt17(t2_star) << "\n";
    }
}

void cmd_sequence(const CommonOpts& o, const std::string& kind, int n, int level,
                  double tau, double tol, int max_order) {
    const auto seq = make_seq(kind, n, level, tau);
    Sink sink(o.output);
    uddmag::write_schedule(sink.stream(), seq);
    const auto rep = uddmag::make_report(seq, tol, max_order);
    std::ostream& ros = o.output.empty() ? std::cerr : std::cout;
    ros << "label = " << seq.label << "\n"
        << "pulses = " << seq.pulse_times.size() << "\n"
        << "suppression_order = " << rep.order << " (tol " << tol << ")\n";
    for (std::size_t m = 0; m < rep.residuals.size(); ++m)
        ros << "residual[" << m << "] = " << fmt17(rep.residuals[m])
            << "  lambda[" << m << "] = " << fmt17(rep.lambda[m]) << "\n";
}

void cmd_coherence(const CommonOpts& o, int n_max) {
    const auto env = uddmag::bath_from_concentration(o.concentration);
    std::vector<int> counts(n_max + 1);
    for (int i = 0; i <= n_max; ++i) counts[i] = i;
    const auto curve =
        uddmag::coherence_curve(counts, env, uddmag::default_constants().gamma_e);
    Sink sink(o.output);
    auto& os = sink.stream();
    csv_header(os, "coherence", "pulses,t2_s,capped");
    for (const auto& pt : curve)
        os << pt.pulses << "," << fmt17(pt.t2) << "," << (pt.capped ? 1 : 0) << "\n";
}

void cmd_sensitivity(const CommonOpts& o, const std::string& mode, int n_max,
                     double theta_ext) {
    const auto env = uddmag::bath_from_concentration(o.concentration);
    const auto cfg = to_config(o);
    Sink sink(o.output);
    auto& os = sink.stream();
    csv_header(os, "sensitivity", "pulses,tau_s,eta_T_per_sqrtHz,mode,penalty");
    for (int n = 0; n <= n_max; ++n) {
        const auto opt = uddmag::optimal_tau(n, env, cfg);
        const double pen = uddmag::pulse_penalty(n, env, cfg);
        double eta = pen * opt.eta;
        if (mode == "ac")
            eta *= std::numbers::pi / 2.0;
        else if (mode == "fluctuating")
            eta *= 2.0 * theta_ext;
        else if (mode != "telegraph")
            throw std::invalid_argument("unknown mode: " + mode);
        os << n << "," << fmt17(opt.tau) << "," << fmt17(eta) << "," << mode << ","
           << fmt17(pen) << "\n";
    }
}

void cmd_mc_envelope(const CommonOpts& o, const std::string& kind_name,
                     const std::string& seq_kind, int n, int level, double t_max,
                     int points, int n_traj, double dt, int threads) {
    const auto env = uddmag::bath_from_concentration(o.concentration);
    const double gamma = uddmag::default_constants().gamma_e;
    const uddmag::NoiseKind kind = [&] {
        if (kind_name == "ou") return uddmag::NoiseKind::ou;
        if (kind_name == "smooth") return uddmag::NoiseKind::smooth_gaussian;
        throw std::invalid_argument("unknown noise kind: " + kind_name);
    }();
    if (t_max <= 0.0) t_max = 0.25 * env.tau_c;
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = t_max * (i + 1) / points;
    auto family = [&](double t) { return make_seq(seq_kind, n, level, t); };
    uddmag::MCOptions opts;
    opts.dt = dt;
    opts.n_threads = threads;
    const auto est =
        uddmag::mc_envelope(family, env, kind, gamma, n_traj, grid, o.seed, opts);
    Sink sink(o.output);
    auto& os = sink.stream();
    csv_header(os, "mc_envelope", "t_s,envelope,stderr");
    for (std::size_t i = 0; i < est.times.size(); ++i)
        os << fmt17(est.times[i]) << "," << fmt17(est.envelope[i]) << ","
           << fmt17(est.stderrs[i]) << "\n";
    nlohmann::json params;
    params["concentration"] = o.concentration;
    params["sequence"] = seq_kind;
    params["pulses"] = n;
    params["level"] = level;
    params["t_max_s"] = t_max;
    params["points"] = points;
    params["dt_s"] = dt;
    write_sidecar(o.output, params, o.seed, n_traj, kind_name);
}

void cmd_mc_fastrate(const CommonOpts& o, double sigma_ext, double tau_ext,
                     const std::string& seq_kind, int n, int level, int n_traj,
                     double dt, int threads) {
    const double gamma = uddmag::default_constants().gamma_e;
    const auto seq = make_seq(seq_kind, n, level, 1.0);
    uddmag::MCOptions opts;
    opts.dt = dt;
    opts.n_threads = threads;
    const double fitted =
        uddmag::mc_fast_field_rate(sigma_ext, tau_ext, seq, gamma, n_traj, o.seed, opts);
    uddmag::MeasurementConfig cfg;
    const double formula = uddmag::gamma_ext(sigma_ext, tau_ext, cfg);
    Sink sink(o.output);
    auto& os = sink.stream();
    csv_header(os, "mc_fastrate", "fitted_rate_per_s,formula_rate_per_s");
    os << fmt17(fitted) << "," << fmt17(formula) << "\n";
    nlohmann::json params;
    params["sigma_ext_T"] = sigma_ext;
    params["tau_ext_s"] = tau_ext;
    params["sequence"] = seq_kind;
    params["pulses"] = n;
    params["theta_ext"] = 1.0 / (gamma * sigma_ext * tau_ext);
    write_sidecar(o.output, params, o.seed, n_traj, "ou");
}

// ------------------------------- presets ------------------------------------

std::string conc_tag(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", c);
    return buf;
}

void preset_fig2a(const std::string& dir) {
    const auto env = uddmag::bath_from_concentration(0.011);
    const double gamma = uddmag::default_constants().gamma_e;
    auto os = open_out(dir + "/fig2a_envelopes.csv");
    csv_header(os, "envelopes", "pulses,t_s,envelope");
    for (int n : {0, 1, 2, 3, 5, 10, 20, 50}) {
        const auto seq = uddmag::udd(n, 1.0);
        const int trunc = uddmag::choose_truncation(seq, env, gamma, env.tau_c);
        const auto model = uddmag::modified_model(seq, env, gamma, trunc);
        for (int i = 0; i <= 200; ++i) {
            const double t = env.tau_c * i / 200.0;
            os << n << "," << fmt17(t) << "," << fmt17(uddmag::envelope(model, t)) << "\n";
        }
    }
    std::cout << "wrote " << dir << "/fig2a_envelopes.csv\n";
}

void preset_fig2b(const std::string& dir) {
    for (double c : {0.003, 0.011}) {
        CommonOpts o;
        o.concentration = c;
        o.output = dir + "/fig2b_coherence_c" + conc_tag(c) + ".csv";
        cmd_coherence(o, 50);
        std::cout << "wrote " << o.output << "\n";
    }
}

void preset_fig3(const std::string& dir, bool realistic) {
    for (double c : {0.003, 0.011}) {
        CommonOpts o;
        o.concentration = c;
        o.pulse_width = realistic ? 50e-9 : 0.0;
        o.pulse_error = realistic ? 0.01 : 0.0;
        const std::string tag = realistic ? "fig3b" : "fig3a";
        o.output = dir + "/" + tag + "_sensitivity_c" + conc_tag(c) + ".csv";
        cmd_sensitivity(o, "telegraph", 40, 0.0);
        std::cout << "wrote " << o.output << "\n";
        if (!realistic) {
            const auto env = uddmag::bath_from_concentration(c);
            const auto cfg = to_config(o);
            auto os = open_out(dir + "/fig3a_upper_bound_c" + conc_tag(c) + ".csv");
            csv_header(os, "upper_bound", "pulses,eta_plus_T_per_sqrtHz");
            for (int n = 1; n <= 40; ++n)
                os << n << "," << fmt17(uddmag::eta_upper_bound(n, env, cfg)) << "\n";
            std::cout << "wrote " << dir << "/fig3a_upper_bound_c" << conc_tag(c)
                      << ".csv\n";
        } else {
            const auto env = uddmag::bath_from_concentration(c);
            const auto best = uddmag::optimize_pulses(env, to_config(o), 40);
            std::cout << "optimum c=" << conc_tag(c) << ": n = " << best.pulses
                      << ", eta = " << fmt17(best.eta) << " T/sqrt(Hz), tau = "
                      << fmt17(best.tau) << " s\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-qubit dephasing under Uhrig dynamic decoupling: bath "
                 "parameters, pulse sequences, coherence times, magnetometer "
                 "sensitivity, and Monte Carlo validation"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "flat key=value config file, overridden by flags");
    app.require_subcommand(1);

    CommonOpts o;
    app.add_option("--concentration", o.concentration, "13C isotope fraction")
        ->capture_default_str();
    app.add_option("--readout-c", o.readout_c, "readout efficiency C in (0,1]")
        ->capture_default_str();
    app.add_option("--pulse-width", o.pulse_width, "pi-pulse duration [s]")
        ->capture_default_str();
    app.add_option("--pulse-error", o.pulse_error, "per-pulse fidelity loss")
        ->capture_default_str();
    app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    app.add_option("--output,-o", o.output, "output file (default stdout)");
    app.add_option("--format", o.format, "bath report format: csv|text|json")
        ->capture_default_str();

    auto* bath_cmd = app.add_subcommand("bath", "bath parameters for a concentration");

    auto* seq_cmd = app.add_subcommand("sequence", "pulse schedule + suppression report");
    std::string seq_kind = "udd";
    int seq_n = 1, seq_level = 1, rep_order = 8;
    double seq_tau = 1.0, seq_tol = 1e-9;
    seq_cmd->add_option("--kind", seq_kind, "udd|hahn|cdd")->capture_default_str();
    seq_cmd->add_option("-n,--pulses", seq_n, "pulse count (udd)")->capture_default_str();
    seq_cmd->add_option("-l,--level", seq_level, "recursion level (cdd)")
        ->capture_default_str();
    seq_cmd->add_option("--tau", seq_tau, "interrogation time [s]")->capture_default_str();
    seq_cmd->add_option("--tol", seq_tol, "suppression tolerance")->capture_default_str();
    seq_cmd->add_option("--max-order", rep_order, "report orders 0..max")
        ->capture_default_str();

    auto* coh_cmd = app.add_subcommand("coherence", "coherence time vs pulse count");
    int coh_nmax = 50;
    coh_cmd->add_option("--n-max", coh_nmax, "largest pulse count")->capture_default_str();

    auto* sens_cmd = app.add_subcommand("sensitivity", "optimized sensitivity vs pulse count");
    std::string sens_mode = "telegraph";
    int sens_nmax = 40;
    double sens_theta_ext = 10.0;
    sens_cmd->add_option("--mode", sens_mode, "telegraph|ac|fluctuating")
        ->capture_default_str();
    sens_cmd->add_option("--n-max", sens_nmax, "largest pulse count")->capture_default_str();
    sens_cmd->add_option("--theta-ext", sens_theta_ext, "fluctuating-mode Theta_ext")
        ->capture_default_str();

    auto* mc_cmd = app.add_subcommand("montecarlo", "stochastic envelope / rate runs");
    mc_cmd->require_subcommand(1);
    auto* mc_env_cmd = mc_cmd->add_subcommand("envelope", "empirical dephasing envelope");
    std::string mc_kind = "smooth", mc_seq = "hahn";
    int mc_n = 1, mc_level = 1, mc_points = 24, mc_traj = 20000, mc_threads = 0;
    double mc_tmax = 0.0, mc_dt = 0.0;
    mc_env_cmd->add_option("--kind", mc_kind, "ou|smooth")->capture_default_str();
    mc_env_cmd->add_option("--seq", mc_seq, "udd|hahn|cdd")->capture_default_str();
    mc_env_cmd->add_option("-n,--pulses", mc_n, "pulse count (udd)")->capture_default_str();
    mc_env_cmd->add_option("-l,--level", mc_level, "recursion level (cdd)")
        ->capture_default_str();
    mc_env_cmd->add_option("--t-max", mc_tmax, "largest grid time [s] (0 = tau_c/4)")
        ->capture_default_str();
    mc_env_cmd->add_option("--points", mc_points, "grid points")->capture_default_str();
    mc_env_cmd->add_option("--n-traj", mc_traj, "ensemble size (>= 1000)")
        ->capture_default_str();
    mc_env_cmd->add_option("--dt", mc_dt, "sample step [s] (0 = auto)")
        ->capture_default_str();
    mc_env_cmd->add_option("--threads", mc_threads, "worker threads (0 = auto)")
        ->capture_default_str();

    auto* mc_fast_cmd = mc_cmd->add_subcommand("fastrate", "motional-narrowing rate fit");
    double fr_sigma = 2.8395221936838372e-10, fr_tau = 1e-3, fr_dt = 0.0;
    std::string fr_seq = "udd";
    int fr_n = 0, fr_level = 1, fr_traj = 20000, fr_threads = 0;
    mc_fast_cmd->add_option("--sigma-ext", fr_sigma, "external RMS field [T]")
        ->capture_default_str();
    mc_fast_cmd->add_option("--tau-ext", fr_tau, "external correlation time [s]")
        ->capture_default_str();
    mc_fast_cmd->add_option("--seq", fr_seq, "udd|hahn|cdd")->capture_default_str();
    mc_fast_cmd->add_option("-n,--pulses", fr_n, "pulse count (udd)")->capture_default_str();
    mc_fast_cmd->add_option("-l,--level", fr_level, "recursion level (cdd)")
        ->capture_default_str();
    mc_fast_cmd->add_option("--n-traj", fr_traj, "ensemble size (>= 1000)")
        ->capture_default_str();
    mc_fast_cmd->add_option("--dt", fr_dt, "sample step [s] (0 = tau_ext/100)")
        ->capture_default_str();
    mc_fast_cmd->add_option("--threads", fr_threads, "worker threads (0 = auto)")
        ->capture_default_str();

    std::string preset_dir = ".";
    auto* fig2a = app.add_subcommand("fig2a", "preset: 1.1% bath envelopes");
    auto* fig2b = app.add_subcommand("fig2b", "preset: coherence curves, 0.3%/1.1%");
    auto* fig3a = app.add_subcommand("fig3a", "preset: ideal-pulse sensitivities + bound");
    auto* fig3b = app.add_subcommand("fig3b", "preset: 50 ns / 1% pulse sensitivities");
    for (auto* p : {fig2a, fig2b, fig3a, fig3b})
        p->add_option("--output-dir", preset_dir, "directory for preset CSVs")
            ->capture_default_str();

    // shared options may follow the subcommand name
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
        if (bath_cmd->parsed()) cmd_bath(o);
        if (seq_cmd->parsed()) cmd_sequence(o, seq_kind, seq_n, seq_level, seq_tau,
                                            seq_tol, rep_order);
        if (coh_cmd->parsed()) cmd_coherence(o, coh_nmax);
        if (sens_cmd->parsed()) cmd_sensitivity(o, sens_mode, sens_nmax, sens_theta_ext);
        if (mc_env_cmd->parsed())
            cmd_mc_envelope(o, mc_kind, mc_seq, mc_n, mc_level, mc_tmax, mc_points,
                            mc_traj, mc_dt, mc_threads);
        if (mc_fast_cmd->parsed())
            cmd_mc_fastrate(o, fr_sigma, fr_tau, fr_seq, fr_n, fr_level, fr_traj, fr_dt,
                            fr_threads);
        if (fig2a->parsed()) preset_fig2a(preset_dir);
        if (fig2b->parsed()) preset_fig2b(preset_dir);
        if (fig3a->parsed()) preset_fig3(preset_dir, false);
        if (fig3b->parsed()) preset_fig3(preset_dir, true);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const uddmag::regime_error& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const uddmag::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "uddmag/montecarlo.hpp"

#include "uddmag/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

namespace uddmag {

namespace {

// --------------------------- deterministic RNG ------------------------------

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// per-path sub-seed; parallel and serial runs draw identical streams
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

// Box-Muller over mt19937_64; bit-reproducible for a given binary
class GaussianGen {
public:
    explicit GaussianGen(std::uint64_t seed) : eng_(seed) {}
    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// ------------------------------- samplers -----------------------------------

void check_sampling(const NoiseEnvironment& env, double dt, double t_max) {
    if (!(env.sigma0 >= 0.0) || !(env.tau_c > 0.0))
        throw std::domain_error("invalid environment");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(dt <= env.tau_c / 100.0))
        throw resolution_error("dt must be <= tau_c/100 to resolve the process");
    if (!(t_max > dt)) throw std::invalid_argument("t_max must exceed dt");
}

std::size_t step_count(double dt, double t_max) {
    return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

void fill_ou(std::vector<double>& samples, const NoiseEnvironment& env, double dt,
             GaussianGen& gen) {
    const double rho = std::exp(-dt / env.tau_c);
    const double q = env.sigma0 * std::sqrt(1.0 - rho * rho);
    samples[0] = env.sigma0 * gen();
    for (std::size_t i = 1; i < samples.size(); ++i)
        samples[i] = rho * samples[i - 1] + q * gen();
}

constexpr std::size_t kMaxDensePoints = 8192;

// Cholesky factor of the squared-exponential kernel on a uniform grid
class SmoothSampler {
public:
    SmoothSampler(const NoiseEnvironment& env, double dt, std::size_t n_points)
        : sigma0_(env.sigma0), n_(n_points) {
        if (n_points > kMaxDensePoints)
            throw resource_error("smooth sampler limited to 8192 points per path");
        Eigen::MatrixXd K(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double s = (static_cast<double>(i) - static_cast<double>(j)) * dt /
                                 env.tau_c;
                K(i, j) = K(j, i) = std::exp(-0.5 * s * s);
            }
        // SE kernels are near-singular on dense grids; add the smallest jitter
        // that makes the factorization succeed
        for (double jitter = 1e-12; jitter <= 1e-5; jitter *= 10.0) {
            Eigen::LLT<Eigen::MatrixXd> llt(
                K + jitter * Eigen::MatrixXd::Identity(n_, n_));
            if (llt.info() == Eigen::Success) {
                L_ = llt.matrixL();
                return;
            }
        }
        throw std::runtime_error("smooth kernel factorization failed");
    }

    void draw(std::vector<double>& samples, GaussianGen& gen) const {
        Eigen::VectorXd z(n_);
        for (std::size_t i = 0; i < n_; ++i) z[i] = gen();
        Eigen::VectorXd b = L_ * z;
        for (std::size_t i = 0; i < n_; ++i) samples[i] = sigma0_ * b[i];
    }

private:
    double sigma0_;
    std::size_t n_;
    Eigen::MatrixXd L_;
};

double interp(const std::vector<double>& s, double dt, double x) {
    const double pos = x / dt;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= s.size()) return s.back();
    const double frac = pos - static_cast<double>(i);
    return s[i] + (s[i + 1] - s[i]) * frac;
}

// trapezoid on the sample grid, split exactly at pulse times
double switched_integral(const std::vector<double>& pulses, const std::vector<double>& B,
                         double dt, double t_end) {
    if (t_end == 0.0) return 0.0;
    KahanSum acc;
    double sign = 1.0;
    std::size_t ip = 0;
    double cur_t = 0.0;
    double cur_B = B[0];
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double seg_end = std::min(static_cast<double>(i + 1) * dt, t_end);
        const double B_end = interp(B, dt, seg_end);
        while (ip < pulses.size() && pulses[ip] <= seg_end && pulses[ip] < t_end) {
            const double p = pulses[ip];
            if (p > cur_t) {
                const double Bp = interp(B, dt, p);
                acc.add(sign * 0.5 * (cur_B + Bp) * (p - cur_t));
                cur_t = p;
                cur_B = Bp;
            }
            sign = -sign;
            ++ip;
        }
        acc.add(sign * 0.5 * (cur_B + B_end) * (seg_end - cur_t));
        cur_t = seg_end;
        cur_B = B_end;
    }
    return acc.value();
}

}  // namespace

Trajectory sample_ou(const NoiseEnvironment& env, double dt, double t_max,
                     std::uint64_t seed) {
    check_sampling(env, dt, t_max);
    Trajectory traj;
    traj.dt = dt;
    traj.kind = NoiseKind::ou;
    traj.samples.resize(step_count(dt, t_max) + 1);
    GaussianGen gen(path_seed(seed, 0));
    fill_ou(traj.samples, env, dt, gen);
    return traj;
}

Trajectory sample_smooth(const NoiseEnvironment& env, double dt, double t_max,
                         std::uint64_t seed) {
    check_sampling(env, dt, t_max);
    Trajectory traj;
    traj.dt = dt;
    traj.kind = NoiseKind::smooth_gaussian;
    const std::size_t n = step_count(dt, t_max) + 1;
    traj.samples.resize(n);
    SmoothSampler sampler(env, dt, n);
    GaussianGen gen(path_seed(seed, 0));
    sampler.draw(traj.samples, gen);
    return traj;
}

double phase_integral(const PulseSequence& seq, const Trajectory& traj, double t) {
    if (traj.samples.size() < 2 || !(traj.dt > 0.0))
        throw std::invalid_argument("trajectory needs dt > 0 and >= 2 samples");
    const double span = traj.dt * static_cast<double>(traj.samples.size() - 1);
    if (!(t >= 0.0) || t > span * (1.0 + 1e-12))
        throw std::domain_error("t outside the sampled span");
    return switched_integral(seq.pulse_times, traj.samples, traj.dt, std::min(t, span));
}

namespace {

// shared ensemble engine: chunked, deterministic, thread-count independent
struct EnsembleResult {
    std::vector<double> mean;
    std::vector<double> stderrs;
};

EnsembleResult run_ensemble(const std::vector<PulseSequence>& windows,
                            const std::vector<double>& t_grid,
                            const NoiseEnvironment& env, NoiseKind kind, double gamma,
                            int n_traj, std::uint64_t seed, double dt, int n_threads) {
    const std::size_t nt = t_grid.size();
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const std::size_t n_samples = step_count(dt, t_max) + 1;

    std::optional<SmoothSampler> smooth;
    if (kind == NoiseKind::smooth_gaussian) smooth.emplace(env, dt, n_samples);

    constexpr int kChunk = 256;
    const int n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> chunk_sum(n_chunks), chunk_sum2(n_chunks);

    auto run_chunk = [&](int c) {
        std::vector<double> samples(n_samples);
        std::vector<KahanSum> s1(nt), s2(nt);
        const int begin = c * kChunk;
        const int end = std::min(n_traj, begin + kChunk);
        for (int p = begin; p < end; ++p) {
            GaussianGen gen(path_seed(seed, static_cast<std::uint64_t>(p)));
            if (kind == NoiseKind::ou)
                fill_ou(samples, env, dt, gen);
            else
                smooth->draw(samples, gen);
            for (std::size_t i = 0; i < nt; ++i) {
                if (t_grid[i] == 0.0) continue;
                const double phi =
                    gamma * switched_integral(windows[i].pulse_times, samples, dt, t_grid[i]);
                const double cphi = std::cos(phi);
                s1[i].add(cphi);
                s2[i].add(cphi * cphi);
            }
        }
        chunk_sum[c].resize(nt);
        chunk_sum2[c].resize(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            chunk_sum[c][i] = s1[i].value();
            chunk_sum2[c][i] = s2[i].value();
        }
    };

    int hw = n_threads > 0 ? n_threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    hw = std::min(hw, n_chunks);
    if (hw <= 1) {
        for (int c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(hw);
        for (int t = 0; t < hw; ++t)
            pool.emplace_back([&, t] {
                for (int c = t; c < n_chunks; c += hw) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    // fixed-order merge: independent of thread count
    EnsembleResult out;
    out.mean.resize(nt);
    out.stderrs.resize(nt);
    const double n = n_traj;
    for (std::size_t i = 0; i < nt; ++i) {
        if (t_grid[i] == 0.0) {
            out.mean[i] = 1.0;
            out.stderrs[i] = 0.0;
            continue;
        }
        KahanSum s1, s2;
        for (int c = 0; c < n_chunks; ++c) {
            s1.add(chunk_sum[c][i]);
            s2.add(chunk_sum2[c][i]);
        }
        const double mean = s1.value() / n;
        const double var = std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0));
        out.mean[i] = mean;
        out.stderrs[i] = std::sqrt(var / n);
    }
    return out;
}

double auto_dt(const NoiseEnvironment& env, NoiseKind kind,
               const std::vector<double>& t_grid, double requested) {
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    double dt = requested;
    if (dt <= 0.0) {
        dt = env.tau_c / 400.0;
        double t_min_pos = t_max;
        for (double t : t_grid)
            if (t > 0.0) t_min_pos = std::min(t_min_pos, t);
        dt = std::min(dt, t_min_pos / 32.0);
        if (kind == NoiseKind::smooth_gaussian && t_max / dt > 4000.0)
            dt = t_max / 4000.0;
    }
    if (!(dt <= env.tau_c / 100.0))
        throw resolution_error("window too long for the smooth sampler at tau_c/100 "
                               "resolution; use kind=ou or a shorter grid");
    return dt;
}

}  // namespace

MCEstimate mc_envelope(const std::function<PulseSequence(double)>& seq_family,
                       const NoiseEnvironment& env, NoiseKind kind, double gamma,
                       int n_traj, const std::vector<double>& t_grid,
                       std::uint64_t seed, const MCOptions& opts) {
    if (n_traj < 1000) throw std::invalid_argument("n_traj must be >= 1000");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (t_grid.empty()) throw std::invalid_argument("t_grid must be non-empty");
    for (double t : t_grid)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::invalid_argument("grid times must be finite and >= 0");
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    if (!(t_max > 0.0)) throw std::invalid_argument("grid needs a positive time");

    const double dt = auto_dt(env, kind, t_grid, opts.dt);
    check_sampling(env, dt, t_max);

    // precompute windows up-front (also keeps callbacks off worker threads)
    std::vector<PulseSequence> windows(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (t_grid[i] > 0.0) windows[i] = seq_family(t_grid[i]);

    EnsembleResult res = run_ensemble(windows, t_grid, env, kind, gamma, n_traj, seed,
                                      dt, opts.n_threads);
    MCEstimate est;
    est.times = t_grid;
    est.envelope = std::move(res.mean);
    est.stderrs = std::move(res.stderrs);
    est.n_traj = n_traj;
    est.seed = seed;
    return est;
}

double mc_fast_field_rate(double sigma_ext, double tau_ext, const PulseSequence& seq,
                          double gamma, int n_traj, std::uint64_t seed,
                          const MCOptions& opts) {
    if (!(sigma_ext >= 0.0)) throw std::domain_error("sigma_ext must be >= 0");
    if (!(tau_ext > 0.0)) throw std::domain_error("tau_ext must be > 0");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be > 0");
    if (n_traj < 1000) throw std::invalid_argument("n_traj must be >= 1000");
    if (sigma_ext == 0.0) return 0.0;
    const double theta_ext = 1.0 / (gamma * sigma_ext * tau_ext);
    if (!(theta_ext > 5.0))
        throw regime_error("mc_fast_field_rate requires deep motional narrowing "
                           "(Theta_ext > 5)");

    const double rate_scale = gamma * gamma * sigma_ext * sigma_ext * tau_ext;
    const double t_max = 1.2 / rate_scale;  // grid placement only
    double dt = opts.dt > 0.0 ? opts.dt : tau_ext / 100.0;
    if (!(dt <= tau_ext / 100.0))
        throw resolution_error("dt must be <= tau_ext/100");
    if (t_max / dt > 1e7) throw resource_error("fit window needs > 1e7 steps per path");

    const NoiseEnvironment env = make_environment(sigma_ext, tau_ext);
    constexpr int kPoints = 12;
    std::vector<double> grid(kPoints);
    for (int i = 0; i < kPoints; ++i) grid[i] = t_max * (i + 1) / kPoints;

    std::vector<double> fractions;
    fractions.reserve(seq.pulse_times.size());
    for (double p : seq.pulse_times) fractions.push_back(p / seq.total_time);
    std::vector<PulseSequence> windows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        windows[i].total_time = grid[i];
        windows[i].label = seq.label;
        for (double f : fractions) windows[i].pulse_times.push_back(f * grid[i]);
    }

    EnsembleResult res = run_ensemble(windows, grid, env, NoiseKind::ou, gamma, n_traj,
                                      seed, dt, opts.n_threads);

    // through-origin fit of -log(envelope) on t over well-resolved points
    double sty = 0.0, stt = 0.0;
    std::vector<std::pair<double, double>> kept;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (res.mean[i] > 0.15) {
            const double y = -std::log(res.mean[i]);
            kept.emplace_back(grid[i], y);
            sty += grid[i] * y;
            stt += grid[i] * grid[i];
        }
    }
    if (kept.size() < 4)
        throw regime_error("envelope decays too fast for an exponential fit");
    const double rate = sty / stt;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [t, y] : kept) {
        ss_res += (y - rate * t) * (y - rate * t);
        ss_tot += y * y;
    }
    if (ss_tot < 1e-18) return 0.0;  // no measurable decay
    if (ss_res > 0.1 * ss_tot)
        throw regime_error("empirical envelope is not exponential in the fit window");
    return rate;
}

}  // namespace uddmag

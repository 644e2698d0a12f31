#include "bmx/sde.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>

#include "bmx/errors.hpp"

namespace bmx {

namespace {

// splitmix64: the canonical 64-bit seeding mixer.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with a cached spare normal (Marsaglia polar method).  Each
// path owns one generator keyed by (base seed, path index), so the ensemble
// is reproducible independently of how paths are scheduled onto threads.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t path_index) {
        std::uint64_t mix = seed ^ (0x9E3779B97F4A7C15ULL * (path_index + 1));
        for (auto& word : s_) {
            word = splitmix64(mix);
        }
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, r2;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

  private:
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Per-record-point accumulators: sums of x, x^2, x^4, p, p^2, p^4, p*x and
// (p*x)^2 over the paths of one block.
struct MomentSums {
    double x = 0.0, x2 = 0.0, x4 = 0.0;
    double p = 0.0, p2 = 0.0, p4 = 0.0;
    double px = 0.0, px2 = 0.0;

    void add(double xv, double pv) {
        const double xx = xv * xv;
        const double pp = pv * pv;
        const double xp = xv * pv;
        x += xv;
        x2 += xx;
        x4 += xx * xx;
        p += pv;
        p2 += pp;
        p4 += pp * pp;
        px += xp;
        px2 += xp * xp;
    }

    void merge(const MomentSums& other) {
        x += other.x;
        x2 += other.x2;
        x4 += other.x4;
        p += other.p;
        p2 += other.p2;
        p4 += other.p4;
        px += other.px;
        px2 += other.px2;
    }
};

struct RecordPlan {
    std::vector<double> times;                    // snapped record times
    std::vector<std::int64_t> steps;              // step index per record slot
    std::vector<std::pair<std::int64_t, std::size_t>> schedule;  // sorted by step
    std::int64_t n_steps = 0;
};

RecordPlan plan_records(const SimulationConfig& cfg) {
    if (!(cfg.dt > 0.0)) {
        throw config_error("simulation requires a positive time step");
    }
    if (!(cfg.t_end > 0.0)) {
        throw config_error("simulation requires a positive end time");
    }
    if (cfg.n_paths == 0) {
        throw config_error("simulation requires at least one path");
    }
    if (cfg.record_times.empty()) {
        throw config_error("simulation requires at least one record time");
    }
    RecordPlan plan;
    plan.n_steps = std::max<std::int64_t>(1, std::llround(cfg.t_end / cfg.dt));
    for (std::size_t slot = 0; slot < cfg.record_times.size(); ++slot) {
        const double t = cfg.record_times[slot];
        if (!(t >= 0.0)) {
            throw config_error("record times must be non-negative");
        }
        const std::int64_t step = std::llround(t / cfg.dt);
        if (step > plan.n_steps) {
            throw config_error("record time lies beyond the simulated interval");
        }
        plan.steps.push_back(step);
        plan.times.push_back(static_cast<double>(step) * cfg.dt);
        plan.schedule.emplace_back(step, slot);
    }
    std::sort(plan.schedule.begin(), plan.schedule.end());
    return plan;
}

// Shared Euler-Maruyama driver.  `step` advances one path by one time step
// given (x, p, step index, rng); `sample` draws the initial state.
template <typename InitFn, typename StepFn>
std::vector<MomentSums> run_ensemble(const SimulationConfig& cfg, const RecordPlan& plan,
                                     const InitFn& sample, const StepFn& step) {
    constexpr std::uint64_t kBlock = 256;  // paths per reduction block
    const std::uint64_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    std::vector<std::vector<MomentSums>> block_sums(
        n_blocks, std::vector<MomentSums>(plan.times.size()));

    std::atomic<std::uint64_t> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) {
                return;
            }
            auto& sums = block_sums[b];
            const std::uint64_t lo = b * kBlock;
            const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlock, cfg.n_paths);
            for (std::uint64_t path = lo; path < hi; ++path) {
                PathRng rng(cfg.seed, path);
                double x = 0.0, p = 0.0;
                sample(rng, x, p);
                std::size_t sched = 0;
                while (sched < plan.schedule.size() && plan.schedule[sched].first == 0) {
                    sums[plan.schedule[sched].second].add(x, p);
                    ++sched;
                }
                for (std::int64_t n = 0; n < plan.n_steps && sched < plan.schedule.size(); ++n) {
                    step(rng, n, x, p);
                    while (sched < plan.schedule.size() && plan.schedule[sched].first == n + 1) {
                        sums[plan.schedule[sched].second].add(x, p);
                        ++sched;
                    }
                }
            }
        }
    };

    unsigned n_threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    // Serial reduction in block order keeps the totals bit-identical for any
    // thread count.
    std::vector<MomentSums> total(plan.times.size());
    for (const auto& sums : block_sums) {
        for (std::size_t r = 0; r < total.size(); ++r) {
            total[r].merge(sums[r]);
        }
    }
    return total;
}

double sample_variance(double sum, double sum_sq, double n) {
    if (n < 2.0) {
        return 0.0;
    }
    const double mean = sum / n;
    return std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
}

EnsembleStats finalize(const RecordPlan& plan, const std::vector<MomentSums>& total,
                       std::uint64_t n_paths, bool with_momentum) {
    EnsembleStats stats;
    stats.times = plan.times;
    stats.n_paths = n_paths;
    const double n = static_cast<double>(n_paths);
    for (const auto& s : total) {
        stats.mean_x.push_back(s.x / n);
        stats.m2_x.push_back(s.x2 / n);
        stats.se_mean_x.push_back(std::sqrt(sample_variance(s.x, s.x2, n) / n));
        stats.se_m2_x.push_back(std::sqrt(sample_variance(s.x2, s.x4, n) / n));
        if (with_momentum) {
            stats.mean_p.push_back(s.p / n);
            stats.m2_p.push_back(s.p2 / n);
            stats.se_mean_p.push_back(std::sqrt(sample_variance(s.p, s.p2, n) / n));
            stats.se_m2_p.push_back(std::sqrt(sample_variance(s.p2, s.p4, n) / n));
            stats.mean_px.push_back(s.px / n);
            stats.se_mean_px.push_back(std::sqrt(sample_variance(s.px, s.px2, n) / n));
        }
    }
    return stats;
}

void check_stability(const ParticleSpec& spec, const CorrelationKernel& kernel,
                     const SimulationConfig& cfg, bool inertial) {
    if (cfg.override_stability) {
        return;
    }
    double scale = kernel.correlation_time();
    if (inertial && spec.gamma > 0.0) {
        scale = std::min(scale, 1.0 / (2.0 * spec.gamma));
    }
    if (!spec.is_free()) {
        scale = std::min(scale, 1.0 / spec.omega());
    }
    const double dt_max = scale / 20.0;
    if (cfg.dt > dt_max * (1.0 + 1e-12)) {
        throw config_error(
            "time step exceeds the stability bound min(t_c, 1/2*gamma, 1/omega)/20; "
            "reduce sde.dt or set sde.override_stability");
    }
}

}  // namespace

EnsembleStats simulate_inertial(const ParticleSpec& spec, const Environment& env,
                                const CorrelationKernel& kernel, const InitialCondition& init,
                                const SimulationConfig& cfg) {
    check_stability(spec, kernel, cfg, /*inertial=*/true);
    const RecordPlan plan = plan_records(cfg);
    const double m = spec.mass;
    const double g = spec.gamma;
    const double E = diffusion_energy(env);
    const double k = spec.is_free() ? 0.0 : spec.stiffness();
    const double sigma_x0 = std::sqrt(initial_x2(init, m));
    const double sigma_p0 = std::sqrt(initial_p2(init, m));

    // The noise prefactor sqrt(4*gamma*m*E) * sqrt(I(t_n) dt) depends on the
    // step index only; precompute it once for all paths.
    const double amp = fluctuation_strength(2.0 * g, m, E);
    std::vector<double> noise(static_cast<std::size_t>(plan.n_steps));
    for (std::int64_t n = 0; n < plan.n_steps; ++n) {
        noise[static_cast<std::size_t>(n)] =
            amp * std::sqrt(kernel.intensity(static_cast<double>(n) * cfg.dt) * cfg.dt);
    }

    auto sample = [&](PathRng& rng, double& x, double& p) {
        x = cfg.x0 + (sigma_x0 > 0.0 ? sigma_x0 * rng.normal() : 0.0);
        p = cfg.p0 + (sigma_p0 > 0.0 ? sigma_p0 * rng.normal() : 0.0);
    };
    auto step = [&](PathRng& rng, std::int64_t n, double& x, double& p) {
        const double dp = (-k * x - 2.0 * g * p) * cfg.dt +
                          noise[static_cast<std::size_t>(n)] * rng.normal();
        const double dx = (p / m) * cfg.dt;
        x += dx;
        p += dp;
    };
    const auto total = run_ensemble(cfg, plan, sample, step);
    return finalize(plan, total, cfg.n_paths, /*with_momentum=*/true);
}

EnsembleStats simulate_noninertial(const ParticleSpec& spec, const Environment& env,
                                   const CorrelationKernel& kernel, const InitialCondition& init,
                                   const SimulationConfig& cfg) {
    if (!(spec.gamma > 0.0)) {
        throw scenario_error("overdamped simulation requires a positive damping rate");
    }
    check_stability(spec, kernel, cfg, /*inertial=*/false);
    const RecordPlan plan = plan_records(cfg);
    const double m = spec.mass;
    const double g = spec.gamma;
    const double E = diffusion_energy(env);
    const double k = spec.is_free() ? 0.0 : spec.stiffness();
    const double sigma_x0 = std::sqrt(initial_x2(init, m));

    std::vector<double> noise(static_cast<std::size_t>(plan.n_steps));
    for (std::int64_t n = 0; n < plan.n_steps; ++n) {
        noise[static_cast<std::size_t>(n)] = std::sqrt(
            (2.0 * E / (g * m)) * kernel.intensity(static_cast<double>(n) * cfg.dt) * cfg.dt);
    }

    auto sample = [&](PathRng& rng, double& x, double& p) {
        x = cfg.x0 + (sigma_x0 > 0.0 ? sigma_x0 * rng.normal() : 0.0);
        p = 0.0;
    };
    auto step = [&](PathRng& rng, std::int64_t n, double& x, double& p) {
        (void)p;
        x += (-k * x / (g * m)) * cfg.dt + noise[static_cast<std::size_t>(n)] * rng.normal();
    };
    const auto total = run_ensemble(cfg, plan, sample, step);
    return finalize(plan, total, cfg.n_paths, /*with_momentum=*/false);
}

ExponentEstimate estimate_msd_exponent(const EnsembleStats& stats, double t_lo, double t_hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
        const double t = stats.times[i];
        if (t < t_lo || t > t_hi || !(t > 0.0) || !(stats.m2_x[i] > 0.0)) {
            continue;
        }
        lx.push_back(std::log(t));
        ly.push_back(std::log(stats.m2_x[i]));
    }
    const std::size_t n = lx.size();
    if (n < 5) {
        throw scenario_error("exponent fit requires at least five positive-MSD record times "
                             "inside the fit window");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw scenario_error("exponent fit requires distinct record times");
    }
    ExponentEstimate est;
    est.lambda_hat = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - my - est.lambda_hat * (lx[i] - mx);
        ss_res += r * r;
    }
    est.se = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
    return est;
}

}  // namespace bmx

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "adrx/channel_response.hpp"
#include "adrx/config.hpp"
#include "adrx/csv.hpp"
#include "adrx/geometry.hpp"
#include "adrx/series.hpp"
#include "adrx/simulator.hpp"
#include "adrx/version.hpp"

// Experiment runner: fans seeded trials out over a thread pool, averages
// per-window series, evaluates the analytical model on the same grid, and
// writes CSV plus a .meta sidecar. Output bytes depend only on (config,
// seed), never on the parallelism degree: trial i always uses stream i and
// lands in slot i.

namespace adrx {

struct SweepComparison {
    std::string label; // "" for a sweep-less run, else e.g. "k1=20"
    std::vector<double> analytic;
    std::vector<double> sim_mean;
    std::vector<double> sim_stderr;
    std::vector<double> z;
};

struct ExperimentResult {
    CsvTable table;
    std::vector<SweepComparison> comparisons; // filled in Compare mode
    double max_abs_z = 0.0;
    double rms_rel_err = 0.0; // over windows with analytic value >= 0.5
    unsigned threads = 1;
    double runtime_seconds = 0.0;
    std::string csv_path;
};

namespace detail {

inline unsigned env_thread_cap() {
    const char* env = std::getenv("ADRX_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) return 0; // malformed: no cap
    return static_cast<unsigned>(v);
}

inline std::string compact_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string full_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Parallelism degree: the explicit request (0 = hardware concurrency),
// capped by the ADRX_THREADS environment variable when set.
inline unsigned resolve_threads(unsigned requested) {
    unsigned base =
        requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const unsigned cap = detail::env_thread_cap(); cap != 0)
        base = std::min(base, cap);
    return std::max(1u, base);
}

// Runs all trials for one parameter set. Trial i derives RNG stream i from
// the master seed and writes result slot i, so the aggregate is identical
// for any thread count.
inline std::vector<SampleSeries> run_trials(const ChannelParams& channel,
                                            const SimConfig& sim,
                                            unsigned threads) {
    const ReceiverGeometry geom(Vec3{0.0, 0.0, 0.0}, channel.rr);
    std::vector<SampleSeries> results(sim.trials);

    const unsigned workers =
        std::min<unsigned>(std::max(1u, threads), sim.trials);
    if (workers == 1) {
        for (std::uint32_t i = 0; i < sim.trials; ++i)
            results[i] = run_trial(channel, geom, sim, i);
        return results;
    }

    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint32_t i = next.fetch_add(1);
            if (i >= sim.trials) return;
            try {
                results[i] = run_trial(channel, geom, sim, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

inline double z_score(double sim_mean, double analytic, double stderr_) {
    const double diff = sim_mean - analytic;
    if (stderr_ > 0.0) return diff / stderr_;
    if (diff == 0.0) return 0.0;
    return diff > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> meta_entries(
    const ExperimentConfig& cfg, const ExperimentResult& res) {
    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("version", version_string());
    m.emplace_back("seed", std::to_string(cfg.sim.seed));
    m.emplace_back("threads", std::to_string(res.threads));
    m.emplace_back("runtime_seconds", full_number(res.runtime_seconds));
    m.emplace_back("mode", mode_name(cfg.mode));
    m.emplace_back("output", cfg.output_path);
    m.emplace_back("channel.D", full_number(cfg.channel.D));
    m.emplace_back("channel.r0", full_number(cfg.channel.r0));
    m.emplace_back("channel.rr", full_number(cfg.channel.rr));
    m.emplace_back("channel.k1", full_number(cfg.channel.k1));
    m.emplace_back("channel.km1", full_number(cfg.channel.km1));
    m.emplace_back("channel.ntx", std::to_string(cfg.channel.ntx));
    m.emplace_back("sim.dt", full_number(cfg.sim.dt));
    m.emplace_back("sim.ts", full_number(cfg.sim.ts));
    m.emplace_back("sim.t_end", full_number(cfg.sim.t_end));
    m.emplace_back("sim.trials", std::to_string(cfg.sim.trials));
    m.emplace_back("sim.seed", std::to_string(cfg.sim.seed));
    m.emplace_back("sim.emission",
                   cfg.sim.emission == EmissionMode::Shell ? "shell" : "point");
    m.emplace_back("quad.w_max", full_number(cfg.quad.w_max));
    m.emplace_back("quad.rel_tol", full_number(cfg.quad.rel_tol));
    m.emplace_back("quad.max_panels", std::to_string(cfg.quad.max_panels));
    if (cfg.sweep) {
        std::string vals;
        for (double v : cfg.sweep->values) {
            if (!vals.empty()) vals += ", ";
            vals += full_number(v);
        }
        m.emplace_back("sweep." + cfg.sweep->param, vals);
    }
    return m;
}

} // namespace detail

// Runs the configured experiment and writes CSV + meta sidecar. On failure,
// whatever columns completed are flushed with an abort marker before the
// exception propagates.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       unsigned threads_requested = 0) {
    cfg.validate();
    const auto t_begin = std::chrono::steady_clock::now();

    ExperimentResult res;
    res.threads = resolve_threads(threads_requested);
    res.csv_path = cfg.output_path;
    res.table.ts = cfg.sim.ts;
    res.table.windows = static_cast<std::size_t>(cfg.sim.window_count());

    std::vector<std::pair<std::string, ChannelParams>> entries;
    if (cfg.sweep) {
        for (double v : cfg.sweep->values)
            entries.emplace_back(
                cfg.sweep->param + "=" + detail::compact_number(v),
                cfg.channel_with(cfg.sweep->param, v));
    } else {
        entries.emplace_back("", cfg.channel);
    }

    auto column_name = [](const std::string& label, const char* base) {
        return label.empty() ? std::string(base) : label + ":" + base;
    };

    double sum_sq_rel = 0.0;
    std::size_t n_rel = 0;

    auto finish = [&](const std::string& abort_marker) {
        res.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
                .count();
        write_csv(res.table, cfg.output_path, abort_marker);
        write_meta(cfg.output_path, detail::meta_entries(cfg, res));
    };

    try {
        for (const auto& [label, channel] : entries) {
            std::vector<double> analytic;
            if (cfg.mode != RunMode::Simulate) {
                analytic.reserve(res.table.windows);
                for (std::size_t w = 0; w < res.table.windows; ++w)
                    analytic.push_back(expected_net_adsorbed_window(
                        static_cast<double>(w) * cfg.sim.ts,
                        static_cast<double>(w + 1) * cfg.sim.ts, channel, cfg.quad));
            }

            SeriesStats stats;
            if (cfg.mode != RunMode::Analytic) {
                const auto trials = run_trials(channel, cfg.sim, res.threads);
                stats = summarize(trials);
            }

            if (cfg.mode != RunMode::Simulate)
                res.table.columns.push_back({column_name(label, "analytic"), analytic});
            if (cfg.mode != RunMode::Analytic) {
                res.table.columns.push_back({column_name(label, "sim_mean"), stats.mean});
                res.table.columns.push_back(
                    {column_name(label, "sim_stderr"), stats.stderr_});
            }

            if (cfg.mode == RunMode::Compare) {
                SweepComparison cmp;
                cmp.label = label;
                cmp.analytic = analytic;
                cmp.sim_mean = stats.mean;
                cmp.sim_stderr = stats.stderr_;
                cmp.z.reserve(res.table.windows);
                for (std::size_t w = 0; w < res.table.windows; ++w) {
                    const double z = z_score(stats.mean[w], analytic[w], stats.stderr_[w]);
                    cmp.z.push_back(z);
                    res.max_abs_z = std::max(res.max_abs_z, std::abs(z));
                    if (analytic[w] >= 0.5) {
                        const double rel = (stats.mean[w] - analytic[w]) / analytic[w];
                        sum_sq_rel += rel * rel;
                        ++n_rel;
                    }
                }
                res.table.columns.push_back({column_name(label, "z"), cmp.z});
                res.comparisons.push_back(std::move(cmp));
            }
        }
    } catch (const std::exception& e) {
        try {
            finish(e.what());
        } catch (...) {
            // The original failure matters more than a secondary IO error.
        }
        throw;
    }

    if (n_rel > 0) res.rms_rel_err = std::sqrt(sum_sq_rel / static_cast<double>(n_rel));
    finish({});
    return res;
}

} // namespace adrx

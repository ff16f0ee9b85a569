#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "adrx/errors.hpp"

namespace adrx {

// A value per observation window [t_start, t_end), with uniform window width.
struct SampleSeries {
    double ts = 0.0;            // window width, s
    std::vector<double> values; // one entry per window, window w covers (w*ts, (w+1)*ts]

    std::size_t size() const { return values.size(); }

    double t_start(std::size_t w) const { return static_cast<double>(w) * ts; }
    double t_end(std::size_t w) const { return static_cast<double>(w + 1) * ts; }
};

// Mean and standard error across trials, computed windowwise.
struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> stderr_; // standard error of the mean; 0 when trials == 1
};

inline SeriesStats summarize(const std::vector<SampleSeries>& trials) {
    if (trials.empty())
        throw ValidationError("summarize: no trials");
    const std::size_t n_windows = trials.front().size();
    for (const auto& t : trials)
        if (t.size() != n_windows)
            throw StateCorruption("summarize: ragged trial lengths");

    SeriesStats out;
    out.mean.assign(n_windows, 0.0);
    out.stderr_.assign(n_windows, 0.0);
    const double n = static_cast<double>(trials.size());

    for (std::size_t w = 0; w < n_windows; ++w) {
        double sum = 0.0;
        for (const auto& t : trials) sum += t.values[w];
        const double mean = sum / n;
        out.mean[w] = mean;
        if (trials.size() > 1) {
            double ss = 0.0;
            for (const auto& t : trials) {
                const double d = t.values[w] - mean;
                ss += d * d;
            }
            const double var = ss / (n - 1.0);
            out.stderr_[w] = std::sqrt(var / n);
        }
    }
    return out;
}

} // namespace adrx

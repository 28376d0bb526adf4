#pragma once

#include <span>

namespace nrslice {

/// Mean with separate mean absolute deviations above and below it. `dev_hi`
/// averages (x - mean) over samples above the mean, `dev_lo` (mean - x) over
/// samples below; both are 0 when no sample lies on that side.
struct Spread {
    double mean = 0.0;
    double dev_lo = 0.0;
    double dev_hi = 0.0;
};

inline Spread spread_of(std::span<const double> xs) {
    Spread s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double lo = 0.0, hi = 0.0;
    int n_lo = 0, n_hi = 0;
    for (double x : xs) {
        if (x > s.mean) { hi += x - s.mean; ++n_hi; }
        else if (x < s.mean) { lo += s.mean - x; ++n_lo; }
    }
    if (n_lo) s.dev_lo = lo / n_lo;
    if (n_hi) s.dev_hi = hi / n_hi;
    return s;
}

}  // namespace nrslice

#pragma once

namespace qsv {

/// Neumaier-compensated accumulator. Tracks the rounding error of each
/// addition and reintroduces it when the total is read, which keeps long
/// alternating or slowly decaying sums near working precision.
struct KahanAccumulator {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        const double t = sum + value;
        if ((sum >= 0 ? sum : -sum) >= (value >= 0 ? value : -value))
            compensation += (sum - t) + value;
        else
            compensation += (value - t) + sum;
        sum = t;
    }

    double value() const { return sum + compensation; }
};

}  // namespace qsv

#pragma once

#include <array>
#include <vector>

namespace dca {

/// One time step of categorized, normalized input signal values.
/// Magnitude categories (pamp/danger/safe) live on a [0, 100] scale,
/// inflammation on [0, 1]. Category lists may be empty; a missing
/// category contributes nothing to the sums.
struct SignalSnapshot {
    std::vector<double> pamp;
    std::vector<double> danger;
    std::vector<double> safe;
    double inflammation = 0.0;
};

/// The three output signals of one cell update: costimulation,
/// semi-mature and mature.
struct OutputTriple {
    double csm = 0.0;
    double semi = 0.0;
    double mat = 0.0;

    OutputTriple& operator+=(const OutputTriple& other) {
        csm += other.csm;
        semi += other.semi;
        mat += other.mat;
        return *this;
    }
};

/// Signal-transformation weights. All nine coefficients derive from the
/// two PAMP weights w1 and w2; only the ratios below are fixed, the PAMP
/// weights themselves are user configuration.
///
///   row            pamp  danger  safe
///   costimulation   w1    w1/2   1.5*w1
///   semi-mature      0       0        1
///   mature          w2    w2/2  -1.5*w2
class WeightMatrix {
public:
    WeightMatrix() : WeightMatrix(2.0, 2.0) {}
    WeightMatrix(double w1, double w2);  // throws ConfigError unless both > 0

    double w1() const { return w1_; }
    double w2() const { return w2_; }

    // Row coefficients in column order {pamp, danger, safe}.
    const std::array<double, 3>& csm_row() const { return csm_; }
    const std::array<double, 3>& semi_row() const { return semi_; }
    const std::array<double, 3>& mat_row() const { return mat_; }

private:
    double w1_;
    double w2_;
    std::array<double, 3> csm_;
    std::array<double, 3> semi_;
    std::array<double, 3> mat_;
};

/// Weighted-sum transformation of one snapshot into the three interim
/// output values. Each output is the weighted sum of the per-category
/// totals, scaled once by the inflammation multiplier (1 + I). Pure.
OutputTriple process_signals(const SignalSnapshot& snapshot, const WeightMatrix& weights);

} // namespace dca

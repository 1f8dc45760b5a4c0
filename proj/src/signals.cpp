#include "dca/signals.hpp"

#include <numeric>

#include "dca/errors.hpp"

namespace dca {

WeightMatrix::WeightMatrix(double w1, double w2) : w1_(w1), w2_(w2) {
    if (!(w1 > 0.0) || !(w2 > 0.0)) {
        throw ConfigError("weight matrix requires w1 > 0 and w2 > 0");
    }
    csm_ = {w1, w1 / 2.0, w1 * 1.5};
    semi_ = {0.0, 0.0, 1.0};
    mat_ = {w2, w2 / 2.0, w2 * -1.5};
}

namespace {

double total(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

} // namespace

OutputTriple process_signals(const SignalSnapshot& snapshot, const WeightMatrix& weights) {
    const double pamp = total(snapshot.pamp);
    const double danger = total(snapshot.danger);
    const double safe = total(snapshot.safe);

    // The inflammation multiplier is applied as a single multiplication so
    // the output with inflammation I is bitwise (1 + I) times the I = 0
    // output.
    const double amplify = 1.0 + snapshot.inflammation;

    const auto& c = weights.csm_row();
    const auto& s = weights.semi_row();
    const auto& m = weights.mat_row();

    OutputTriple out;
    out.csm = (c[0] * pamp + c[1] * danger + c[2] * safe) * amplify;
    out.semi = (s[0] * pamp + s[1] * danger + s[2] * safe) * amplify;
    out.mat = (m[0] * pamp + m[1] * danger + m[2] * safe) * amplify;
    return out;
}

} // namespace dca

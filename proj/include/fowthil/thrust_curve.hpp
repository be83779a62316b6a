#pragma once

#include <vector>

namespace fowthil {

// Thrust coefficient versus tip-speed ratio. Monotone piecewise-cubic
// (Fritsch-Carlson) between nodes, flat outside the tabulated range.
class ThrustCurve {
public:
    ThrustCurve() = default;
    ThrustCurve(std::vector<double> tsr, std::vector<double> ct);

    double ct(double tsr) const;

    // Inserts or overwrites a node so that ct(tsr) == ct exactly.
    void anchor(double tsr, double ct);

    const std::vector<double>& tsr_nodes() const { return tsr_; }
    const std::vector<double>& ct_nodes() const { return ct_; }
    bool empty() const { return tsr_.empty(); }

private:
    void rebuild_slopes();

    std::vector<double> tsr_;
    std::vector<double> ct_;
    std::vector<double> slope_;
};

}  // namespace fowthil

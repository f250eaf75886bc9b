#pragma once

#include <span>
#include <vector>

namespace mfgnet {

/// Uniform grid t_i = i * T / N on [0, T].
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double horizon, int steps);

    double horizon() const noexcept { return horizon_; }
    int steps() const noexcept { return steps_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double t(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::span<const double> nodes() const noexcept { return nodes_; }

    /// Largest k with k*dt <= duration, tolerant to representation error.
    int floor_steps(double duration) const;
    /// Smallest grid index j with t_j >= time (may exceed N).
    int ceil_index(double time) const;

private:
    double horizon_ = 0.0;
    int steps_ = 0;
    double dt_ = 0.0;
    std::vector<double> nodes_;
};

/// Cumulative trapezoid: result[0] = 0, result[i] ~ integral of g over [t_0, t_i].
std::vector<double> prefix_integral(std::span<const double> samples, double dt);

/// Composite trapezoid over the whole sample range.
double trapezoid(std::span<const double> samples, double dt);

}  // namespace mfgnet

#include "mfgnet/grid.hpp"

#include <cmath>

namespace mfgnet {

namespace {
// Relative slack when snapping a duration onto the grid; T/N is rarely exact.
constexpr double kSnap = 1e-9;
}  // namespace

TimeGrid::TimeGrid(double horizon, int steps)
    : horizon_(horizon), steps_(steps), dt_(horizon / steps), nodes_(static_cast<std::size_t>(steps) + 1) {
    for (int i = 0; i <= steps; ++i) {
        nodes_[static_cast<std::size_t>(i)] = horizon * i / steps;
    }
}

int TimeGrid::floor_steps(double duration) const {
    return static_cast<int>(std::floor(duration / dt_ + kSnap));
}

int TimeGrid::ceil_index(double time) const {
    const double x = std::ceil(time / dt_ - kSnap);
    if (x > static_cast<double>(steps_) + 1.0) return steps_ + 1;
    return static_cast<int>(x);
}

std::vector<double> prefix_integral(std::span<const double> samples, double dt) {
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * dt * (samples[i - 1] + samples[i]);
    }
    return out;
}

double trapezoid(std::span<const double> samples, double dt) {
    if (samples.size() < 2) return 0.0;
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
    return sum * dt;
}

}  // namespace mfgnet

#include "twoscale/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "twoscale/errors.hpp"

namespace twoscale {

Grid::Grid(double T, std::size_t space_intervals, std::size_t time_intervals)
    : T_(T), P_(space_intervals), M_(time_intervals) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid: T must be positive and finite");
    if (P_ < 2) throw DomainError("grid: need at least 2 space intervals");
    if (M_ < 2) throw DomainError("grid: need at least 2 time intervals");
    xs_.resize(P_ + 1);
    ts_.resize(M_ + 1);
    for (std::size_t i = 0; i <= P_; ++i) xs_[i] = x(i);
    for (std::size_t j = 0; j <= M_; ++j) ts_[j] = t(j);
}

double Grid::dx() const noexcept { return std::numbers::pi / static_cast<double>(P_); }

double Grid::x(std::size_t i) const noexcept {
    if (i >= P_) return std::numbers::pi;
    return std::numbers::pi * static_cast<double>(i) / static_cast<double>(P_);
}

double Grid::t(std::size_t j) const noexcept {
    if (j >= M_) return T_;
    return T_ * static_cast<double>(j) / static_cast<double>(M_);
}

Bracket bracket(std::span<const double> times, double t) {
    if (times.size() < 2) throw DomainError("bracket: need at least two samples");
    const double lo = times.front();
    const double hi = times.back();
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
    if (!(t >= lo - slack && t <= hi + slack))
        throw DomainError("time " + std::to_string(t) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    t = std::clamp(t, lo, hi);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t j = static_cast<std::size_t>(it - times.begin());
    j = j == 0 ? 0 : j - 1;
    if (j >= times.size() - 1) j = times.size() - 2;
    const double w = (t - times[j]) / (times[j + 1] - times[j]);
    return {j, w};
}

Field::Field(Grid grid) : grid_(std::move(grid)), data_(grid_.nx() * grid_.nt(), 0.0) {}

double Field::at(double x, double t) const {
    const Bracket bx = bracket(grid_.xs(), x);
    const Bracket bt = bracket(grid_.times(), t);
    const auto& g = *this;
    const double lo = (1.0 - bx.w) * g(bx.j, bt.j) + bx.w * g(bx.j + 1, bt.j);
    const double hi = (1.0 - bx.w) * g(bx.j, bt.j + 1) + bx.w * g(bx.j + 1, bt.j + 1);
    return (1.0 - bt.w) * lo + bt.w * hi;
}

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double TimeSeries::at(double t) const {
    const Bracket b = bracket(times, t);
    return (1.0 - b.w) * values[b.j] + b.w * values[b.j + 1];
}

double TimeSeries::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace twoscale

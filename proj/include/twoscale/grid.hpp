#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace twoscale {

/// Uniform tensor grid on [0, pi] x [0, T]: space nodes x_0..x_P, time
/// nodes t_0..t_M. Endpoints are exact (x_P == pi, t_M == T).
class Grid {
  public:
    Grid(double T, std::size_t space_intervals, std::size_t time_intervals);

    double T() const noexcept { return T_; }
    std::size_t space_intervals() const noexcept { return P_; }
    std::size_t time_intervals() const noexcept { return M_; }
    std::size_t nx() const noexcept { return P_ + 1; }
    std::size_t nt() const noexcept { return M_ + 1; }
    double dx() const noexcept;
    double dt() const noexcept { return T_ / static_cast<double>(M_); }

    double x(std::size_t i) const noexcept;
    double t(std::size_t j) const noexcept;

    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& times() const noexcept { return ts_; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.T_ == b.T_ && a.P_ == b.P_ && a.M_ == b.M_;
    }

  private:
    double T_;
    std::size_t P_;
    std::size_t M_;
    std::vector<double> xs_;
    std::vector<double> ts_;
};

/// Samples u(x_i, t_j) on a Grid, stored time-major.
class Field {
  public:
    explicit Field(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * grid_.nx() + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * grid_.nx() + i]; }

    // All space samples at time index j.
    std::span<double> row(std::size_t j) noexcept { return {data_.data() + j * grid_.nx(), grid_.nx()}; }
    std::span<const double> row(std::size_t j) const noexcept {
        return {data_.data() + j * grid_.nx(), grid_.nx()};
    }

    /// Bilinear interpolation; throws DomainError outside [0,pi] x [0,T].
    double at(double x, double t) const;

    double max_abs() const noexcept;
    std::span<const double> data() const noexcept { return data_; }

  private:
    Grid grid_;
    std::vector<double> data_;
};

/// A real function of t sampled at increasing times, linearly interpolated.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    double at(double t) const;
    double max_abs() const noexcept;
    std::size_t size() const noexcept { return values.size(); }
};

// Bracketing interval [times[j], times[j+1]] and weight of the right node.
// Throws DomainError when t lies outside [times.front(), times.back()].
struct Bracket {
    std::size_t j;
    double w;
};
Bracket bracket(std::span<const double> times, double t);

}  // namespace twoscale

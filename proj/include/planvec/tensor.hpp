#pragma once

#include <cstddef>
#include <vector>

#include "planvec/error.hpp"

namespace planvec {

/// Dense height x width x channels array, channels innermost.
class Tensor {
public:
    Tensor() = default;
    Tensor(int height, int width, int channels, double fill = 0.0);
    Tensor(int height, int width, int channels, std::vector<double> data);

    int height() const noexcept { return h_; }
    int width() const noexcept { return w_; }
    int channels() const noexcept { return c_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
    double at(int y, int x, int c) const { return data_[index(y, x, c)]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const Tensor& o) const noexcept { return h_ == o.h_ && w_ == o.w_ && c_ == o.c_; }
    bool all_finite() const noexcept;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::size_t index(int y, int x, int c) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(c_) +
               static_cast<std::size_t>(c);
    }

    int h_ = 0;
    int w_ = 0;
    int c_ = 0;
    std::vector<double> data_;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator*(double s, const Tensor& a);

/// Concatenates along channels; spatial dims must agree.
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// x * m where m is 1x1xC (per-channel) or HxWx1 (per-position).
Tensor broadcast_multiply(const Tensor& x, const Tensor& m);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);

}  // namespace planvec

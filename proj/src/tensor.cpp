#include "planvec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace planvec {

Tensor::Tensor(int height, int width, int channels, double fill) : h_(height), w_(width), c_(channels) {
    if (height < 0 || width < 0 || channels < 0) {
        throw Error(ErrorCode::DimensionMismatch, "negative tensor dimensions");
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Tensor::Tensor(int height, int width, int channels, std::vector<double> data)
    : h_(height), w_(width), c_(channels), data_(std::move(data)) {
    if (height < 0 || width < 0 || channels < 0 ||
        data_.size() != static_cast<std::size_t>(height) * width * channels) {
        throw Error(ErrorCode::DimensionMismatch, "tensor data length does not match H*W*C");
    }
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

std::string shape(const Tensor& t) { return fmt::format("{}x{}x{}", t.height(), t.width(), t.channels()); }

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("cannot add {} and {}", shape(a), shape(b)));
    }
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

Tensor operator*(double s, const Tensor& a) {
    Tensor out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("cannot concatenate {} and {}", shape(a), shape(b)));
    }
    Tensor out(a.height(), a.width(), a.channels() + b.channels());
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            for (int c = 0; c < a.channels(); ++c) out.at(y, x, c) = a.at(y, x, c);
            for (int c = 0; c < b.channels(); ++c) out.at(y, x, a.channels() + c) = b.at(y, x, c);
        }
    }
    return out;
}

Tensor broadcast_multiply(const Tensor& x, const Tensor& m) {
    const bool per_channel = m.height() == 1 && m.width() == 1 && m.channels() == x.channels();
    const bool per_position = m.height() == x.height() && m.width() == x.width() && m.channels() == 1;
    if (!per_channel && !per_position) {
        throw Error(ErrorCode::ChannelMismatch, fmt::format("cannot broadcast {} over {}", shape(m), shape(x)));
    }
    Tensor out = x;
    for (int y = 0; y < x.height(); ++y) {
        for (int xx = 0; xx < x.width(); ++xx) {
            for (int c = 0; c < x.channels(); ++c) {
                out.at(y, xx, c) *= per_channel ? m.at(0, 0, c) : m.at(y, xx, 0);
            }
        }
    }
    return out;
}

Tensor relu(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data()) v = std::max(0.0, v);
    return out;
}

Tensor sigmoid(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data()) {
        // Split by sign so large magnitudes never overflow exp().
        v = v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
        // Keep the map open at both ends even when the double rounds.
        v = std::clamp(v, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
    }
    return out;
}

}  // namespace planvec

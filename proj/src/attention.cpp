#include "planvec/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace planvec {

ConvKernel::ConvKernel(int kh_, int kw_, int in, int out, int dil)
    : kh(kh_), kw(kw_), in_channels(in), out_channels(out), dilation(dil) {
    validate();
    weights.assign(static_cast<std::size_t>(kh) * kw * in * out, 0.0);
    bias.assign(static_cast<std::size_t>(out), 0.0);
}

void ConvKernel::validate() const {
    if (kh <= 0 || kw <= 0 || kh % 2 == 0 || kw % 2 == 0) {
        throw Error(ErrorCode::InvalidKernel, fmt::format("kernel {}x{} must have odd positive sides", kh, kw));
    }
    if (dilation < 1) throw Error(ErrorCode::InvalidKernel, fmt::format("dilation {} < 1", dilation));
    if (in_channels <= 0 || out_channels <= 0) {
        throw Error(ErrorCode::InvalidKernel, "kernel channel counts must be positive");
    }
    if (!weights.empty() && weights.size() != static_cast<std::size_t>(kh) * kw * in_channels * out_channels) {
        throw Error(ErrorCode::InvalidKernel, "kernel weight count does not match its shape");
    }
    if (!bias.empty() && bias.size() != static_cast<std::size_t>(out_channels)) {
        throw Error(ErrorCode::InvalidKernel, "kernel bias count does not match output channels");
    }
}

Tensor conv2d(const Tensor& input, const ConvKernel& k) {
    k.validate();
    if (input.channels() != k.in_channels) {
        throw Error(ErrorCode::ChannelMismatch,
                    fmt::format("input has {} channels, kernel expects {}", input.channels(), k.in_channels));
    }
    const int h = input.height();
    const int w = input.width();
    Tensor out(h, w, k.out_channels);
    const int ry = (k.kh / 2) * k.dilation;
    const int rx = (k.kw / 2) * k.dilation;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double* dst = &out.at(y, x, 0);
            for (int o = 0; o < k.out_channels; ++o) dst[o] = k.bias.empty() ? 0.0 : k.bias[o];
            for (int ky = 0; ky < k.kh; ++ky) {
                const int sy = y - ry + ky * k.dilation;
                if (sy < 0 || sy >= h) continue;
                for (int kx = 0; kx < k.kw; ++kx) {
                    const int sx = x - rx + kx * k.dilation;
                    if (sx < 0 || sx >= w) continue;
                    for (int i = 0; i < k.in_channels; ++i) {
                        const double v = input.at(sy, sx, i);
                        if (v == 0.0) continue;
                        for (int o = 0; o < k.out_channels; ++o) dst[o] += v * k.weight(ky, kx, i, o);
                    }
                }
            }
        }
    }
    return out;
}

Tensor group_norm(const Tensor& input, const GroupNormParams& p) {
    const int c = input.channels();
    if (p.groups <= 0 || c % p.groups != 0) {
        throw Error(ErrorCode::IndivisibleGroups, fmt::format("{} channels not divisible into {} groups", c, p.groups));
    }
    if ((!p.gamma.empty() && p.gamma.size() != static_cast<std::size_t>(c)) ||
        (!p.beta.empty() && p.beta.size() != static_cast<std::size_t>(c))) {
        throw Error(ErrorCode::ChannelMismatch, "group norm affine parameters do not match channel count");
    }
    if (!(p.epsilon > 0)) throw Error(ErrorCode::InvalidKernel, "group norm epsilon must be positive");
    const int per = c / p.groups;
    const std::size_t positions = static_cast<std::size_t>(input.height()) * input.width();
    Tensor out = input;
    for (int g = 0; g < p.groups; ++g) {
        const int c0 = g * per;
        double sum = 0;
        for (std::size_t i = 0; i < positions; ++i)
            for (int ch = c0; ch < c0 + per; ++ch) sum += input.data()[i * c + ch];
        const double n = static_cast<double>(positions) * per;
        const double mean = n > 0 ? sum / n : 0.0;
        double sq = 0;
        for (std::size_t i = 0; i < positions; ++i)
            for (int ch = c0; ch < c0 + per; ++ch) {
                const double d = input.data()[i * c + ch] - mean;
                sq += d * d;
            }
        const double inv = 1.0 / std::sqrt((n > 0 ? sq / n : 0.0) + p.epsilon);
        for (std::size_t i = 0; i < positions; ++i)
            for (int ch = c0; ch < c0 + per; ++ch) {
                const double gamma = p.gamma.empty() ? 1.0 : p.gamma[ch];
                const double beta = p.beta.empty() ? 0.0 : p.beta[ch];
                double& v = out.data()[i * c + ch];
                v = (v - mean) * inv * gamma + beta;
            }
    }
    return out;
}

namespace {

void check_ac(const ACWeights& w) {
    const ConvKernel* ks[] = {&w.square, &w.horizontal, &w.vertical};
    for (const ConvKernel* k : ks) {
        if (k->in_channels != w.square.in_channels || k->out_channels != w.square.out_channels) {
            throw Error(ErrorCode::ChannelMismatch, "AC branches disagree on channel counts");
        }
    }
    if (w.horizontal.kh != 1 || w.horizontal.kw != w.square.kw || w.vertical.kw != 1 ||
        w.vertical.kh != w.square.kh) {
        throw Error(ErrorCode::InvalidKernel, "AC branches must be k x k, 1 x k and k x 1");
    }
}

}  // namespace

Tensor ac_branch_sum(const Tensor& input, const ACWeights& w) {
    check_ac(w);
    return conv2d(input, w.square) + conv2d(input, w.horizontal) + conv2d(input, w.vertical);
}

Tensor ac_block(const Tensor& input, const ACWeights& w) {
    return relu(group_norm(ac_branch_sum(input, w), w.norm));
}

ConvKernel fuse_ac_kernels(const ACWeights& w) {
    check_ac(w);
    if (w.horizontal.dilation != w.square.dilation || w.vertical.dilation != w.square.dilation) {
        throw Error(ErrorCode::InvalidKernel, "cannot fuse AC branches with different dilations");
    }
    ConvKernel fused = w.square;
    if (fused.weights.empty()) fused.weights.assign(static_cast<std::size_t>(fused.kh) * fused.kw * fused.in_channels * fused.out_channels, 0.0);
    if (fused.bias.empty()) fused.bias.assign(fused.out_channels, 0.0);
    const int cy = fused.kh / 2;
    const int cx = fused.kw / 2;
    for (int i = 0; i < fused.in_channels; ++i) {
        for (int o = 0; o < fused.out_channels; ++o) {
            for (int kx = 0; kx < fused.kw; ++kx) {
                if (!w.horizontal.weights.empty()) fused.weight(cy, kx, i, o) += w.horizontal.weight(0, kx, i, o);
            }
            for (int ky = 0; ky < fused.kh; ++ky) {
                if (!w.vertical.weights.empty()) fused.weight(ky, cx, i, o) += w.vertical.weight(ky, 0, i, o);
            }
        }
    }
    for (int o = 0; o < fused.out_channels; ++o) {
        if (!w.horizontal.bias.empty()) fused.bias[o] += w.horizontal.bias[o];
        if (!w.vertical.bias.empty()) fused.bias[o] += w.vertical.bias[o];
    }
    return fused;
}

int cam_squeeze_channels(int channels, int divisor) {
    if (divisor <= 0) throw Error(ErrorCode::InvalidKernel, "squeeze divisor must be positive");
    return std::max(1, channels / 2 / divisor);
}

Tensor cam_from_compressed(const Tensor& fc, const CAMWeights& w) {
    const int c = fc.channels();
    const double n = static_cast<double>(fc.height()) * fc.width();
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "cannot pool an empty feature map");
    Tensor avg(1, 1, c);
    Tensor mx(1, 1, c, -std::numeric_limits<double>::infinity());
    for (int y = 0; y < fc.height(); ++y)
        for (int x = 0; x < fc.width(); ++x)
            for (int ch = 0; ch < c; ++ch) {
                const double v = fc.at(y, x, ch);
                avg.at(0, 0, ch) += v;
                mx.at(0, 0, ch) = std::max(mx.at(0, 0, ch), v);
            }
    for (int ch = 0; ch < c; ++ch) avg.at(0, 0, ch) /= n;
    const Tensor a = conv2d(relu(conv2d(avg, w.squeeze)), w.expand);
    const Tensor m = conv2d(relu(conv2d(mx, w.squeeze)), w.expand);
    return sigmoid(a + m);
}

Tensor cam(const Tensor& input, const CAMWeights& w) {
    if (input.channels() % 2 != 0) {
        throw Error(ErrorCode::OddChannels, fmt::format("channel attention needs even channels, got {}", input.channels()));
    }
    if (w.compress.out_channels != input.channels() / 2) {
        throw Error(ErrorCode::ChannelMismatch, "channel compression must halve the channel count");
    }
    return cam_from_compressed(conv2d(input, w.compress), w);
}

Tensor sam(const Tensor& input, const SAMWeights& w) {
    if (w.pointwise.size() != w.dilated.size() || w.pointwise.empty()) {
        throw Error(ErrorCode::InvalidKernel, "spatial attention needs matching pointwise and dilated branches");
    }
    const int c = input.channels();
    if (c == 0) throw Error(ErrorCode::ChannelMismatch, "cannot channel-pool zero channels");
    Tensor pooled(input.height(), input.width(), 2);
    for (int y = 0; y < input.height(); ++y) {
        for (int x = 0; x < input.width(); ++x) {
            double sum = 0;
            double mx = -std::numeric_limits<double>::infinity();
            for (int ch = 0; ch < c; ++ch) {
                sum += input.at(y, x, ch);
                mx = std::max(mx, input.at(y, x, ch));
            }
            pooled.at(y, x, 0) = sum / c;
            pooled.at(y, x, 1) = mx;
        }
    }
    Tensor acc(input.height(), input.width(), 1);
    for (std::size_t i = 0; i < w.pointwise.size(); ++i) {
        acc = acc + conv2d(pooled, w.pointwise[i]);
        acc = acc + conv2d(pooled, w.dilated[i]);
    }
    return sigmoid(acc);
}

AttentionTrace attention_trace(const Tensor& input, const AMWeights& w, const Tensor* forced_channel_map,
                               const Tensor* forced_spatial_map) {
    if (input.channels() % 2 != 0) {
        throw Error(ErrorCode::OddChannels, fmt::format("attention module needs even channels, got {}", input.channels()));
    }
    AttentionTrace t;
    t.compressed_channel = conv2d(input, w.channel.compress);
    t.compressed_spatial = conv2d(input, w.compress_spatial);
    t.channel_map = forced_channel_map ? *forced_channel_map : cam_from_compressed(t.compressed_channel, w.channel);
    t.spatial_map = forced_spatial_map ? *forced_spatial_map : sam(input, w.spatial);
    const Tensor refined = concat_channels(broadcast_multiply(t.compressed_channel, t.channel_map),
                                           broadcast_multiply(t.compressed_spatial, t.spatial_map));
    t.output = ac_block(refined, w.fuse);
    return t;
}

Tensor attention_module(const Tensor& input, const AMWeights& w) { return attention_trace(input, w).output; }

ConvKernel random_kernel(int kh, int kw, int in, int out, int dilation, std::uint64_t seed, double stddev) {
    ConvKernel k(kh, kw, in, out, dilation);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& v : k.weights) v = dist(rng);
    return k;
}

ACWeights random_ac_weights(int in, int out, const InitOptions& opt) {
    ACWeights w;
    const int k = opt.kernel_size;
    w.square = random_kernel(k, k, in, out, 1, opt.seed * 4 + 1, opt.stddev);
    w.horizontal = random_kernel(1, k, in, out, 1, opt.seed * 4 + 2, opt.stddev);
    w.vertical = random_kernel(k, 1, in, out, 1, opt.seed * 4 + 3, opt.stddev);
    w.norm.groups = opt.groups;
    return w;
}

CAMWeights random_cam_weights(int channels, const InitOptions& opt) {
    if (channels % 2 != 0) throw Error(ErrorCode::OddChannels, fmt::format("{} channels is odd", channels));
    const int half = channels / 2;
    const int squeezed = cam_squeeze_channels(channels, opt.squeeze_divisor);
    CAMWeights w;
    w.compress = random_kernel(1, 1, channels, half, 1, opt.seed * 8 + 11, opt.stddev);
    w.squeeze = random_kernel(1, 1, half, squeezed, 1, opt.seed * 8 + 12, opt.stddev);
    w.expand = random_kernel(1, 1, squeezed, half, 1, opt.seed * 8 + 13, opt.stddev);
    return w;
}

SAMWeights random_sam_weights(const InitOptions& opt) {
    SAMWeights w;
    for (int d = 1; d <= 3; ++d) {
        w.pointwise.push_back(random_kernel(1, 1, 2, 1, 1, opt.seed * 16 + 20 + d, opt.stddev));
        w.dilated.push_back(random_kernel(3, 3, 2, 1, d, opt.seed * 16 + 30 + d, opt.stddev));
    }
    return w;
}

AMWeights random_am_weights(int channels, int out_channels, const InitOptions& opt) {
    AMWeights w;
    w.channel = random_cam_weights(channels, opt);
    w.compress_spatial = random_kernel(1, 1, channels, channels / 2, 1, opt.seed * 8 + 14, opt.stddev);
    w.spatial = random_sam_weights(opt);
    w.fuse = random_ac_weights(2 * (channels / 2), out_channels, opt);
    return w;
}

Tensor random_tensor(int h, int w, int c, std::uint64_t seed, double stddev) {
    Tensor t(h, w, c);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& v : t.data()) v = dist(rng);
    return t;
}

}  // namespace planvec

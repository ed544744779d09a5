#pragma once

#include <cstdint>
#include <vector>

#include "planvec/tensor.hpp"

namespace planvec {

/// Weights indexed [ky][kx][in][out]; kh and kw must be odd.
struct ConvKernel {
    int kh = 1;
    int kw = 1;
    int in_channels = 1;
    int out_channels = 1;
    int dilation = 1;
    std::vector<double> weights;
    std::vector<double> bias;  // one per output channel

    ConvKernel() = default;
    ConvKernel(int kh, int kw, int in_channels, int out_channels, int dilation = 1);

    double& weight(int ky, int kx, int i, int o) { return weights[index(ky, kx, i, o)]; }
    double weight(int ky, int kx, int i, int o) const { return weights[index(ky, kx, i, o)]; }

    void validate() const;

private:
    std::size_t index(int ky, int kx, int i, int o) const {
        return ((static_cast<std::size_t>(ky) * kw + kx) * in_channels + i) * out_channels + o;
    }
};

/// Same-size cross-correlation with zero padding.
Tensor conv2d(const Tensor& input, const ConvKernel& kernel);

struct GroupNormParams {
    int groups = 1;
    std::vector<double> gamma;  // empty means all ones
    std::vector<double> beta;   // empty means all zeros
    double epsilon = 1e-5;
};

Tensor group_norm(const Tensor& input, const GroupNormParams& params);

struct ACWeights {
    ConvKernel square;      // k x k
    ConvKernel horizontal;  // 1 x k
    ConvKernel vertical;    // k x 1
    GroupNormParams norm;
};

/// Sum of the three convolution branches, before normalization.
Tensor ac_branch_sum(const Tensor& input, const ACWeights& w);
Tensor ac_block(const Tensor& input, const ACWeights& w);
/// Folds the 1 x k and k x 1 kernels into the centre row and column of
/// the square kernel, giving a single equivalent k x k convolution.
ConvKernel fuse_ac_kernels(const ACWeights& w);

struct CAMWeights {
    ConvKernel compress;  // C -> C/2
    ConvKernel squeeze;   // C/2 -> C/2 / divisor
    ConvKernel expand;    // back to C/2
};

/// Channels after the CAM squeeze. Divisor 16 reads "one-sixteenth" as
/// relative to the compressed C/2 features; 8 gives C/16 of the input.
int cam_squeeze_channels(int channels, int divisor = 16);

/// Returns a 1 x 1 x C/2 map.
Tensor cam(const Tensor& input, const CAMWeights& w);
/// The map from already-compressed features F_c.
Tensor cam_from_compressed(const Tensor& compressed, const CAMWeights& w);

struct SAMWeights {
    /// Branch i (dilation i + 1): a 1x1 and a 3x3 convolution, 2 -> 1.
    std::vector<ConvKernel> pointwise;
    std::vector<ConvKernel> dilated;
};

/// Returns an H x W x 1 map.
Tensor sam(const Tensor& input, const SAMWeights& w);

struct AMWeights {
    ConvKernel compress_spatial;  // F_s: C -> C/2
    CAMWeights channel;           // its compress kernel gives F_c
    SAMWeights spatial;
    ACWeights fuse;               // C -> out
};

struct AttentionTrace {
    Tensor compressed_channel;  // F_c
    Tensor compressed_spatial;  // F_s
    Tensor channel_map;         // M_c
    Tensor spatial_map;         // M_s
    Tensor output;
};

Tensor attention_module(const Tensor& input, const AMWeights& w);
/// Same computation, exposing intermediates. Supplied maps replace the
/// computed ones when non-null.
AttentionTrace attention_trace(const Tensor& input, const AMWeights& w, const Tensor* forced_channel_map = nullptr,
                               const Tensor* forced_spatial_map = nullptr);

struct InitOptions {
    std::uint64_t seed = 0;
    double stddev = 0.05;
    int kernel_size = 3;
    int squeeze_divisor = 16;
    int groups = 1;
};

/// Seeded normal initialization; biases start at zero, GN at identity.
ConvKernel random_kernel(int kh, int kw, int in, int out, int dilation, std::uint64_t seed, double stddev);
ACWeights random_ac_weights(int in, int out, const InitOptions& opt);
CAMWeights random_cam_weights(int channels, const InitOptions& opt);
SAMWeights random_sam_weights(const InitOptions& opt);
AMWeights random_am_weights(int channels, int out_channels, const InitOptions& opt);

Tensor random_tensor(int h, int w, int c, std::uint64_t seed, double stddev = 1.0);

}  // namespace planvec

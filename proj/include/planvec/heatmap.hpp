#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "planvec/components.hpp"
#include "planvec/mask_io.hpp"

namespace planvec {

using Heatmap = Grid<double>;

/// The two extreme contour points of an opening.
struct EndpointPair {
    Pixel a;
    Pixel b;

    friend bool operator==(const EndpointPair&, const EndpointPair&) = default;
};

/// Spread parameters of the endpoint Gaussians.
class BetaSet {
public:
    /// {2, 10}: steep fall towards 0.5 followed by a slow tail.
    static BetaSet standard();
    /// {5, 10, 40}.
    static BetaSet wide();

    explicit BetaSet(std::vector<double> betas);

    std::span<const double> values() const noexcept { return betas_; }
    std::string to_string() const;

private:
    std::vector<double> betas_;
};

/// Values below this are stored as zero; evaluation around each endpoint
/// stops at the radius where the Gaussian reaches it.
inline constexpr double kHeatmapCutoff = 1e-7;

/// Contour-diameter pair of the component: the two contour points with the
/// largest Euclidean distance. Ties go to the lexicographically smallest
/// (y, x) pair, each pair ordered with its smaller point first.
EndpointPair opening_endpoints(const Component& component);

/// max over endpoints of exp(-d^2 / beta^2), d in pixel units.
Heatmap heatmap_single(std::span<const Pixel> endpoints, double beta, int width, int height,
                       double cutoff = kHeatmapCutoff);

/// Mean of heatmap_single over every beta in the set.
Heatmap heatmap_average(std::span<const Pixel> endpoints, const BetaSet& betas, int width, int height,
                        double cutoff = kHeatmapCutoff);

/// Mean over classes of the per-pixel mean squared difference.
double mhr_loss(const std::map<ClassId, Heatmap>& predictions, const std::map<ClassId, Heatmap>& targets);

/// Endpoints of every component of one class in the mask.
std::vector<Pixel> class_endpoints(const SegMask& mask, ClassId cls);

/// Target heatmap for each opening class; absent classes get all zeros.
std::map<ClassId, Heatmap> opening_heatmaps(const SegMask& mask, const BetaSet& betas,
                                             double cutoff = kHeatmapCutoff);

/// 16-bit quantization: round(65535 * H).
Grid<std::uint16_t> quantize_heatmap(const Heatmap& heatmap);
Heatmap dequantize_heatmap(const Grid<std::uint16_t>& raster);

}  // namespace planvec

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "planvec/error.hpp"
#include "planvec/heatmap.hpp"
#include "planvec/mask_io.hpp"
#include "planvec/reconstruct3d.hpp"
#include "planvec/vectorize.hpp"

namespace planvec {

/// Process exit statuses shared by every subcommand.
namespace exit_status {
inline constexpr int kOk = 0;
inline constexpr int kOther = 1;
inline constexpr int kMissingInput = 2;
inline constexpr int kParse = 3;
inline constexpr int kShapeMismatch = 4;
inline constexpr int kConfig = 5;
}  // namespace exit_status

int exit_status_for(ErrorCode code);

struct PipelineConfig {
    Thresholds thresholds;
    BetaSet betas = BetaSet::standard();
    HeightProfile profile = HeightProfile::defaults();
    std::vector<ClassInfo> palette = class_palette();
    unsigned threads = 1;

    /// Applies flat key=value text on top of the current values. Keys:
    /// eps_u, eps_d, eps_a, betas, threads, pixel_scale, <class>.base,
    /// <class>.height and palette.<class> (as "r,g,b"). Unknown keys and
    /// bad values throw Config.
    void apply(std::string_view text);

    /// Key=value echo of every setting, stable order.
    std::string to_text() const;
};

/// Default worker count: hardware concurrency, capped by PLANVEC_THREADS.
unsigned default_threads();

struct PipelineRun {
    std::filesystem::path polygons;
    std::filesystem::path mesh;
    std::filesystem::path manifest;
    std::size_t polygon_count = 0;
    std::size_t triangle_count = 0;
};

/// Vectorizes the mask, extrudes the polygons and writes polygons.txt,
/// mesh.obj and manifest.txt into `out_dir`.
PipelineRun run_pipeline(const std::filesystem::path& mask_path, const std::filesystem::path& out_dir,
                         const PipelineConfig& config);

/// Full command-line entry point. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace planvec

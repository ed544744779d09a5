#include "planvec/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "planvec/augment.hpp"
#include "planvec/file_io.hpp"
#include "planvec/key_value.hpp"
#include "planvec/metrics.hpp"
#include "planvec/polygon_io.hpp"
#include "planvec/svg_annotations.hpp"

namespace planvec {
namespace fs = std::filesystem;

int exit_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingInput:
            return exit_status::kMissingInput;
        case ErrorCode::Parse:
        case ErrorCode::MalformedDocument:
        case ErrorCode::UnparseableGeometry:
        case ErrorCode::AmbiguousColor:
        case ErrorCode::UnknownColor:
        case ErrorCode::InvalidClassId:
            return exit_status::kParse;
        case ErrorCode::DimensionMismatch:
            return exit_status::kShapeMismatch;
        case ErrorCode::Config:
        case ErrorCode::InvalidThreshold:
        case ErrorCode::NonPositiveBeta:
        case ErrorCode::InvalidProfile:
        case ErrorCode::InvalidSpec:
            return exit_status::kConfig;
        default:
            return exit_status::kOther;
    }
}

namespace {

Rgb parse_rgb(const std::string& value, const std::string& key) {
    const auto parts = split(value, ',');
    if (parts.size() != 3) throw Error(ErrorCode::Config, fmt::format("{}: expected r,g,b", key));
    std::array<std::uint8_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
        const long long v = parse_integer(trim(parts[i]), key);
        if (v < 0 || v > 255) throw Error(ErrorCode::Config, fmt::format("{}: channel {} out of range", key, v));
        c[i] = static_cast<std::uint8_t>(v);
    }
    return {c[0], c[1], c[2]};
}

}  // namespace

void PipelineConfig::apply(std::string_view text) {
    std::string profile_lines;
    for (const auto& kv : parse_key_values(text)) {
        if (kv.key == "eps_u") thresholds.eps_u = parse_double(kv.value, kv.key);
        else if (kv.key == "eps_d") thresholds.eps_d = parse_double(kv.value, kv.key);
        else if (kv.key == "eps_a") thresholds.eps_a = parse_double(kv.value, kv.key);
        else if (kv.key == "betas") {
            try {
                betas = BetaSet(parse_double_list(kv.value, kv.key));
            } catch (const Error& e) {
                throw Error(ErrorCode::Config, fmt::format("line {}: {}", kv.line, e.what()));
            }
        } else if (kv.key == "threads") {
            const long long t = parse_integer(kv.value, kv.key);
            if (t < 1) throw Error(ErrorCode::Config, fmt::format("line {}: threads must be >= 1", kv.line));
            threads = static_cast<unsigned>(t);
        } else if (kv.key.starts_with("palette.")) {
            ClassId cls;
            try {
                cls = parse_class(kv.key.substr(8));
            } catch (const Error&) {
                throw Error(ErrorCode::Config, fmt::format("line {}: unknown class in '{}'", kv.line, kv.key));
            }
            palette[static_cast<std::size_t>(cls.value())].color = parse_rgb(kv.value, kv.key);
        } else if (kv.key == "pixel_scale" || kv.key.find('.') != std::string::npos) {
            profile_lines += kv.key + "=" + kv.value + "\n";
        } else {
            throw Error(ErrorCode::Config, fmt::format("line {}: unknown config key '{}'", kv.line, kv.key));
        }
    }
    if (!profile_lines.empty()) profile = HeightProfile::from_config(profile_lines, profile);
    try {
        thresholds.validate();
        validate_palette(palette);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
}

std::string PipelineConfig::to_text() const {
    std::string out;
    out += fmt::format("eps_u={}\n", thresholds.eps_u);
    out += fmt::format("eps_d={}\n", thresholds.eps_d);
    out += fmt::format("eps_a={}\n", thresholds.eps_a);
    out += fmt::format("betas={}\n", betas.to_string());
    out += fmt::format("threads={}\n", threads);
    out += fmt::format("pixel_scale={}\n", profile.pixel_scale);
    for (ClassId cls : classes::kStructural) {
        const Level& l = profile.level(cls);
        out += fmt::format("{}.base={}\n{}.height={}\n", class_slug(cls), l.base, class_slug(cls), l.height);
    }
    for (const ClassInfo& info : palette) {
        out += fmt::format("palette.{}={},{},{}\n", class_slug(info.id), info.color.r, info.color.g, info.color.b);
    }
    return out;
}

unsigned default_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PLANVEC_THREADS")) {
        try {
            const long long cap = parse_integer(env, "PLANVEC_THREADS");
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const Error&) {
            // An unreadable cap is ignored rather than failing every command.
        }
    }
    return n;
}

namespace {

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, text);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, std::span<const std::uint8_t>(bytes));
}

SegMask load_mask(const fs::path& path, const PipelineConfig& cfg) { return load_mask_file(path, cfg.palette); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PipelineRun run_pipeline(const fs::path& mask_path, const fs::path& out_dir, const PipelineConfig& cfg) {
    using clock = std::chrono::steady_clock;
    PipelineRun run;
    const auto t0 = clock::now();
    const SegMask mask = load_mask(mask_path, cfg);
    const double t_load = seconds_since(t0);

    const auto t1 = clock::now();
    const PolygonSet polygons = vectorize_mask(mask, cfg.thresholds, ApproximationOptions{cfg.threads});
    const double t_vec = seconds_since(t1);

    const auto t2 = clock::now();
    const ExtrudeResult extruded = extrude(polygons, cfg.profile);
    const double t_rec = seconds_since(t2);

    fs::create_directories(out_dir);
    run.polygons = out_dir / "polygons.txt";
    run.mesh = out_dir / "mesh.obj";
    run.manifest = out_dir / "manifest.txt";
    write_text(run.polygons, write_polygons_text(polygons));
    write_text(run.mesh, export_obj(extruded.mesh));
    run.polygon_count = polygons.polygons.size();
    run.triangle_count = extruded.mesh.faces.size();

    std::string manifest = fmt::format("input={}\nwidth={}\nheight={}\n", mask_path.string(), mask.width(), mask.height());
    manifest += cfg.to_text();
    manifest += fmt::format("polygons={}\ntriangles={}\nskipped_polygons={}\n", run.polygon_count,
                            run.triangle_count, extruded.skipped.size());
    manifest += fmt::format("time.load_s={:.6f}\ntime.vectorize_s={:.6f}\ntime.reconstruct_s={:.6f}\n", t_load,
                            t_vec, t_rec);
    write_text(run.manifest, manifest);
    return run;
}

namespace {

struct CommonOptions {
    std::string config_path;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "key=value configuration file");
    cmd->add_option("--threads", o.threads, "worker threads (default: cores, capped by PLANVEC_THREADS)")
        ->check(CLI::PositiveNumber);
}

PipelineConfig base_config(const CommonOptions& o) {
    PipelineConfig cfg;
    cfg.threads = default_threads();
    if (!o.config_path.empty()) {
        try {
            cfg.apply(read_text_file(o.config_path));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MissingInput) throw;
            throw Error(ErrorCode::Config, fmt::format("{}: {}", o.config_path, e.what()));
        }
    }
    if (o.threads > 0) cfg.threads = o.threads;
    return cfg;
}

struct ThresholdFlags {
    double eps_u = 0;
    double eps_d = 0;
    double eps_a = 0;
    CLI::Option* u = nullptr;
    CLI::Option* d = nullptr;
    CLI::Option* a = nullptr;
};

void add_thresholds(CLI::App* cmd, ThresholdFlags& f) {
    f.u = cmd->add_option("--eps-u", f.eps_u, "fitting-score threshold (default 0.5)");
    f.d = cmd->add_option("--eps-d", f.eps_d, "vertex merge distance in pixels (default 4)");
    f.a = cmd->add_option("--eps-a", f.eps_a, "collinearity cosine (default cos 14 deg)");
}

void apply_thresholds(const ThresholdFlags& f, PipelineConfig& cfg) {
    if (f.u->count()) cfg.thresholds.eps_u = f.eps_u;
    if (f.d->count()) cfg.thresholds.eps_d = f.eps_d;
    if (f.a->count()) cfg.thresholds.eps_a = f.eps_a;
    try {
        cfg.thresholds.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
}

struct ProfileFlags {
    double pixel_scale = 0;
    std::vector<std::string> levels;
    CLI::Option* scale = nullptr;
};

void add_profile(CLI::App* cmd, ProfileFlags& f) {
    f.scale = cmd->add_option("--pixel-scale", f.pixel_scale, "meters per pixel (default 0.01)");
    cmd->add_option("--level", f.levels, "override a class level, e.g. wall.height=3.0 (repeatable)");
}

void apply_profile(const ProfileFlags& f, PipelineConfig& cfg) {
    std::string text;
    if (f.scale->count()) text += fmt::format("pixel_scale={}\n", f.pixel_scale);
    for (const auto& l : f.levels) text += l + "\n";
    if (text.empty()) return;
    try {
        cfg.profile = HeightProfile::from_config(text, cfg.profile);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
}

void write_polygons(const fs::path& path, const PolygonSet& set, const std::string& format) {
    write_text(path, format == "geojson" ? write_polygons_geojson(set) : write_polygons_text(set));
}

int cmd_rasterize(const std::string& svg, const std::string& out_path, int width, int height,
                  const std::string& vocab_path, bool ids, const CommonOptions& common, std::ostream& out) {
    const PipelineConfig cfg = base_config(common);
    const ShapeVocabulary vocab =
        vocab_path.empty() ? ShapeVocabulary::defaults() : ShapeVocabulary::from_config(read_text_file(vocab_path));
    const AnnotationDocument doc = parse_annotation(read_text_file(svg), vocab);
    const int w = width > 0 ? width : doc.width.value_or(0);
    const int h = height > 0 ? height : doc.height.value_or(0);
    if (w <= 0 || h <= 0) {
        throw Error(ErrorCode::Config, fmt::format("'{}' declares no canvas size; pass --width and --height", svg));
    }
    const SegMask mask = rasterize_annotations(doc.shapes, w, h);
    if (ids) {
        save_mask_file(out_path, mask, MaskEncoding::Ids);
    } else {
        write_bytes(out_path, encode_png(encode_mask(mask, cfg.palette)));
    }
    out << fmt::format("rasterized {} shapes ({} skipped) into {}x{} {}\n", doc.shapes.size(), doc.skipped, w, h,
                       out_path);
    return exit_status::kOk;
}

int cmd_vectorize(const std::string& mask_path, const std::string& out_path, const std::string& format,
                  const ThresholdFlags& tf, const CommonOptions& common, std::ostream& out) {
    PipelineConfig cfg = base_config(common);
    apply_thresholds(tf, cfg);
    const SegMask mask = load_mask(mask_path, cfg);
    const PolygonSet set = vectorize_mask(mask, cfg.thresholds, ApproximationOptions{cfg.threads});
    write_polygons(out_path, set, format);
    out << fmt::format("wrote {} polygons to {}\n", set.polygons.size(), out_path);
    return exit_status::kOk;
}

int cmd_reconstruct(const std::string& poly_path, const std::string& out_path, bool strict,
                    const ProfileFlags& pf, const CommonOptions& common, std::ostream& out, std::ostream& err) {
    PipelineConfig cfg = base_config(common);
    apply_profile(pf, cfg);
    const PolygonSet set = read_polygons_text(read_text_file(poly_path));
    const ExtrudeResult result = extrude(set, cfg.profile, ExtrudeOptions{strict});
    for (const auto& issue : result.skipped) {
        err << fmt::format("skipped polygon {}: {}\n", issue.polygon_index, issue.message);
    }
    write_text(out_path, export_obj(result.mesh));
    out << fmt::format("wrote {} vertices, {} triangles to {}\n", result.mesh.vertices.size(),
                       result.mesh.faces.size(), out_path);
    return exit_status::kOk;
}

int cmd_heatmaps(const std::string& mask_path, const std::string& out_dir, const std::vector<double>& betas,
                 const CommonOptions& common, std::ostream& out) {
    PipelineConfig cfg = base_config(common);
    if (!betas.empty()) {
        try {
            cfg.betas = BetaSet(betas);
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, e.what());
        }
    }
    const SegMask mask = load_mask(mask_path, cfg);
    const auto maps = opening_heatmaps(mask, cfg.betas);
    fs::create_directories(out_dir);
    for (const auto& [cls, map] : maps) {
        const fs::path path = fs::path(out_dir) / fmt::format("heatmap_{}.png", class_slug(cls));
        write_bytes(path, encode_png(quantize_heatmap(map)));
        out << fmt::format("wrote {}\n", path.string());
    }
    write_text(fs::path(out_dir) / "betas.txt", cfg.betas.to_string() + "\n");
    return exit_status::kOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, const std::vector<std::string>& merges,
                 bool key_values, bool with_background, const CommonOptions& common, std::ostream& out) {
    const PipelineConfig cfg = base_config(common);
    std::vector<ClassMerge> parsed;
    for (const auto& m : merges) {
        try {
            parsed.push_back(parse_class_merge(m));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, e.what());
        }
    }
    const SegMask pred = load_mask(pred_path, cfg);
    const SegMask truth = load_mask(truth_path, cfg);
    std::vector<ClassId> cls(classes::kStructural.begin(), classes::kStructural.end());
    if (with_background) cls.insert(cls.begin(), classes::kBackground);
    const MetricReport rep = report(confusion(pred, truth, cls), parsed);
    out << (key_values ? format_report_key_values(rep) : format_report_table(rep));
    return exit_status::kOk;
}

int cmd_pipeline(const std::string& mask_path, const std::string& out_dir, const ThresholdFlags& tf,
                 const ProfileFlags& pf, const std::vector<double>& betas, const CommonOptions& common,
                 std::ostream& out) {
    PipelineConfig cfg = base_config(common);
    apply_thresholds(tf, cfg);
    apply_profile(pf, cfg);
    if (!betas.empty()) {
        try {
            cfg.betas = BetaSet(betas);
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, e.what());
        }
    }
    const PipelineRun run = run_pipeline(mask_path, out_dir, cfg);
    out << fmt::format("polygons={} triangles={} out={}\n", run.polygon_count, run.triangle_count, out_dir);
    return exit_status::kOk;
}

int cmd_augment(const std::string& manifest_path, const std::string& spec_path, long long seed_override,
                const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const PipelineConfig cfg = base_config(common);
    AugmentSpec spec;
    if (!spec_path.empty()) spec = AugmentSpec::from_config(read_text_file(spec_path));
    if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);
    const auto entries = parse_manifest(read_text_file(manifest_path));
    const fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : base / p; };

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::optional<Error> failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                const ManifestEntry& e = entries[i];
                const RasterFile img = read_png_file(resolve(e.image_in));
                if (img.kind != RasterFile::Kind::Rgb) {
                    throw Error(ErrorCode::Parse, fmt::format("'{}' is not an RGB image", e.image_in.string()));
                }
                const SegMask mask = load_mask(resolve(e.mask_in), cfg);
                AugmentSpec s = spec;
                s.seed = spec.seed + i;
                const auto [aimg, amask] = augment_pair(img.rgb, mask, s);
                write_bytes(resolve(e.image_out), encode_png(aimg));
                write_bytes(resolve(e.mask_out), encode_png(encode_mask(amask, cfg.palette)));
            } catch (const Error& e) {
                std::lock_guard lock(mu);
                // Keep the error from the earliest entry so reports are stable.
                if (!failure) failure = e;
                next = entries.size();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(entries.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) throw *failure;
    out << fmt::format("augmented {} pairs\n", entries.size());
    (void)err;
    return exit_status::kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"planvec: floor-plan masks to polygons, heatmaps, metrics and meshes", "planvec"};
    app.require_subcommand(1);
    CommonOptions common;

    std::string a1, a2, vocab, format = "text";
    int width = 0, height = 0;
    bool ids = false, strict = false, kv = false, with_bg = false;
    std::vector<double> betas;
    std::vector<std::string> merges;
    std::string spec_path;
    long long seed = -1;
    // Separate flag sets per subcommand: each keeps its own Option handles.
    ThresholdFlags tf, pipeline_tf;
    ProfileFlags pf, pipeline_pf;

    auto* r = app.add_subcommand("rasterize", "render an annotation SVG into a class mask");
    r->add_option("svg", a1, "annotation SVG")->required();
    r->add_option("out", a2, "output mask PNG")->required();
    r->add_option("--width", width, "canvas width (default: from the document)");
    r->add_option("--height", height, "canvas height (default: from the document)");
    r->add_option("--vocab", vocab, "class-token to shape-kind mapping file");
    r->add_flag("--ids", ids, "write raw class ids as 8-bit gray instead of palette colors");
    add_common(r, common);

    auto* v = app.add_subcommand("vectorize", "approximate and refine polygons from a class mask");
    v->add_option("mask", a1, "input mask PNG")->required();
    v->add_option("out", a2, "output polygons file")->required();
    v->add_option("--format", format, "text or geojson")->check(CLI::IsMember({"text", "geojson"}));
    add_thresholds(v, tf);
    add_common(v, common);

    auto* rc = app.add_subcommand("reconstruct", "extrude polygons into an OBJ mesh");
    rc->add_option("polygons", a1, "input polygons text file")->required();
    rc->add_option("out", a2, "output OBJ")->required();
    rc->add_flag("--strict", strict, "fail on the first invalid polygon instead of skipping it");
    add_profile(rc, pf);
    add_common(rc, common);

    auto* hm = app.add_subcommand("heatmaps", "write endpoint heatmaps for the opening classes");
    hm->add_option("mask", a1, "input mask PNG")->required();
    hm->add_option("out_dir", a2, "output directory")->required();
    hm->add_option("--betas", betas, "comma-separated spreads (default 2,10)")->delimiter(',');
    add_common(hm, common);

    auto* ev = app.add_subcommand("evaluate", "score a predicted mask against ground truth");
    ev->add_option("pred", a1, "predicted mask PNG")->required();
    ev->add_option("truth", a2, "ground-truth mask PNG")->required();
    ev->add_option("--merge", merges, "merged row, e.g. door+window=openings (repeatable)");
    ev->add_flag("--key-values", kv, "print key=value lines instead of a table");
    ev->add_flag("--with-background", with_bg, "include the background class");
    add_common(ev, common);

    auto* pl = app.add_subcommand("pipeline", "vectorize then reconstruct, with a run manifest");
    pl->add_option("mask", a1, "input mask PNG")->required();
    pl->add_option("out_dir", a2, "output directory")->required();
    pl->add_option("--betas", betas, "comma-separated spreads recorded in the manifest")->delimiter(',');
    add_thresholds(pl, pipeline_tf);
    add_profile(pl, pipeline_pf);
    add_common(pl, common);

    auto* au = app.add_subcommand("augment", "batch flip/rotate/crop/scale image and mask pairs");
    au->add_option("manifest", a1, "lines of: image_in mask_in image_out mask_out")->required();
    au->add_option("--spec", spec_path, "augmentation key=value file");
    au->add_option("--seed", seed, "override the spec seed");
    add_common(au, common);

    std::vector<const char*> argv{"planvec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_status::kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_status::kOk;
    } catch (const CLI::ParseError& e) {
        err << "planvec: " << e.what() << "\n";
        return exit_status::kConfig;
    }

    try {
        if (*r) return cmd_rasterize(a1, a2, width, height, vocab, ids, common, out);
        if (*v) return cmd_vectorize(a1, a2, format, tf, common, out);
        if (*rc) return cmd_reconstruct(a1, a2, strict, pf, common, out, err);
        if (*hm) return cmd_heatmaps(a1, a2, betas, common, out);
        if (*ev) return cmd_evaluate(a1, a2, merges, kv, with_bg, common, out);
        if (*pl) return cmd_pipeline(a1, a2, pipeline_tf, pipeline_pf, betas, common, out);
        if (*au) return cmd_augment(a1, spec_path, seed, common, out, err);
    } catch (const Error& e) {
        err << fmt::format("planvec: {} ({})\n", e.what(), to_string(e.code()));
        return exit_status_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << fmt::format("planvec: {}\n", e.what());
        return exit_status::kOther;
    } catch (const std::exception& e) {
        err << fmt::format("planvec: {}\n", e.what());
        return exit_status::kOther;
    }
    return exit_status::kOther;
}

}  // namespace planvec

#include "planvec/weights_io.hpp"

#include <bit>
#include <cstring>
#include <numeric>

#include <fmt/format.h>

namespace planvec {

namespace {

constexpr std::string_view kMagic = "PVW1";

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

class Reader {
public:
    explicit Reader(std::string_view b) : bytes_(b) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string str(std::size_t n) {
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(ErrorCode::Parse, fmt::format("weight file truncated at byte {}", pos_));
        }
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           [](std::size_t a, std::uint32_t d) { return a * d; });
}

}  // namespace

std::string write_weight_bundle(const WeightBundle& bundle) {
    std::string out(kMagic);
    put_u32(out, static_cast<std::uint32_t>(bundle.size()));
    for (const auto& [name, arr] : bundle) {
        if (element_count(arr.dims) != arr.values.size()) {
            throw Error(ErrorCode::InvalidKernel, fmt::format("array '{}' value count does not match dims", name));
        }
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out += name;
        put_u32(out, static_cast<std::uint32_t>(arr.dims.size()));
        for (auto d : arr.dims) put_u32(out, d);
    }
    for (const auto& [name, arr] : bundle)
        for (float f : arr.values) put_f32(out, f);
    return out;
}

WeightBundle read_weight_bundle(std::string_view bytes) {
    Reader r(bytes);
    if (r.str(4) != kMagic) throw Error(ErrorCode::Parse, "not a weight file (bad magic)");
    const std::uint32_t count = r.u32();
    std::vector<std::pair<std::string, NamedArray>> entries;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t len = r.u32();
        std::string name = r.str(len);
        NamedArray arr;
        const std::uint32_t nd = r.u32();
        if (nd > 8) throw Error(ErrorCode::Parse, fmt::format("array '{}' has {} dims", name, nd));
        for (std::uint32_t d = 0; d < nd; ++d) arr.dims.push_back(r.u32());
        entries.emplace_back(std::move(name), std::move(arr));
    }
    WeightBundle out;
    for (auto& [name, arr] : entries) {
        const std::size_t n = element_count(arr.dims);
        if (n > bytes.size()) throw Error(ErrorCode::Parse, fmt::format("array '{}' larger than file", name));
        arr.values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) arr.values.push_back(r.f32());
        if (!out.emplace(name, std::move(arr)).second) {
            throw Error(ErrorCode::Parse, fmt::format("duplicate array '{}'", name));
        }
    }
    if (!r.done()) throw Error(ErrorCode::Parse, "trailing bytes after weight payload");
    return out;
}

std::string weight_manifest(const WeightBundle& bundle) {
    std::string out;
    for (const auto& [name, arr] : bundle) {
        std::string dims;
        for (std::size_t i = 0; i < arr.dims.size(); ++i) dims += (i ? "x" : "") + std::to_string(arr.dims[i]);
        out += fmt::format("{} {}\n", name, dims.empty() ? "scalar" : dims);
    }
    return out;
}

namespace {

void store_kernel(WeightBundle& b, const std::string& name, const ConvKernel& k) {
    NamedArray w;
    w.dims = {static_cast<std::uint32_t>(k.kh), static_cast<std::uint32_t>(k.kw),
              static_cast<std::uint32_t>(k.in_channels), static_cast<std::uint32_t>(k.out_channels)};
    w.values.assign(k.weights.begin(), k.weights.end());
    if (w.values.empty()) w.values.assign(element_count(w.dims), 0.0f);
    b[name + ".weight"] = std::move(w);
    NamedArray bias;
    bias.dims = {static_cast<std::uint32_t>(k.out_channels)};
    bias.values.assign(k.bias.begin(), k.bias.end());
    if (bias.values.empty()) bias.values.assign(k.out_channels, 0.0f);
    b[name + ".bias"] = std::move(bias);
    b[name + ".dilation"] = NamedArray{{1}, {static_cast<float>(k.dilation)}};
}

const NamedArray& find(const WeightBundle& b, const std::string& name) {
    auto it = b.find(name);
    if (it == b.end()) throw Error(ErrorCode::Parse, fmt::format("weight file lacks '{}'", name));
    return it->second;
}

ConvKernel load_kernel(const WeightBundle& b, const std::string& name) {
    const NamedArray& w = find(b, name + ".weight");
    if (w.dims.size() != 4) throw Error(ErrorCode::Parse, fmt::format("'{}.weight' must be 4-D", name));
    const NamedArray& dil = find(b, name + ".dilation");
    if (dil.values.size() != 1) throw Error(ErrorCode::Parse, fmt::format("'{}.dilation' must be scalar", name));
    ConvKernel k(static_cast<int>(w.dims[0]), static_cast<int>(w.dims[1]), static_cast<int>(w.dims[2]),
                 static_cast<int>(w.dims[3]), static_cast<int>(dil.values[0]));
    k.weights.assign(w.values.begin(), w.values.end());
    const NamedArray& bias = find(b, name + ".bias");
    if (bias.values.size() != static_cast<std::size_t>(k.out_channels)) {
        throw Error(ErrorCode::Parse, fmt::format("'{}.bias' has wrong length", name));
    }
    k.bias.assign(bias.values.begin(), bias.values.end());
    return k;
}

}  // namespace

void store_am_weights(WeightBundle& b, const std::string& p, const AMWeights& w) {
    store_kernel(b, p + ".compress_spatial", w.compress_spatial);
    store_kernel(b, p + ".cam.compress", w.channel.compress);
    store_kernel(b, p + ".cam.squeeze", w.channel.squeeze);
    store_kernel(b, p + ".cam.expand", w.channel.expand);
    for (std::size_t i = 0; i < w.spatial.pointwise.size(); ++i) {
        store_kernel(b, fmt::format("{}.sam.pointwise{}", p, i), w.spatial.pointwise[i]);
        store_kernel(b, fmt::format("{}.sam.dilated{}", p, i), w.spatial.dilated[i]);
    }
    store_kernel(b, p + ".ac.square", w.fuse.square);
    store_kernel(b, p + ".ac.horizontal", w.fuse.horizontal);
    store_kernel(b, p + ".ac.vertical", w.fuse.vertical);
    const int c = w.fuse.square.out_channels;
    NamedArray gamma{{static_cast<std::uint32_t>(c)}, {}};
    NamedArray beta{{static_cast<std::uint32_t>(c)}, {}};
    for (int i = 0; i < c; ++i) {
        gamma.values.push_back(w.fuse.norm.gamma.empty() ? 1.0f : static_cast<float>(w.fuse.norm.gamma[i]));
        beta.values.push_back(w.fuse.norm.beta.empty() ? 0.0f : static_cast<float>(w.fuse.norm.beta[i]));
    }
    b[p + ".ac.gn.gamma"] = std::move(gamma);
    b[p + ".ac.gn.beta"] = std::move(beta);
    b[p + ".ac.gn.groups"] = NamedArray{{1}, {static_cast<float>(w.fuse.norm.groups)}};
    b[p + ".ac.gn.epsilon"] = NamedArray{{1}, {static_cast<float>(w.fuse.norm.epsilon)}};
}

AMWeights load_am_weights(const WeightBundle& b, const std::string& p) {
    AMWeights w;
    w.compress_spatial = load_kernel(b, p + ".compress_spatial");
    w.channel.compress = load_kernel(b, p + ".cam.compress");
    w.channel.squeeze = load_kernel(b, p + ".cam.squeeze");
    w.channel.expand = load_kernel(b, p + ".cam.expand");
    for (std::size_t i = 0; b.count(fmt::format("{}.sam.pointwise{}.weight", p, i)); ++i) {
        w.spatial.pointwise.push_back(load_kernel(b, fmt::format("{}.sam.pointwise{}", p, i)));
        w.spatial.dilated.push_back(load_kernel(b, fmt::format("{}.sam.dilated{}", p, i)));
    }
    w.fuse.square = load_kernel(b, p + ".ac.square");
    w.fuse.horizontal = load_kernel(b, p + ".ac.horizontal");
    w.fuse.vertical = load_kernel(b, p + ".ac.vertical");
    const auto& gamma = find(b, p + ".ac.gn.gamma").values;
    const auto& beta = find(b, p + ".ac.gn.beta").values;
    w.fuse.norm.gamma.assign(gamma.begin(), gamma.end());
    w.fuse.norm.beta.assign(beta.begin(), beta.end());
    w.fuse.norm.groups = static_cast<int>(find(b, p + ".ac.gn.groups").values.at(0));
    w.fuse.norm.epsilon = find(b, p + ".ac.gn.epsilon").values.at(0);
    return w;
}

}  // namespace planvec

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "planvec/attention.hpp"

namespace planvec {

struct NamedArray {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;
};

/// Ordered by name so serialization is deterministic.
using WeightBundle = std::map<std::string, NamedArray>;

/// Binary layout, all integers little-endian u32:
///   "PVW1" count { name_len name ndims dims... } then every payload in
///   the same order as little-endian float32.
std::string write_weight_bundle(const WeightBundle& bundle);
WeightBundle read_weight_bundle(std::string_view bytes);

/// One line per array: "name d0xd1x...".
std::string weight_manifest(const WeightBundle& bundle);

/// Flattens attention weights under the names "<prefix>.<part>.weight",
/// "<prefix>.<part>.bias" and "<prefix>.<part>.dilation".
void store_am_weights(WeightBundle& bundle, const std::string& prefix, const AMWeights& w);
AMWeights load_am_weights(const WeightBundle& bundle, const std::string& prefix);

}  // namespace planvec

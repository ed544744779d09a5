#pragma once

#include <cstdint>
#include <vector>

#include "planvec/mask_io.hpp"

namespace planvec::testing {

/// Rectilinear floor plan at roughly CubiCasa scale (walls 8-14 px thick,
/// openings 20-40 px long): an outer wall ring, a few interior partitions,
/// doors cut into walls and windows set into the outer ring. Openings are
/// kept apart from walls by a one-pixel gap so every class forms its own
/// joint-mask component when `detached_openings` is true.
SegMask synthetic_plan(std::uint64_t seed, bool detached_openings = false);

std::vector<SegMask> synthetic_corpus(int count = 50, std::uint64_t seed = 1729, bool detached_openings = false);

void fill_rect(SegMask& mask, int x0, int y0, int x1, int y1, ClassId cls);  // inclusive-exclusive

}  // namespace planvec::testing

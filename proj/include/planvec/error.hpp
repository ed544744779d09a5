#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planvec {

enum class ErrorCode {
    InvalidClassId,
    AmbiguousColor,
    UnknownColor,
    EmptyClassSet,
    DimensionMismatch,
    MalformedDocument,
    UnparseableGeometry,
    ZeroAreaCanvas,
    NonPositiveBeta,
    EmptyPointSet,
    ZeroAreaRect,
    DegenerateSplit,
    InvalidThreshold,
    SelfIntersectingPolygon,
    InvalidProfile,
    EmptyCrop,
    InvalidSpec,
    ChannelMismatch,
    IndivisibleGroups,
    OddChannels,
    InvalidKernel,
    MissingInput,
    Io,
    Parse,
    Config,
};

std::string_view to_string(ErrorCode code);

/// Exception type thrown by every planvec operation. Carries a machine
/// readable code next to the human readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace planvec

#include "planvec/error.hpp"

namespace planvec {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidClassId: return "InvalidClassId";
        case ErrorCode::AmbiguousColor: return "AmbiguousColor";
        case ErrorCode::UnknownColor: return "UnknownColor";
        case ErrorCode::EmptyClassSet: return "EmptyClassSet";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::UnparseableGeometry: return "UnparseableGeometry";
        case ErrorCode::ZeroAreaCanvas: return "ZeroAreaCanvas";
        case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
        case ErrorCode::EmptyPointSet: return "EmptyPointSet";
        case ErrorCode::ZeroAreaRect: return "ZeroAreaRect";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::SelfIntersectingPolygon: return "SelfIntersectingPolygon";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::EmptyCrop: return "EmptyCrop";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ChannelMismatch: return "ChannelMismatch";
        case ErrorCode::IndivisibleGroups: return "IndivisibleGroups";
        case ErrorCode::OddChannels: return "OddChannels";
        case ErrorCode::InvalidKernel: return "InvalidKernel";
        case ErrorCode::MissingInput: return "MissingInput";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace planvec

#include "flowcap/errors.hpp"

namespace flowcap {

std::string_view to_string(FitErrorKind kind) noexcept {
    switch (kind) {
    case FitErrorKind::InsufficientWorkingData: return "InsufficientWorkingData";
    case FitErrorKind::DegenerateData: return "DegenerateData";
    case FitErrorKind::InsufficientSaturationData: return "InsufficientSaturationData";
    case FitErrorKind::NoSaturationObserved: return "NoSaturationObserved";
    case FitErrorKind::ParallelLines: return "ParallelLines";
    case FitErrorKind::NegativeIntersection: return "NegativeIntersection";
    case FitErrorKind::EmptyInput: return "EmptyInput";
    }
    return "FitError";
}

std::string_view to_string(ParseErrorKind kind) noexcept {
    switch (kind) {
    case ParseErrorKind::BadVersion: return "BadVersion";
    case ParseErrorKind::BadCount: return "BadCount";
    case ParseErrorKind::TruncatedDatagram: return "TruncatedDatagram";
    case ParseErrorKind::ClockInconsistent: return "ClockInconsistent";
    }
    return "ParseError";
}

} // namespace flowcap

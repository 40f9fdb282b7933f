#pragma once

#include <stdexcept>
#include <string>

namespace eh {

// Base for all library errors so callers can catch everything at once.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EH_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                 \
    public:                                                     \
        explicit Name(const std::string& msg) : Error(msg) {}   \
    }

EH_DEFINE_ERROR(EdgeArityMismatch);
EH_DEFINE_ERROR(VertexOutOfRange);
EH_DEFINE_ERROR(ParseError);
EH_DEFINE_ERROR(GenerationExhausted);
EH_DEFINE_ERROR(Infeasible);
EH_DEFINE_ERROR(NotConverged);
EH_DEFINE_ERROR(ZeroSupport);
EH_DEFINE_ERROR(StationarityViolated);
EH_DEFINE_ERROR(StateSpaceTooLarge);
EH_DEFINE_ERROR(NotADistribution);
EH_DEFINE_ERROR(NoSurvivingEdges);
EH_DEFINE_ERROR(NoCommonNeighbors);
EH_DEFINE_ERROR(NegativeWeight);
EH_DEFINE_ERROR(DivisibilityViolated);
EH_DEFINE_ERROR(StageExhausted);
EH_DEFINE_ERROR(ClosureFailed);
EH_DEFINE_ERROR(PreconditionViolation);
EH_DEFINE_ERROR(UnsupportedGeometry);

#undef EH_DEFINE_ERROR

} // namespace eh

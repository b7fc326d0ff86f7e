#pragma once

#include <stdexcept>
#include <string>

namespace deepedge {

// Base for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DEEPEDGE_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

DEEPEDGE_DEFINE_ERROR(SchedulingInPast);
DEEPEDGE_DEFINE_ERROR(InvalidProfileSet);
DEEPEDGE_DEFINE_ERROR(DegenerateAttractiveness);
DEEPEDGE_DEFINE_ERROR(DimensionMismatch);
DEEPEDGE_DEFINE_ERROR(ArchitectureMismatch);
DEEPEDGE_DEFINE_ERROR(InsufficientExperience);
DEEPEDGE_DEFINE_ERROR(UnknownTask);
DEEPEDGE_DEFINE_ERROR(InvalidConfig);
DEEPEDGE_DEFINE_ERROR(MissingCheckpoint);
DEEPEDGE_DEFINE_ERROR(EmptyReport);
DEEPEDGE_DEFINE_ERROR(FormatError);

#undef DEEPEDGE_DEFINE_ERROR

} // namespace deepedge

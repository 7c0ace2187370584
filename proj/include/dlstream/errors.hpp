#pragma once

#include <stdexcept>
#include <string>

namespace dls {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotFound : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Event stream breaks the arrival rules (label before instance, duplicate label, ...).
struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dls

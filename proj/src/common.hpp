#pragma once

#include <stdexcept>
#include <string>

namespace logwave {

// Error taxonomy maps 1:1 onto process exit codes / C-API status codes:
// input data problems (2), bad parameters (3), numerical failures (4).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace logwave

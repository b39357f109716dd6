#pragma once

#include <stdexcept>
#include <string>

namespace bgk {

// Exit-code conventions used by the CLI: 2 config, 3 resonance guard,
// 4 numerical tolerance, 5 internal inconsistency.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resonance_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct tolerance_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct internal_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bgk

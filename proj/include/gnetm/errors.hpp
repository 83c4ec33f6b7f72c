#pragma once

#include <stdexcept>
#include <string>

namespace gnetm {

// Thrown when a request exceeds a configured memory/size guard.
// The message always names the guard and its current value, so callers
// can tell a hard failure from a limit that can be raised.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gnetm

#pragma once

#include <stdexcept>
#include <string>

namespace eclink {

// Bad user input: unreadable file, malformed config, unparseable URL.
// CLI maps this to exit code 1; anything else escaping a command is exit 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eclink

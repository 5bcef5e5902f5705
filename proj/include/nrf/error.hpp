#pragma once

#include <stdexcept>
#include <string>

namespace nrf {

// Raised for problems with user-supplied inputs: missing or undecodable
// files, misaligned directories, mismatched dimensions between files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nrf

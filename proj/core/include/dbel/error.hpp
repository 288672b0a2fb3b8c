#pragma once

#include <stdexcept>
#include <string>

namespace dbel {

/// Thrown for invalid inputs, exceeded enumeration caps, and
/// zero-probability conditioning.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dbel

#pragma once

#include <stdexcept>
#include <string>

namespace dca {

// Bad option values, inconsistent mappings, out-of-range thresholds.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or mis-ordered stream files.
class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Internal preconditions guaranteed by callers. Violations are bugs, not
// user errors, and surface as std::logic_error.
inline void contract(bool ok, const char* what) {
    if (!ok) throw std::logic_error(what);
}

} // namespace detail
} // namespace dca

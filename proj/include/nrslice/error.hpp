#pragma once

#include <stdexcept>
#include <string>

namespace nrslice {

/// Invalid scenario or parameter. `path` names the offending field when known
/// (e.g. "slices.static"), otherwise it is empty.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string path = {})
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A slice whose bandwidth share rounds down to zero PRBs.
class SliceTooNarrow : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace nrslice

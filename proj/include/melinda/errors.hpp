#pragma once

#include <stdexcept>
#include <string>

namespace melinda {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Filesystem read/write failure. Carries the offending path.
class IoError : public Error {
public:
    IoError(std::string path, const std::string& reason)
        : Error(path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace melinda

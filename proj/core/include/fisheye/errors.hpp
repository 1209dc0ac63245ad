#pragma once

#include <stdexcept>
#include <string>

namespace fisheye {

// File could not be read or written (missing, truncated, unwritable).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// File contents do not match a supported format.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Image analysis failed to find the expected structure.
class DetectionError : public std::runtime_error {
public:
    explicit DetectionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fisheye

#pragma once

#include <stdexcept>
#include <string>

namespace spectrafrac {

// Thrown when a request would exceed a hard size cap (grid points, cylinder
// depth, construction depth).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when generated data violates a declared invariant (e.g. a potential
// value outside the declared bound r).
class invariant_error : public std::logic_error {
public:
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

// Thrown on numerical failures; carries the offending index when known.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, long long index = -1)
        : std::runtime_error(index >= 0 ? what + " (index " + std::to_string(index) + ")" : what),
          index_(index) {}
    long long index() const { return index_; }

private:
    long long index_;
};

}  // namespace spectrafrac

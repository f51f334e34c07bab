#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdecoh {

// Quadrature or iteration failed to reach the requested accuracy.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double error_estimate)
        : std::runtime_error(what), m_estimate(error_estimate) {}
    double estimate() const { return m_estimate; }
private:
    double m_estimate;
};

// Evaluation requested too close to a resonator pole.
class pole_error : public std::runtime_error {
public:
    pole_error(const std::string& what, std::size_t k)
        : std::runtime_error(what), m_k(k) {}
    std::size_t resonator_index() const { return m_k; }
private:
    std::size_t m_k;
};

// Requested lattice/solver settings exceed the configured capacity.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run/solver configuration (step sizes, grids, config file).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failure while writing results.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qdecoh

#pragma once

#include <vector>

#include "sfns/errors.hpp"
#include "sfns/spectral.hpp"

namespace sfns {

// Scalar trajectory on a strictly increasing time grid starting at 0.
struct ScalarPath {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size())
            throw structural_error("ScalarPath: times/values length mismatch");
        if (times.empty() || times.front() != 0.0)
            throw structural_error("ScalarPath: grid must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw structural_error("ScalarPath: grid must be strictly increasing");
    }
};

// Field-valued trajectory.
struct FieldPath {
    std::vector<double> times;
    std::vector<SpectralField> values;

    void validate() const {
        if (times.size() != values.size())
            throw structural_error("FieldPath: times/values length mismatch");
        if (times.empty() || times.front() != 0.0)
            throw structural_error("FieldPath: grid must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw structural_error("FieldPath: grid must be strictly increasing");
    }
};

inline std::vector<double> uniform_grid(double T, int steps) {
    if (steps < 1 || !(T > 0.0)) throw param_error("uniform_grid: need T > 0 and steps >= 1");
    std::vector<double> t(steps + 1);
    for (int i = 0; i <= steps; ++i) t[i] = T * i / steps;
    return t;
}

inline bool is_uniform(const std::vector<double>& t, double rel_tol = 1e-9) {
    if (t.size() < 2) return true;
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
        if (std::abs((t[i + 1] - t[i]) - h) > rel_tol * h) return false;
    return true;
}

}  // namespace sfns

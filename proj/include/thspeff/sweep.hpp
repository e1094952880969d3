// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace thspeff {

enum class CurveTag { analytic, empirical };

inline std::string to_string(CurveTag t) { return t == CurveTag::analytic ? "analytic" : "empirical"; }

/// One curve. Analytic curves leave std/stderr/trials empty.
struct SweepResult {
    std::string name;
    CurveTag tag = CurveTag::analytic;
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> std;       // one standard deviation of the statistic
    std::vector<double> std_error; // std / sqrt(trials)
    std::vector<std::size_t> trials;
    std::map<std::string, std::string> metadata;

    std::size_t size() const noexcept { return x.size(); }
    bool empirical() const noexcept { return tag == CurveTag::empirical; }

    /// Lengths agree and dispersions are nonnegative.
    bool consistent() const
    {
        if (mean.size() != x.size())
            return false;
        if (!empirical())
            return std.empty() && trials.empty();
        if (std.size() != x.size() || std_error.size() != x.size() || trials.size() != x.size())
            return false;
        for (double s : std)
            if (!(s >= 0.0))
                return false;
        return true;
    }
};

} // namespace thspeff

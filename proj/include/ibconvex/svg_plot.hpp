#pragma once

#include <array>
#include <string>
#include <vector>

#include "ibconvex/experiment.hpp"

namespace ibc {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;     // color scale input in [0,1]
    bool outlined = false;  // drawn with a gray ring
};

/// Linear purple (0) to yellow (1) ramp, as 8-bit RGB.
std::array<int, 3> convexity_color(double value);

std::string render_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                               const std::string& x_label, const std::string& y_label);

/// Accuracy (x) against complexity (y), colored by the chosen quasi-convexity;
/// natural-language encoders are outlined.
std::string render_tradeoff_svg(const std::vector<EncoderRecord>& records, QcSide side, const std::string& title);

}  // namespace ibc

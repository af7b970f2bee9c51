#include "ibconvex/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ibc {

namespace {

constexpr double kWidth = 640, kHeight = 520;
constexpr double kLeft = 70, kRight = 110, kTop = 40, kBottom = 60;
constexpr std::array<int, 3> kPurple{68, 1, 84};
constexpr std::array<int, 3> kYellow{253, 231, 37};

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string rgb(const std::array<int, 3>& c)
{
    return "rgb(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
}

}  // namespace

std::array<int, 3> convexity_color(double value)
{
    const double t = std::isfinite(value) ? std::clamp(value, 0.0, 1.0) : 0.0;
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = static_cast<int>(std::lround(kPurple[i] + t * (kYellow[i] - kPurple[i])));
    return out;
}

std::string render_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                               const std::string& x_label, const std::string& y_label)
{
    double x_max = 0.0, y_max = 0.0;
    for (const auto& p : points) x_max = std::max(x_max, p.x), y_max = std::max(y_max, p.y);
    x_max = x_max > 0.0 ? x_max * 1.05 : 1.0;
    y_max = y_max > 0.0 ? y_max * 1.05 : 1.0;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + x / x_max * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - y / y_max) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
        << xml_escape(title) << "</text>\n";

    // Axes and ticks
    svg << "  <g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n";
    svg << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
    svg << "  </g>\n  <g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_max * i / 5.0, yv = y_max * i / 5.0;
        svg << "    <text x=\"" << fmt(sx(xv)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(xv)
            << "</text>\n";
        svg << "    <text x=\"" << kLeft - 6 << "\" y=\"" << fmt(sy(yv) + 4) << "\" text-anchor=\"end\">" << fmt(yv)
            << "</text>\n";
    }
    svg << "    <text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "    <text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(y_label) << "</text>\n  </g>\n";

    // Points: plain markers first so outlined ones stay visible on top.
    svg << "  <g>\n";
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& p : points) {
            if (p.outlined != (pass == 1)) continue;
            svg << "    <circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"" << (p.outlined ? 4 : 2.5)
                << "\" fill=\"" << rgb(convexity_color(p.value)) << '"';
            if (p.outlined) svg << " stroke=\"gray\" stroke-width=\"1.5\"";
            svg << "/>\n";
        }
    }
    svg << "  </g>\n";

    // Color bar
    const double bx = kLeft + pw + 30;
    svg << "  <defs><linearGradient id=\"qc\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
        << "<stop offset=\"0\" stop-color=\"" << rgb(kPurple) << "\"/><stop offset=\"1\" stop-color=\"" << rgb(kYellow)
        << "\"/></linearGradient></defs>\n";
    svg << "  <rect x=\"" << bx << "\" y=\"" << kTop << "\" width=\"16\" height=\"" << ph << "\" fill=\"url(#qc)\"/>\n";
    svg << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "    <text x=\"" << bx + 22 << "\" y=\"" << kTop + 4 << "\">1.0</text>\n";
    svg << "    <text x=\"" << bx + 22 << "\" y=\"" << kTop + ph + 4 << "\">0.0</text>\n";
    svg << "  </g>\n</svg>\n";
    return svg.str();
}

std::string render_tradeoff_svg(const std::vector<EncoderRecord>& records, QcSide side, const std::string& title)
{
    std::vector<ScatterPoint> pts;
    pts.reserve(records.size());
    for (const auto& r : records)
        pts.push_back({r.accuracy, r.complexity, side == QcSide::Meaning ? r.qc_meaning : r.qc_referent,
                       r.type == EncoderType::Natural});
    return render_scatter_svg(pts, title, "Accuracy I(W;U) [bits]", "Complexity I(M;W) [bits]");
}

}  // namespace ibc

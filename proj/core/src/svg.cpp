#include <curveflow/svg.hpp>

#include <curveflow/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace curveflow::svg {

std::string ramp_color(int k, int n) {
    const double t = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
    const int r = static_cast<int>(30 + 200 * t);
    const int g = static_cast<int>(60 + 40 * (1.0 - std::abs(2 * t - 1)));
    const int b = static_cast<int>(200 * (1.0 - t) + 30);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

void write_plot(const std::string& path, const std::vector<Series>& series,
                const PlotOptions& opt) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (opt.log_x && !(s.x[i] > 0)) continue;
            if (opt.log_y && !(s.y[i] > 0)) continue;
            xmin = std::min(xmin, tx(s.x[i])); xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i])); ymax = std::max(ymax, ty(s.y[i]));
        }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double margin = 50;
    double sx = (opt.width - 2 * margin) / (xmax - xmin);
    double sy = (opt.height - 2 * margin) / (ymax - ymin);
    if (opt.equal_aspect) sx = sy = std::min(sx, sy);

    auto px = [&](double v) { return margin + (tx(v) - xmin) * sx; };
    auto py = [&](double v) { return opt.height - margin - (ty(v) - ymin) * sy; };

    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
       << "\" height=\"" << opt.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        os << "<text x=\"" << opt.width / 2
           << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << opt.title
           << "</text>\n";
    // frame
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
       << opt.width - 2 * margin << "\" height=\"" << opt.height - 2 * margin
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color
           << "\" stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (opt.log_x && !(s.x[i] > 0)) continue;
            if (opt.log_y && !(s.y[i] > 0)) continue;
            os << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        os << "\"/>\n";
    }
    double ly = margin + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        os << "<text x=\"" << opt.width - margin - 150 << "\" y=\"" << ly
           << "\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label
           << "</text>\n";
        ly += 14;
    }
    os << "</svg>\n";
}

} // namespace curveflow::svg

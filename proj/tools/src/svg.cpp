#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "axifb/errors.hpp"

namespace axifb::cli {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot write " + path);
    return os;
}

}  // namespace

void write_line_plot(const std::string& path, const std::string& title, const std::vector<Series>& series, bool log_x) {
    const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto X = [&](double x) { return log_x ? std::log10(x) : x; };
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k]) || (log_x && !(s.x[k] > 0))) continue;
            x0 = std::min(x0, X(s.x[k]));
            x1 = std::max(x1, X(s.x[k]));
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto px = [&](double x) { return L + (X(x) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto os = open(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << (log_x ? "1e" : "") << fmt(x0)
       << "</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
       << (log_x ? "1e" : "") << fmt(x1) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y0) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y1) << "</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-size=\"12\" text-anchor=\"middle\">"
       << (log_x ? "log10 r" : "r") << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = kColors[s % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            if (!std::isfinite(series[s].y[k])) continue;
            os << fmt(px(series[s].x[k])) << ',' << fmt(py(series[s].y[k])) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 14 * s << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
           << col << "\">" << series[s].name << "</text>\n";
    }
    os << "</svg>\n";
}

void write_level_sets(const std::string& path, const std::string& title, const GridField& f, int n_levels) {
    const GridSpec& g = f.grid();
    const double S = 480.0 / std::max(g.n1, g.n2), top = 40;
    double umax = std::max(f.max_value(), 1e-300);
    auto os = open(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g.n1 * S + 20 << "\" height=\"" << g.n2 * S + top + 10
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"10\" y=\"24\" font-size=\"15\">" << title << "</text>\n";
    auto X = [&](double i) { return 10 + i * S; };
    auto Y = [&](double j) { return top + (g.n2 - j) * S; };
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            if (!f.cell_positive(i, j)) continue;
            int shade = 235 - int(std::floor(180 * f.at(i, j) / umax));
            os << "<rect x=\"" << fmt(X(i)) << "\" y=\"" << fmt(Y(j + 1)) << "\" width=\"" << fmt(S) << "\" height=\""
               << fmt(S) << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\"/>\n";
        }
    // iso-lines by marching squares on cell centres
    for (int l = 1; l <= n_levels; ++l) {
        double c = umax * l / (n_levels + 1);
        os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"0.8\" d=\"";
        for (int j = 0; j + 1 < g.n2; ++j)
            for (int i = 0; i + 1 < g.n1; ++i) {
                double v[4] = {f.at(i, j), f.at(i + 1, j), f.at(i + 1, j + 1), f.at(i, j + 1)};
                double cx[4] = {0, 1, 1, 0}, cy[4] = {0, 0, 1, 1};
                std::vector<std::pair<double, double>> pts;
                for (int e = 0; e < 4; ++e) {
                    int a = e, b = (e + 1) % 4;
                    if ((v[a] > c) == (v[b] > c)) continue;
                    double t = (c - v[a]) / (v[b] - v[a]);
                    pts.push_back({i + 0.5 + cx[a] + t * (cx[b] - cx[a]), j + 0.5 + cy[a] + t * (cy[b] - cy[a])});
                }
                for (std::size_t k = 0; k + 1 < pts.size(); k += 2)
                    os << 'M' << fmt(X(pts[k].first)) << ' ' << fmt(Y(pts[k].second)) << 'L' << fmt(X(pts[k + 1].first))
                       << ' ' << fmt(Y(pts[k + 1].second));
            }
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace axifb::cli

#include "parksim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "parksim/metrics.hpp"

namespace parksim {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string esc(const std::string& s) {
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

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

double nice_step(double range, int target_ticks) {
    const double raw = range / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (mag * m >= raw) return mag * m;
    }
    return mag * 10.0;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range data_range(const PlotSpec& spec, bool y_axis) {
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (const PlotSeries& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            const double v = y_axis ? y : x;
            if (!any) {
                lo = hi = v;
                any = true;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!any) return {0.0, 1.0};
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

}  // namespace

void write_plot_svg(const std::string& path, const PlotSpec& spec) {
    const double ml = 64, mr = 18, mt = 30, mb = 48;
    const double w = spec.width, h = spec.height;
    const double pw = w - ml - mr, ph = h - mt - mb;
    const Range xr = data_range(spec, false);
    const Range yr = data_range(spec, true);

    const auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto sy = [&](double y) { return mt + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    f << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
    f << "<text x=\"" << ml << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\" "
         "font-weight=\"bold\">"
      << esc(spec.title) << "</text>\n";

    const double xstep = nice_step(xr.hi - xr.lo, 6);
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    f << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-9 * xstep; t += xstep) {
        const double px = sx(t);
        f << "<line x1=\"" << fmt_coord(px) << "\" y1=\"" << fmt_coord(mt) << "\" x2=\""
          << fmt_coord(px) << "\" y2=\"" << fmt_coord(mt + ph)
          << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        f << "<text x=\"" << fmt_coord(px) << "\" y=\"" << fmt_coord(mt + ph + 14)
          << "\" text-anchor=\"middle\">" << fmt_g(t) << "</text>\n";
    }
    for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-9 * ystep; t += ystep) {
        const double py = sy(t);
        f << "<line x1=\"" << fmt_coord(ml) << "\" y1=\"" << fmt_coord(py) << "\" x2=\""
          << fmt_coord(ml + pw) << "\" y2=\"" << fmt_coord(py)
          << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        f << "<text x=\"" << fmt_coord(ml - 6) << "\" y=\"" << fmt_coord(py + 3)
          << "\" text-anchor=\"end\">" << fmt_g(t) << "</text>\n";
    }
    f << "</g>\n";

    f << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    f << "<text x=\"" << fmt_coord(ml + pw / 2) << "\" y=\"" << fmt_coord(h - 10)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
      << esc(spec.x_label) << "</text>\n";
    f << "<text x=\"14\" y=\"" << fmt_coord(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 "
      << fmt_coord(mt + ph / 2) << ")\">" << esc(spec.y_label) << "</text>\n";

    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const PlotSeries& s = spec.series[i];
        const char* color = kPalette[i % kPaletteSize];
        f << "<g data-label=\"" << esc(s.label) << "\">\n";
        if (s.draw_line && s.points.size() >= 2) {
            f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
            if (s.dashed) f << " stroke-dasharray=\"6 4\"";
            f << " points=\"";
            for (std::size_t j = 0; j < s.points.size(); ++j) {
                if (j) f << ' ';
                f << fmt_coord(sx(s.points[j].first)) << ',' << fmt_coord(sy(s.points[j].second));
            }
            f << "\"/>\n";
        }
        for (const auto& [x, y] : s.points) {
            f << "<circle cx=\"" << fmt_coord(sx(x)) << "\" cy=\"" << fmt_coord(sy(y))
              << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        f << "</g>\n";
    }

    double ly = mt + 14;
    f << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        const double lx = ml + pw - 170;
        f << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly - 3) << "\" x2=\""
          << fmt_coord(lx + 18) << "\" y2=\"" << fmt_coord(ly - 3) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"";
        if (spec.series[i].dashed) f << " stroke-dasharray=\"6 4\"";
        f << "/>\n";
        f << "<text x=\"" << fmt_coord(lx + 24) << "\" y=\"" << fmt_coord(ly) << "\">"
          << esc(spec.series[i].label) << "</text>\n";
        ly += 14;
    }
    f << "</g>\n";
    f << "</svg>\n";
    if (!f) throw std::runtime_error("error writing " + path);
}

namespace {

using RowFilter = bool (*)(const CsvRow&);

std::set<double> distinct(const std::vector<CsvRow>& rows, double CsvRow::* field) {
    std::set<double> out;
    for (const CsvRow& r : rows) out.insert(r.*field);
    return out;
}

// Relative best-case spot count, recovered from the absolute bound mean and
// the row's own normalization.
double bound_rel(const CsvRow& r) {
    if (r.np_mean <= 0.0) return 0.0;
    return r.bound_np_mean * (r.np_rel_s1 / r.np_mean);
}

std::string combo_suffix(const CsvRow& r, bool many_tw, bool many_adoption, bool many_cap) {
    std::string s;
    if (many_tw) s += " t_w=" + fmt_g(r.t_w) + "s";
    if (many_adoption) s += " adoption=" + fmt_g(r.adoption);
    if (many_cap && r.cap) s += " cap=" + std::to_string(*r.cap);
    return s;
}

}  // namespace

std::vector<std::string> write_standard_plots(const std::string& results_csv,
                                              const std::string& out_dir) {
    const std::vector<CsvRow> rows = read_results_csv(results_csv);
    if (rows.empty()) throw std::runtime_error(results_csv + ": no result rows");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const auto tws = distinct(rows, &CsvRow::t_w);
    const auto adoptions = distinct(rows, &CsvRow::adoption);
    bool many_cap = false;
    {
        std::set<std::uint64_t> caps;
        bool uncapped = false;
        for (const CsvRow& r : rows) {
            if (r.cap) {
                caps.insert(*r.cap);
            } else {
                uncapped = true;
            }
        }
        many_cap = caps.size() + (uncapped ? 1 : 0) > 1;
    }
    const bool many_tw = tws.size() > 1;
    const bool many_adoption = adoptions.size() > 1;

    // x = r_max figures: one series per scenario+combo, sorted by r_max.
    const auto rmax_series = [&](double CsvRow::* yfield, bool fleet_only) {
        std::map<std::string, std::vector<std::pair<double, double>>> by_label;
        for (const CsvRow& r : rows) {
            if (r.scenario == "private") continue;
            if (fleet_only && r.scenario != "shared_cars" && r.scenario != "self_driving") {
                continue;
            }
            const std::string label =
                r.scenario + combo_suffix(r, many_tw, many_adoption, many_cap);
            by_label[label].emplace_back(r.r_max, r.*yfield);
        }
        std::vector<PlotSeries> out;
        for (auto& [label, pts] : by_label) {
            std::sort(pts.begin(), pts.end());
            if (pts.size() < 2) continue;
            out.push_back(PlotSeries{label, std::move(pts), true, false});
        }
        return out;
    };

    {
        PlotSpec spec;
        spec.title = "Parking demand vs claim radius";
        spec.x_label = "r_max (m)";
        spec.y_label = "spots relative to one-per-car-end";
        spec.series = rmax_series(&CsvRow::np_rel_s1, false);
        // Best-case floor along the scenario with the widest radius coverage.
        std::map<std::string, std::vector<std::pair<double, double>>> bounds;
        for (const CsvRow& r : rows) {
            if (r.scenario == "private") continue;
            bounds[r.scenario + combo_suffix(r, many_tw, many_adoption, many_cap)]
                .emplace_back(r.r_max, bound_rel(r));
        }
        std::vector<std::pair<double, double>> best;
        for (auto& [label, pts] : bounds) {
            if (pts.size() > best.size()) best = pts;
        }
        std::sort(best.begin(), best.end());
        if (best.size() >= 2) {
            spec.series.push_back(PlotSeries{"best case", std::move(best), true, true});
        }
        if (!spec.series.empty()) {
            const std::string path = out_dir + "/parking_vs_rmax.svg";
            write_plot_svg(path, spec);
            written.push_back(path);
        }
    }

    {
        PlotSpec spec;
        spec.title = "Fleet size vs claim radius";
        spec.x_label = "r_max (m)";
        spec.y_label = "cars per participant";
        spec.series = rmax_series(&CsvRow::nc_rel, true);
        if (!spec.series.empty()) {
            const std::string path = out_dir + "/cars_vs_rmax.svg";
            write_plot_svg(path, spec);
            written.push_back(path);
        }
    }

    if (many_adoption) {
        PlotSpec spec;
        spec.title = "Parking demand vs adoption";
        spec.x_label = "adoption rate";
        spec.y_label = "spots relative to one-per-car-end";
        std::map<std::string, std::vector<std::pair<double, double>>> by_label;
        for (const CsvRow& r : rows) {
            if (r.scenario == "private") continue;
            std::string label = r.scenario + " r=" + fmt_g(r.r_max) + "m";
            if (many_tw) label += " t_w=" + fmt_g(r.t_w) + "s";
            by_label[label].emplace_back(r.adoption, r.np_rel_s1);
        }
        for (auto& [label, pts] : by_label) {
            std::sort(pts.begin(), pts.end());
            if (pts.size() < 2) continue;
            spec.series.push_back(PlotSeries{label, std::move(pts), true, false});
        }
        if (!spec.series.empty()) {
            const std::string path = out_dir + "/parking_vs_adoption.svg";
            write_plot_svg(path, spec);
            written.push_back(path);
        }
    }

    if (many_tw) {
        PlotSpec spec;
        spec.title = "Parking demand vs departure window";
        spec.x_label = "t_w (s)";
        spec.y_label = "spots relative to one-per-car-end";
        std::map<std::string, std::vector<std::pair<double, double>>> by_label;
        std::map<std::string, std::vector<std::pair<double, double>>> bound_by_label;
        for (const CsvRow& r : rows) {
            if (r.scenario == "private") continue;
            std::string label = r.scenario + " r=" + fmt_g(r.r_max) + "m";
            if (many_adoption) label += " adoption=" + fmt_g(r.adoption);
            by_label[label].emplace_back(r.t_w, r.np_rel_s1);
            bound_by_label[label].emplace_back(r.t_w, bound_rel(r));
        }
        for (auto& [label, pts] : by_label) {
            std::sort(pts.begin(), pts.end());
            if (pts.size() < 2) continue;
            spec.series.push_back(PlotSeries{label, std::move(pts), true, false});
            auto& bpts = bound_by_label[label];
            std::sort(bpts.begin(), bpts.end());
            spec.series.push_back(
                PlotSeries{"best case " + label, std::move(bpts), true, true});
        }
        if (!spec.series.empty()) {
            const std::string path = out_dir + "/parking_vs_tw.svg";
            write_plot_svg(path, spec);
            written.push_back(path);
        }
    }

    {
        PlotSpec spec;
        spec.title = "Extra travel vs parking savings";
        spec.x_label = "spots relative to one-per-car-end";
        spec.y_label = "extra / base distance";
        std::map<std::string, std::vector<std::pair<double, double>>> by_label;
        for (const CsvRow& r : rows) {
            if (r.scenario == "private") continue;
            by_label[r.scenario].emplace_back(r.np_rel_s1, r.extra_vmt_rel);
        }
        for (auto& [label, pts] : by_label) {
            std::sort(pts.begin(), pts.end());
            spec.series.push_back(PlotSeries{label, std::move(pts), false, false});
        }
        if (!spec.series.empty()) {
            const std::string path = out_dir + "/vmt_tradeoff.svg";
            write_plot_svg(path, spec);
            written.push_back(path);
        }
    }

    return written;
}

}  // namespace parksim

#include "uavaoi/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "uavaoi/errors.hpp"

namespace uavaoi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Comments may not contain "--".
std::string comment_safe(std::string s) {
    for (std::size_t i = s.find("--"); i != std::string::npos; i = s.find("--")) s.replace(i, 2, "- -");
    return s;
}

struct Frame {
    double x0, y0, w, h;       // pixel box
    double xmin, xmax, ymin, ymax;  // data box

    double px(double x) const { return x0 + (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5) * w; }
    double py(double y) const { return y0 + h - (ymax > ymin ? (y - ymin) / (ymax - ymin) : 0.5) * h; }
};

void pad_range(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double d = std::max(std::abs(lo) * 0.1, 1e-12);
        lo -= d;
        hi += d;
        return;
    }
    const double d = 0.05 * (hi - lo);
    lo -= d;
    hi += d;
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    os << "<rect x=\"" << f2(f.x0) << "\" y=\"" << f2(f.y0) << "\" width=\"" << f2(f.w) << "\" height=\"" << f2(f.h)
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << f2(f.x0 + f.w / 2) << "\" y=\"" << f2(f.y0 + f.h + 32)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"" << f2(f.x0 - 44) << "\" y=\"" << f2(f.y0 + f.h / 2) << "\" font-size=\"12\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 " << f2(f.x0 - 44) << ' ' << f2(f.y0 + f.h / 2) << ")\">" << escape(ylabel) << "</text>\n";
    auto tick = [&](double x, double y, const std::string& label, const char* anchor) {
        os << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-size=\"10\" text-anchor=\"" << anchor << "\">"
           << escape(label) << "</text>\n";
    };
    tick(f.x0, f.y0 + f.h + 14, short_num(f.xmin), "start");
    tick(f.x0 + f.w, f.y0 + f.h + 14, short_num(f.xmax), "end");
    tick(f.x0 - 4, f.y0 + f.h, short_num(f.ymin), "end");
    tick(f.x0 - 4, f.y0 + 10, short_num(f.ymax), "end");
}

std::string policy_color(const std::string& policy) {
    static const std::map<std::string, std::string> colors{
        {"dqn", "#d62728"}, {"ga", "#1f77b4"}, {"nn", "#2ca02c"}, {"rw", "#7f7f7f"}};
    auto it = colors.find(policy);
    return it == colors.end() ? "#000000" : it->second;
}

} // namespace

std::string render_trajectory_svg(const Scenario& scenario, const std::vector<TrajectoryRecord>& records,
                                  const std::string& title, const std::string& provenance) {
    if (records.empty()) throw ConfigError("cannot plot an empty episode log");
    const GridSpec& grid = scenario.grid;
    const double edge = (grid.half() + 0.5) * grid.cell_size_m;
    const Frame f{40, 40, 480, 480, -edge, edge, -edge, edge};

    std::vector<int> cluster_of(scenario.devices.size(), -1);
    for (std::size_t l = 0; l < scenario.assignment.members.size(); ++l)
        for (int id : scenario.assignment.members[l])
            for (std::size_t i = 0; i < scenario.devices.size(); ++i)
                if (scenario.devices[i].id == id) cluster_of[i] = static_cast<int>(l);

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"570\" viewBox=\"0 0 560 570\">\n";
    os << "<!-- " << comment_safe(provenance) << " -->\n";
    os << "<rect width=\"560\" height=\"570\" fill=\"white\"/>\n";
    os << "<text x=\"280\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">" << escape(title) << "</text>\n";

    const double cell_px = f.w / grid.cells_per_side;
    for (int i = 0; i <= grid.cells_per_side; ++i) {
        const double p = f.x0 + i * cell_px;
        os << "<line x1=\"" << f2(p) << "\" y1=\"" << f2(f.y0) << "\" x2=\"" << f2(p) << "\" y2=\"" << f2(f.y0 + f.h)
           << "\" stroke=\"#e0e0e0\"/>\n";
        os << "<line x1=\"" << f2(f.x0) << "\" y1=\"" << f2(p) << "\" x2=\"" << f2(f.x0 + f.w) << "\" y2=\"" << f2(p)
           << "\" stroke=\"#e0e0e0\"/>\n";
    }
    for (Cell d : grid.depots()) {
        const Vec2 c = grid.center(d);
        os << "<rect class=\"depot\" x=\"" << f2(f.px(c.x) - 8) << "\" y=\"" << f2(f.py(c.y) - 8)
           << "\" width=\"16\" height=\"16\" fill=\"#ffd54f\" stroke=\"#8d6e00\"/>\n";
    }
    os << "<polygon class=\"bs\" points=\"" << f2(f.px(0)) << ',' << f2(f.py(0) - 10) << ' ' << f2(f.px(0) - 9) << ','
       << f2(f.py(0) + 7) << ' ' << f2(f.px(0) + 9) << ',' << f2(f.py(0) + 7) << "\" fill=\"black\"/>\n";

    for (std::size_t i = 0; i < scenario.devices.size(); ++i) {
        const Vec2 p = scenario.devices[i].xy;
        const int l = cluster_of[i];
        os << "<circle class=\"device\" cx=\"" << f2(f.px(p.x)) << "\" cy=\"" << f2(f.py(p.y)) << "\" r=\"3.5\" fill=\""
           << (l < 0 ? "#000" : kPalette[static_cast<std::size_t>(l) % kPaletteSize]) << "\"/>\n";
    }
    for (std::size_t l = 0; l < scenario.assignment.centroids.size(); ++l) {
        const Vec2 c = scenario.assignment.centroids[l];
        const double x = f.px(c.x), y = f.py(c.y);
        os << "<path class=\"centroid\" d=\"M" << f2(x - 6) << ' ' << f2(y - 6) << " L" << f2(x + 6) << ' ' << f2(y + 6)
           << " M" << f2(x - 6) << ' ' << f2(y + 6) << " L" << f2(x + 6) << ' ' << f2(y - 6) << "\" stroke=\""
           << kPalette[l % kPaletteSize] << "\" stroke-width=\"2.5\"/>\n";
    }

    const int episode = records.front().episode;
    const std::size_t n_uav = records.front().from.size();
    static const char* uav_colors[] = {"#000000", "#6a1b9a", "#00695c", "#bf360c"};
    for (std::size_t u = 0; u < n_uav; ++u) {
        std::ostringstream pts;
        const Vec2 start = grid.center(records.front().from[u]);
        pts << f2(f.px(start.x)) << ',' << f2(f.py(start.y));
        for (const auto& r : records) {
            if (r.episode != episode) break;
            const Vec2 p = grid.center(r.to[u]);
            pts << ' ' << f2(f.px(p.x)) << ',' << f2(f.py(p.y));
        }
        os << "<polyline class=\"uav-path\" data-uav=\"" << u + 1 << "\" points=\"" << pts.str()
           << "\" fill=\"none\" stroke=\"" << uav_colors[u % 4] << "\" stroke-width=\"2\" stroke-opacity=\"0.7\"/>\n";
        os << "<circle class=\"uav-start\" cx=\"" << f2(f.px(start.x)) << "\" cy=\"" << f2(f.py(start.y))
           << "\" r=\"5\" fill=\"none\" stroke=\"" << uav_colors[u % 4] << "\" stroke-width=\"2\"/>\n";
    }
    os << "<text x=\"40\" y=\"550\" font-size=\"11\">" << scenario.devices.size() << " devices, "
       << scenario.assignment.centroids.size() << " clusters, " << n_uav << " UAV(s), " << records.size()
       << " slots</text>\n";
    os << "</svg>\n";
    return os.str();
}

namespace {

struct Series {
    std::vector<std::pair<double, double>> pts;
};

std::map<std::string, Series> curve_series(const json& sweep, const char* field) {
    std::map<std::string, Series> out;
    for (const auto& c : sweep.at("curves"))
        out[c.at("policy").get<std::string>()].pts.emplace_back(c.at("lambda").get<double>(), c.at(field).get<double>());
    for (auto& [name, s] : out) std::sort(s.pts.begin(), s.pts.end());
    return out;
}

void draw_panel(std::ostringstream& os, const Frame& f0, const std::map<std::string, Series>& series,
                const std::string& xlabel, const std::string& ylabel) {
    Frame f = f0;
    f.xmin = f.ymin = std::numeric_limits<double>::infinity();
    f.xmax = f.ymax = -std::numeric_limits<double>::infinity();
    for (const auto& [name, s] : series)
        for (auto [x, y] : s.pts) {
            f.xmin = std::min(f.xmin, x);
            f.xmax = std::max(f.xmax, x);
            f.ymin = std::min(f.ymin, y);
            f.ymax = std::max(f.ymax, y);
        }
    pad_range(f.xmin, f.xmax);
    pad_range(f.ymin, f.ymax);
    axes(os, f, xlabel, ylabel);
    for (const auto& [name, s] : series) {
        std::ostringstream pts;
        for (auto [x, y] : s.pts) pts << (pts.tellp() > 0 ? " " : "") << f2(f.px(x)) << ',' << f2(f.py(y));
        os << "<polyline class=\"series\" data-policy=\"" << name << "\" points=\"" << pts.str()
           << "\" fill=\"none\" stroke=\"" << policy_color(name) << "\" stroke-width=\"2\"/>\n";
        for (auto [x, y] : s.pts)
            os << "<circle cx=\"" << f2(f.px(x)) << "\" cy=\"" << f2(f.py(y)) << "\" r=\"3\" fill=\"" << policy_color(name)
               << "\"/>\n";
    }
}

void legend(std::ostringstream& os, const std::map<std::string, Series>& series, double x, double y) {
    for (const auto& [name, s] : series) {
        os << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y - 9) << "\" width=\"10\" height=\"10\" fill=\"" << policy_color(name)
           << "\"/><text x=\"" << f2(x + 14) << "\" y=\"" << f2(y) << "\" font-size=\"11\">" << escape(name) << "</text>\n";
        x += 60;
    }
}

std::string svg_open(int w, int h, const json& sweep) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<!-- " << comment_safe(sweep.value("provenance", json::object()).dump()) << " -->\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    return os.str();
}

} // namespace

std::string render_lambda_curves_svg(const json& sweep) {
    std::ostringstream os;
    os << svg_open(960, 340, sweep);
    const auto reward = curve_series(sweep, "accumulative_reward");
    draw_panel(os, {70, 30, 240, 240, 0, 0, 0, 0}, reward, "lambda", "accumulative reward");
    draw_panel(os, {390, 30, 240, 240, 0, 0, 0, 0}, curve_series(sweep, "ergodic_age"), "lambda", "ergodic age");
    draw_panel(os, {710, 30, 240, 240, 0, 0, 0, 0}, curve_series(sweep, "ergodic_power_w"), "lambda", "ergodic power (W)");
    legend(os, reward, 70, 330);
    os << "</svg>\n";
    return os.str();
}

std::string render_region_svg(const json& sweep) {
    std::ostringstream os;
    os << svg_open(420, 400, sweep);
    std::map<std::string, Series> series;
    for (const auto& c : sweep.at("curves"))
        series[c.at("policy").get<std::string>()].pts.emplace_back(c.at("ergodic_age").get<double>(),
                                                                     c.at("ergodic_power_w").get<double>());
    for (auto& [name, s] : series) {
        std::sort(s.pts.begin(), s.pts.end());
        s.pts.erase(std::unique(s.pts.begin(), s.pts.end()), s.pts.end());
    }
    draw_panel(os, {80, 30, 310, 300, 0, 0, 0, 0}, series, "ergodic age", "ergodic power (W)");
    legend(os, series, 80, 390);
    os << "</svg>\n";
    return os.str();
}

std::vector<fs::path> emit_plots(const fs::path& run_dir) {
    const Scenario scenario = load_scenario(run_dir / "scenario.json");

    std::vector<fs::path> logs;
    if (fs::is_directory(run_dir))
        for (const auto& entry : fs::directory_iterator(run_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("trajectory_", 0) == 0 && entry.path().extension() == ".jsonl") logs.push_back(entry.path());
        }
    std::sort(logs.begin(), logs.end());
    if (logs.empty()) throw ConfigError("no trajectory logs in " + run_dir.string());

    std::vector<std::pair<fs::path, std::string>> outputs;
    for (const auto& path : logs) {
        const TrajectoryFile file = read_trajectory(path);
        if (file.records.empty()) throw ConfigError("empty episode log " + path.string());
        fs::path svg = path;
        svg.replace_extension(".svg");
        outputs.emplace_back(svg, render_trajectory_svg(scenario, file.records, path.stem().string(), file.header.dump()));
    }
    const fs::path sweep_path = run_dir / "sweep.json";
    if (fs::exists(sweep_path)) {
        std::ifstream is(sweep_path);
        json sweep;
        try {
            sweep = json::parse(is);
        } catch (const json::exception& e) {
            throw ConfigError("sweep.json is not valid JSON: " + std::string(e.what()));
        }
        if (!sweep.contains("curves") || sweep.at("curves").empty()) throw ConfigError("sweep.json has no curve data");
        outputs.emplace_back(run_dir / "lambda_curves.svg", render_lambda_curves_svg(sweep));
        outputs.emplace_back(run_dir / "achievable_region.svg", render_region_svg(sweep));
    }

    std::vector<fs::path> written;
    for (const auto& [path, text] : outputs) {
        write_file_atomic(path, text);
        written.push_back(path);
    }
    return written;
}

} // namespace uavaoi

#include "gaspower/output.hpp"

#include "gaspower/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace gaspower {
namespace {

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCategory::io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCategory::io, "cannot write '" + path.string() + "'");
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const char* header, std::span<const double> a,
               std::span<const double> b) {
    auto out = open(path);
    out << header << '\n';
    for (std::size_t i = 0; i < a.size(); ++i) out << fmt(a[i]) << ',' << fmt(b[i]) << '\n';
    if (!out) throw Error(ErrorCategory::io, "write to '" + path.string() + "' failed");
}

std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '<') r += "&lt;";
        else if (c == '>') r += "&gt;";
        else if (c == '&') r += "&amp;";
        else r += c;
    }
    return r;
}

}  // namespace

std::string file_stem(const std::string& id) {
    std::string s = id;
    for (char& c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return s;
}

std::vector<std::filesystem::path> write_timeseries(std::span<const TimeSeriesOutput> outputs,
                                                    const std::filesystem::path& directory, bool svg) {
    if (outputs.empty()) throw Error(ErrorCategory::config, "no time series to write");
    std::set<std::string> ids;
    std::set<std::string> stems;
    for (const auto& o : outputs) {
        if (!ids.insert(o.id).second) throw Error(ErrorCategory::config, "duplicate quantity id '" + o.id + "'");
        if (!stems.insert(file_stem(o.id)).second) {
            throw Error(ErrorCategory::config, "quantity ids map to the same file name: '" + o.id + "'");
        }
        if (o.times.size() != o.values.size()) {
            throw Error(ErrorCategory::config, "series '" + o.id + "' has mismatched lengths");
        }
        for (std::size_t i = 1; i < o.times.size(); ++i) {
            if (!(o.times[i] > o.times[i - 1])) {
                throw Error(ErrorCategory::config, "series '" + o.id + "' times are not strictly increasing");
            }
        }
    }
    ensure_directory(directory);
    std::vector<std::filesystem::path> files;
    for (const auto& o : outputs) {
        const auto path = directory / (file_stem(o.id) + ".csv");
        write_csv(path, "t,value", o.times, o.values);
        files.push_back(path);
        if (svg) {
            const auto plot = directory / (file_stem(o.id) + ".svg");
            write_svg(plot, o.id, "t", o.id, o.times, o.values);
            files.push_back(plot);
        }
    }
    return files;
}

std::vector<std::filesystem::path> write_profiles(std::span<const ProfileOutput> profiles,
                                                  const std::filesystem::path& directory, bool svg) {
    std::set<std::string> ids;
    for (const auto& p : profiles) {
        if (!ids.insert(p.id).second) throw Error(ErrorCategory::config, "duplicate profile id '" + p.id + "'");
        if (p.x.size() != p.rho.size()) throw Error(ErrorCategory::config, "profile '" + p.id + "' has mismatched lengths");
    }
    ensure_directory(directory);
    std::vector<std::filesystem::path> files;
    for (const auto& p : profiles) {
        const auto path = directory / (file_stem(p.id) + ".csv");
        write_csv(path, "x,rho", p.x, p.rho);
        files.push_back(path);
        if (svg) {
            const auto plot = directory / (file_stem(p.id) + ".svg");
            write_svg(plot, p.id + " at t = " + fmt(p.time), "x", "rho", p.x, p.rho);
            files.push_back(plot);
        }
    }
    return files;
}

void write_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, std::span<const double> x, std::span<const double> y) {
    constexpr double W = 640, H = 400, L = 80, R = 20, T = 40, B = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!x.empty()) {
        const auto [xa, xb] = std::minmax_element(x.begin(), x.end());
        const auto [ya, yb] = std::minmax_element(y.begin(), y.end());
        x0 = *xa;
        x1 = *xb;
        y0 = *ya;
        y1 = *yb;
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) {
        const double pad = std::max(std::abs(y0) * 1e-3, 1e-12);
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

    auto out = open(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
        << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">" << fmt(x0) << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(x1)
        << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y0)
        << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y1)
        << "</text>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(xlabel) << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 " << H / 2
        << ")\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) out << px(x[i]) << ',' << py(y[i]) << ' ';
    out << "\"/>\n</svg>\n";
    if (!out) throw Error(ErrorCategory::io, "write to '" + path.string() + "' failed");
}

}  // namespace gaspower

#include "fms/common.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <system_error>

namespace fms {

std::size_t tail_start(std::size_t n) {
    std::size_t count = std::max<std::size_t>(5, n / 10);
    count = std::min(count, n);
    return n - count;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

std::vector<GridPair> unit_pair_grid(std::size_t n) {
    const std::vector<double> values = linspace(0.0, 1.0, n);
    std::vector<GridPair> grid;
    grid.reserve(n * n);
    for (double t : values) {
        for (double s : values) {
            grid.push_back({t, s});
        }
    }
    return grid;
}

std::vector<double> default_eps_grid() { return {0.5, 0.1, 0.01, 0.001}; }

std::vector<double> default_t_grid() { return {0.01, 0.1, 1.0, 10.0}; }

std::vector<double> nc_eps_grid() { return {0.1, 0.25, 0.5, 0.75}; }

std::string format_double(double x) {
    char buf[64];
    std::string best;
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        double parsed = 0.0;
        const std::string_view text(buf);
        auto [ptr, ec] = std::from_chars(buf, buf + text.size(), parsed);
        if (ec == std::errc() && ptr == buf + text.size() && parsed == x) {
            if (best.empty() || text.size() < best.size()) best = text;
        }
    }
    if (best.empty()) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        best = buf;
    }
    return best;
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw invalid_input("not a decimal number: '" + text + "'");
    }
    return value;
}

}  // namespace fms

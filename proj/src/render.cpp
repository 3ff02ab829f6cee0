#include "socnet/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace socnet {

namespace {

// viridis-style anchors, expanded to 256 levels by linear interpolation
constexpr unsigned char kAnchors[][3] = {
    {68, 1, 84},   {72, 40, 120},  {62, 74, 137},  {49, 104, 142},
    {38, 130, 142}, {31, 158, 137}, {53, 183, 121}, {109, 205, 89},
    {180, 222, 44}, {253, 231, 37},
};
constexpr int kAnchorCount = static_cast<int>(sizeof(kAnchors) / sizeof(kAnchors[0]));

void color_for(int level, unsigned char* rgb) {
    const double t = level / 255.0 * (kAnchorCount - 1);
    const int lo = std::min(kAnchorCount - 2, static_cast<int>(t));
    const double f = t - lo;
    for (int c = 0; c < 3; ++c) {
        const double v = (1.0 - f) * kAnchors[lo][c] + f * kAnchors[lo + 1][c];
        rgb[c] = static_cast<unsigned char>(std::lround(v));
    }
}

}  // namespace

std::vector<int> display_order(const Matrix& w, const CommunityAssignment* labels,
                               bool by_degree) {
    const int n = static_cast<int>(w.rows());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    if (by_degree) {
        for (int u = 0; u < n; ++u) {
            double s = 0.0;
            for (int v = 0; v < n; ++v) {
                if (v == u) continue;
                if (labels && labels->labels[static_cast<std::size_t>(v)] !=
                                  labels->labels[static_cast<std::size_t>(u)])
                    continue;  // within-community degree when labels are given
                s += w(u, v);
            }
            degree[static_cast<std::size_t>(u)] = s;
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const int la = labels ? labels->labels[static_cast<std::size_t>(a)] : 0;
        const int lb = labels ? labels->labels[static_cast<std::size_t>(b)] : 0;
        if (la != lb) return la < lb;
        if (by_degree) return degree[static_cast<std::size_t>(a)] <
                              degree[static_cast<std::size_t>(b)];
        return false;
    });
    return order;
}

std::vector<unsigned char> render_heatmap(const Matrix& w, const RenderOptions& opt) {
    const int n = static_cast<int>(w.rows());
    if (n == 0 || w.cols() != n) throw std::invalid_argument("render_heatmap: square matrix");
    if (opt.labels && static_cast<int>(opt.labels->labels.size()) != n)
        throw std::invalid_argument("render_heatmap: label count mismatch");
    const std::vector<int> order = display_order(w, opt.labels, opt.sort_by_degree);

    const double lo = w.minCoeff();
    const double hi = w.maxCoeff();
    const bool flat = !(hi > lo);
    auto level = [&](double v) {
        if (flat) return 128;
        return static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo)));
    };

    std::vector<unsigned char> out;
    char header[64];
    const int headerLen = std::snprintf(header, sizeof(header), "%s\n%d %d\n255\n",
                                        opt.color ? "P6" : "P5", n, n);
    out.insert(out.end(), header, header + headerLen);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int lv = level(w(order[static_cast<std::size_t>(r)],
                                   order[static_cast<std::size_t>(c)]));
            if (opt.color) {
                unsigned char rgb[3];
                color_for(lv, rgb);
                out.insert(out.end(), rgb, rgb + 3);
            } else {
                out.push_back(static_cast<unsigned char>(lv));
            }
        }
    }
    return out;
}

void write_heatmap(const Matrix& w, const RenderOptions& opt, const std::string& path) {
    const std::vector<unsigned char> bytes = render_heatmap(w, opt);
    std::ofstream outFile(path, std::ios::binary);
    if (!outFile) throw std::runtime_error("cannot open " + path);
    outFile.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    if (!outFile) throw std::runtime_error("write failed: " + path);
}

}  // namespace socnet

#pragma once

#include "socnet/model.hpp"

#include <string>
#include <vector>

namespace socnet {

// node display order: by community, then by within-community degree
// ascending; without labels, by whole-network degree. Ties keep node index
// order. by_degree=false keeps file order inside each community.
std::vector<int> display_order(const Matrix& w, const CommunityAssignment* labels,
                               bool by_degree);

struct RenderOptions {
    const CommunityAssignment* labels = nullptr;
    bool sort_by_degree = false;
    bool color = false;  // false: binary PGM grayscale; true: binary PPM
};

// heatmap bytes, linear over the full weight range; a flat matrix renders a
// uniform mid gray
std::vector<unsigned char> render_heatmap(const Matrix& w, const RenderOptions& opt);

void write_heatmap(const Matrix& w, const RenderOptions& opt, const std::string& path);

}  // namespace socnet

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace mobcon {

// Static 2-d kd-tree for radius queries. Built once over a point set; the
// query returns indices into that set, ascending. Boundary points (distance
// exactly r) are included, and pruning uses the same squared-distance
// comparison as the leaf test so results match a brute-force scan bit for bit.
class KdTree2D {
 public:
  explicit KdTree2D(std::vector<std::array<double, 2>> pts) : pts_(std::move(pts)) {
    order_.resize(pts_.size());
    for (uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    build(0, order_.size(), 0);
  }

  std::vector<uint32_t> radius_query(double x, double y, double r) const {
    std::vector<uint32_t> out;
    if (!order_.empty()) query(0, order_.size(), 0, x, y, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  size_t size() const { return pts_.size(); }

 private:
  void build(size_t lo, size_t hi, int axis) {
    if (hi - lo <= 1) return;
    const size_t mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](uint32_t a, uint32_t b) { return pts_[a][axis] < pts_[b][axis]; });
    build(lo, mid, 1 - axis);
    build(mid + 1, hi, 1 - axis);
  }

  void query(size_t lo, size_t hi, int axis, double x, double y, double r2,
             std::vector<uint32_t>& out) const {
    if (lo >= hi) return;
    const size_t mid = (lo + hi) / 2;
    const uint32_t idx = order_[mid];
    const double dx = pts_[idx][0] - x;
    const double dy = pts_[idx][1] - y;
    if (dx * dx + dy * dy <= r2) out.push_back(idx);
    const double q = axis == 0 ? x : y;
    const double split = pts_[idx][axis];
    const double d = q - split;
    // Descend the near side always; the far side only if the splitting
    // plane is within radius (inclusive, to keep boundary points).
    if (q < split) {
      query(lo, mid, 1 - axis, x, y, r2, out);
      if (d * d <= r2) query(mid + 1, hi, 1 - axis, x, y, r2, out);
    } else {
      query(mid + 1, hi, 1 - axis, x, y, r2, out);
      if (d * d <= r2) query(lo, mid, 1 - axis, x, y, r2, out);
    }
  }

  std::vector<std::array<double, 2>> pts_;
  std::vector<uint32_t> order_;
};

}  // namespace mobcon

// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/pointcloud.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <sstream>

#include "busnav/error.hpp"

namespace busnav::pointcloud {

namespace {
constexpr int kLeafSize = 16;

double coord(const Point3& p, int axis) {
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}
}  // namespace

KdTree::KdTree(const PointCloud& cloud) : pts_(cloud.points) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyInput, "kd-tree: empty point cloud");
  ids_.resize(pts_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = static_cast<int>(i);
  nodes_.reserve(2 * pts_.size() / kLeafSize + 8);
  root_ = build(0, static_cast<int>(ids_.size()));
}

int KdTree::build(int begin, int end) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[idx].begin = begin;
    nodes_[idx].end = end;
    return idx;
  }
  // Split on the widest axis at the median.
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
  for (int i = begin; i < end; ++i) {
    const Point3& p = pts_[ids_[i]];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], coord(p, a));
      hi[a] = std::max(hi[a], coord(p, a));
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                   [&](int a, int b) { return coord(pts_[a], axis) < coord(pts_[b], axis); });
  const double split = coord(pts_[ids_[mid]], axis);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[idx].axis = axis;
  nodes_[idx].split = split;
  nodes_[idx].left = left;
  nodes_[idx].right = right;
  return idx;
}

void KdTree::query(int node, const Point3& q, double r, bool strict,
                   std::vector<int>& out) const {
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    const double r2 = r * r;
    for (int i = n.begin; i < n.end; ++i) {
      const int id = ids_[i];
      const Vec3 d = pts_[id] - q;
      const double d2 = dot(d, d);
      if (strict ? d2 < r2 : d2 <= r2) out.push_back(id);
    }
    return;
  }
  const double qc = coord(q, n.axis);
  if (qc - r <= n.split) query(n.left, q, r, strict, out);
  if (qc + r >= n.split) query(n.right, q, r, strict, out);
}

std::vector<int> KdTree::radius_search(const Point3& q, double r, bool strict) const {
  std::vector<int> out;
  radius_search(q, r, strict, out);
  return out;
}

void KdTree::radius_search(const Point3& q, double r, bool strict,
                           std::vector<int>& out) const {
  out.clear();
  if (r < 0.0) throw Error(ErrorCode::InvalidParameter, "radius must be non-negative");
  query(root_, q, r, strict, out);
}

std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, double r_search,
                                       std::size_t min_size, std::size_t max_size) {
  if (r_search <= 0.0)
    throw Error(ErrorCode::InvalidParameter, "euclidean_cluster: r_search must be > 0");
  if (min_size < 1 || min_size > max_size)
    throw Error(ErrorCode::InvalidParameter, "euclidean_cluster: need 1 <= min_size <= max_size");
  std::vector<Cluster> clusters;
  if (cloud.empty()) return clusters;

  const KdTree tree(cloud);
  const int n = static_cast<int>(cloud.size());
  std::vector<char> visited(n, 0);
  std::vector<int> frontier, neigh, members;

  for (int seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    members.clear();
    frontier.clear();
    frontier.push_back(seed);
    visited[seed] = 1;
    while (!frontier.empty()) {
      const int i = frontier.back();
      frontier.pop_back();
      members.push_back(i);
      tree.radius_search(cloud.points[i], r_search, /*strict=*/true, neigh);
      for (int j : neigh) {
        if (!visited[j]) {
          visited[j] = 1;
          frontier.push_back(j);
        }
      }
    }
    if (members.size() >= min_size && members.size() <= max_size) {
      std::sort(members.begin(), members.end());
      clusters.push_back(Cluster{members});
    }
  }
  // BFS seeds run in id order, so clusters are already ordered by smallest id.
  return clusters;
}

namespace {

bool parse_double(std::string_view tok, double& out) {
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
  if (tok.empty()) return false;
  char buf[64];
  if (tok.size() >= sizeof(buf)) return false;
  std::copy(tok.begin(), tok.end(), buf);
  buf[tok.size()] = '\0';
  char* end = nullptr;
  out = std::strtod(buf, &end);
  return end == buf + tok.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void push_point(LoadResult& res, double x, double y, double z) {
  if (std::isfinite(x) && std::isfinite(y) && std::isfinite(z))
    res.cloud.points.push_back({x, y, z});
  else
    ++res.dropped_nonfinite;
}

}  // namespace

LoadResult load_cloud_csv(std::string_view text) {
  LoadResult res;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = text.find('\n', start);
    std::string_view line = text.substr(start, eol == std::string_view::npos ? text.size() - start : eol - start);
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) continue;

    const auto toks = split(line, ',');
    double x, y, z;
    const bool ok = toks.size() >= 3 && toks.size() <= 4 &&
                    parse_double(toks[0], x) && parse_double(toks[1], y) && parse_double(toks[2], z);
    if (!ok) {
      // A first line with non-numeric tokens is treated as a header; a
      // numeric line with the wrong arity is a malformed row.
      if (res.cloud.empty() && res.dropped_nonfinite == 0 && lineno == 1) {
        bool nonnumeric = false;
        for (const auto& t : toks) {
          double tmp;
          if (!parse_double(t, tmp)) nonnumeric = true;
        }
        if (nonnumeric) continue;
      }
      throw Error(ErrorCode::ParseError,
                  "csv: malformed row at line " + std::to_string(lineno));
    }
    if (toks.size() == 4) {
      double intensity;
      if (!parse_double(toks[3], intensity))
        throw Error(ErrorCode::ParseError,
                    "csv: malformed row at line " + std::to_string(lineno));
      // Intensity parsed and discarded.
    }
    push_point(res, x, y, z);
  }
  return res;
}

LoadResult load_cloud_pcd(std::string_view text) {
  LoadResult res;
  int ix = -1, iy = -1, iz = -1;
  int nfields = 0;
  bool in_data = false;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = text.find('\n', start);
    std::string_view line = text.substr(start, eol == std::string_view::npos ? text.size() - start : eol - start);
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (!in_data) {
      if (toks[0] == "FIELDS") {
        nfields = static_cast<int>(toks.size()) - 1;
        for (int i = 1; i < static_cast<int>(toks.size()); ++i) {
          if (toks[i] == "x") ix = i - 1;
          if (toks[i] == "y") iy = i - 1;
          if (toks[i] == "z") iz = i - 1;
        }
      } else if (toks[0] == "DATA") {
        if (toks.size() < 2 || toks[1] != "ascii")
          throw Error(ErrorCode::ParseError, "pcd: only DATA ascii is supported");
        if (ix < 0 || iy < 0 || iz < 0)
          throw Error(ErrorCode::ParseError, "pcd: FIELDS must contain x y z");
        in_data = true;
      }
      continue;
    }
    if (static_cast<int>(toks.size()) < nfields)
      throw Error(ErrorCode::ParseError,
                  "pcd: short data row at line " + std::to_string(lineno));
    double x, y, z;
    if (!parse_double(toks[ix], x) || !parse_double(toks[iy], y) || !parse_double(toks[iz], z))
      throw Error(ErrorCode::ParseError,
                  "pcd: malformed data row at line " + std::to_string(lineno));
    push_point(res, x, y, z);
  }
  if (!in_data && !text.empty())
    throw Error(ErrorCode::ParseError, "pcd: missing DATA section");
  return res;
}

LoadResult load_cloud_auto(std::string_view text) {
  // A PCD header mentions FIELDS before any data; fall back to CSV otherwise.
  const std::size_t probe = text.substr(0, 4096).find("FIELDS");
  if (probe != std::string_view::npos) return load_cloud_pcd(text);
  return load_cloud_csv(text);
}

}  // namespace busnav::pointcloud

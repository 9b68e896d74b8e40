// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "busnav/geometry.hpp"

namespace busnav::pointcloud {

// Unordered LiDAR scan; a point's index in `points` is its stable id.
struct PointCloud {
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Set of ids into the source cloud, sorted ascending, never empty.
struct Cluster {
  std::vector<int> point_ids;

  std::size_t size() const { return point_ids.size(); }
};

// Kd-tree over a cloud for exact radius queries.
class KdTree {
 public:
  // Throws EmptyInput on an empty cloud.
  explicit KdTree(const PointCloud& cloud);

  // Ids of points with Euclidean distance <= r from q (strict=false) or
  // < r (strict=true, the Euclidean-cluster neighbourhood rule).
  std::vector<int> radius_search(const Point3& q, double r, bool strict = false) const;
  void radius_search(const Point3& q, double r, bool strict, std::vector<int>& out) const;

 private:
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;
  };

  int build(int begin, int end);
  void query(int node, const Point3& q, double r, bool strict, std::vector<int>& out) const;

  std::vector<Point3> pts_;
  std::vector<int> ids_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Connected components of the graph joining points at distance < r_search,
// keeping components with min_size <= |C| <= max_size. Clusters are ordered
// by their smallest member id; ids within a cluster are sorted.
std::vector<Cluster> euclidean_cluster(const PointCloud& cloud, double r_search,
                                       std::size_t min_size, std::size_t max_size);

// Ingestion. Points with any non-finite coordinate are dropped and counted.
struct LoadResult {
  PointCloud cloud;
  std::size_t dropped_nonfinite = 0;
};

// CSV lines `x,y,z[,intensity]`, meters, optional header line.
LoadResult load_cloud_csv(std::string_view text);
// ASCII PCD subset; FIELDS must contain x y z, DATA must be ascii.
LoadResult load_cloud_pcd(std::string_view text);
// Dispatch on content (PCD header vs CSV).
LoadResult load_cloud_auto(std::string_view text);

}  // namespace busnav::pointcloud

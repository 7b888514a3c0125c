#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gol/types.hpp"

namespace gol {

struct MetricReport {
  double iou = 0.0;
  double overlap = 0.0;
  double dice = 0.0;
  double rvd = 0.0;
  double mhd = 0.0;
  bool degenerate = false;  // a or b below half a pixel on either ellipse
};

struct MetricAggregate {
  MetricReport mean;
  MetricReport stddev;  // sample standard deviation, 0 for a single record
  std::vector<std::pair<std::string, MetricReport>> per_record;
};

// IoU / Overlap / Dice / RVD by supersampled point-in-ellipse rasterization
// over the union bounding box; RVD uses analytic pi*a*b areas.
MetricReport region_metrics(const EllipseGeom& pred, const EllipseGeom& gt, int supersample = 4);

// Modified Hausdorff distance between boundaries sampled at n_points
// parameter values.
double mhd(const EllipseGeom& pred, const EllipseGeom& gt, int n_points = 720);

// All five metrics in one report.
MetricReport evaluate_pair(const EllipseGeom& pred, const EllipseGeom& gt, int supersample = 4,
                           int mhd_points = 720);

MetricAggregate evaluate_batch(const std::vector<std::pair<std::string, EllipseGeom>>& pred,
                               const std::vector<std::pair<std::string, EllipseGeom>>& gt,
                               int supersample = 4, int mhd_points = 720);

}  // namespace gol

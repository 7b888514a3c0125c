#include "gol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gol {

namespace {

struct InsideTest {
  // (p - c)^T A (p - c) <= 1
  double cx, cy;
  double a00, a01, a11;

  explicit InsideTest(const EllipseGeom& e) : cx(e.x0), cy(e.y0) {
    const double c = std::cos(e.theta), s = std::sin(e.theta);
    const double ia = 1.0 / (e.a * e.a), ib = 1.0 / (e.b * e.b);
    a00 = c * c * ia + s * s * ib;
    a11 = s * s * ia + c * c * ib;
    a01 = c * s * (ia - ib);
  }

  bool operator()(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return a00 * dx * dx + 2.0 * a01 * dx * dy + a11 * dy * dy <= 1.0;
  }
};

void bounds(const EllipseGeom& e, double& xmin, double& xmax, double& ymin, double& ymax) {
  const double c = std::cos(e.theta), s = std::sin(e.theta);
  const double ex = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
  const double ey = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
  xmin = e.x0 - ex;
  xmax = e.x0 + ex;
  ymin = e.y0 - ey;
  ymax = e.y0 + ey;
}

}  // namespace

MetricReport region_metrics(const EllipseGeom& pred, const EllipseGeom& gt, int supersample) {
  if (supersample < 1) {
    throw std::invalid_argument("region_metrics: supersample must be >= 1");
  }
  double px0, px1, py0, py1, gx0, gx1, gy0, gy1;
  bounds(pred, px0, px1, py0, py1);
  bounds(gt, gx0, gx1, gy0, gy1);
  const double x0 = std::min(px0, gx0), x1 = std::max(px1, gx1);
  const double y0 = std::min(py0, gy0), y1 = std::max(py1, gy1);

  const double step = 1.0 / supersample;
  const long nx = std::max(1L, std::lround(std::ceil((x1 - x0) / step)) + 1);
  const long ny = std::max(1L, std::lround(std::ceil((y1 - y0) / step)) + 1);

  const InsideTest in_p(pred), in_g(gt);
  long long count_p = 0, count_g = 0, count_i = 0;
  for (long iy = 0; iy < ny; ++iy) {
    const double y = y0 + (iy + 0.5) * step;
    for (long ix = 0; ix < nx; ++ix) {
      const double x = x0 + (ix + 0.5) * step;
      const bool p = in_p(x, y);
      const bool g = in_g(x, y);
      count_p += p;
      count_g += g;
      count_i += p && g;
    }
  }

  MetricReport r;
  const long long count_u = count_p + count_g - count_i;
  r.iou = count_u > 0 ? static_cast<double>(count_i) / count_u : 0.0;
  const long long mn = std::min(count_p, count_g);
  r.overlap = mn > 0 ? static_cast<double>(count_i) / mn : 0.0;
  r.dice = (count_p + count_g) > 0 ? 2.0 * count_i / static_cast<double>(count_p + count_g) : 0.0;
  const double area_p = M_PI * pred.a * pred.b;
  const double area_g = M_PI * gt.a * gt.b;
  r.rvd = std::abs(area_p - area_g) / area_g;
  r.degenerate = pred.a < 0.5 || pred.b < 0.5 || gt.a < 0.5 || gt.b < 0.5;
  return r;
}

double mhd(const EllipseGeom& pred, const EllipseGeom& gt, int n_points) {
  if (n_points < 16) {
    throw std::invalid_argument("mhd: need at least 16 boundary points");
  }
  auto boundary = [n_points](const EllipseGeom& e) {
    std::vector<Eigen::Vector2d> pts(n_points);
    const double c = std::cos(e.theta), s = std::sin(e.theta);
    for (int k = 0; k < n_points; ++k) {
      const double t = 2.0 * M_PI * k / n_points;
      const double u = e.a * std::cos(t), v = e.b * std::sin(t);
      pts[k] = Eigen::Vector2d(e.x0 + c * u - s * v, e.y0 + s * u + c * v);
    }
    return pts;
  };
  const auto bp = boundary(pred);
  const auto bg = boundary(gt);
  auto directed = [](const std::vector<Eigen::Vector2d>& from,
                     const std::vector<Eigen::Vector2d>& to) {
    double acc = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        best = std::min(best, (p - q).squaredNorm());
      }
      acc += std::sqrt(best);
    }
    return acc / from.size();
  };
  return std::max(directed(bp, bg), directed(bg, bp));
}

MetricReport evaluate_pair(const EllipseGeom& pred, const EllipseGeom& gt, int supersample,
                           int mhd_points) {
  MetricReport r = region_metrics(pred, gt, supersample);
  r.mhd = mhd(pred, gt, mhd_points);
  return r;
}

MetricAggregate evaluate_batch(const std::vector<std::pair<std::string, EllipseGeom>>& pred,
                               const std::vector<std::pair<std::string, EllipseGeom>>& gt,
                               int supersample, int mhd_points) {
  std::vector<std::string> missing;
  MetricAggregate agg;
  for (const auto& [id, pe] : pred) {
    auto it = std::find_if(gt.begin(), gt.end(), [&](const auto& g) { return g.first == id; });
    if (it == gt.end()) {
      missing.push_back(id);
      continue;
    }
    agg.per_record.emplace_back(id, evaluate_pair(pe, it->second, supersample, mhd_points));
  }
  for (const auto& [id, ge] : gt) {
    if (std::none_of(pred.begin(), pred.end(), [&](const auto& p) { return p.first == id; })) {
      missing.push_back(id);
    }
  }
  if (!missing.empty()) {
    std::ostringstream oss;
    oss << "evaluate_batch: unmatched record ids:";
    for (const auto& id : missing) oss << " " << id;
    throw std::invalid_argument(oss.str());
  }

  const auto fields = {&MetricReport::iou, &MetricReport::overlap, &MetricReport::dice,
                       &MetricReport::rvd, &MetricReport::mhd};
  const double n = static_cast<double>(agg.per_record.size());
  for (auto f : fields) {
    double mean = 0.0;
    for (const auto& [id, r] : agg.per_record) mean += r.*f;
    mean = n > 0 ? mean / n : 0.0;
    double var = 0.0;
    for (const auto& [id, r] : agg.per_record) var += (r.*f - mean) * (r.*f - mean);
    agg.mean.*f = mean;
    agg.stddev.*f = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  }
  return agg;
}

}  // namespace gol

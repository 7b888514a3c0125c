#include "gol/losses.hpp"

#include <cmath>

#include "gol/conic_geometry.hpp"

namespace gol {

namespace {

constexpr double kLogFloor = 1e-12;  // floor inside logs only

void require_pd(const Eigen::Matrix2d& sigma, const char* who) {
  double l1, l2;
  eig2x2_sym(sigma, l1, l2);
  if (l2 <= 0.0) {
    throw std::invalid_argument(std::string(who) + ": covariance not positive-definite");
  }
}

void require_same_grid(const HeatmapGrid& a, const HeatmapGrid& b, const char* who) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument(std::string(who) + ": heatmap dimension mismatch");
  }
}

}  // namespace

Eigen::Matrix2d spd_sqrt_2x2(const Eigen::Matrix2d& m) {
  require_pd(m, "spd_sqrt_2x2");
  const double det = m.determinant();
  const double s = std::sqrt(det);
  const double t = std::sqrt(m.trace() + 2.0 * s);
  return (m + s * Eigen::Matrix2d::Identity()) / t;
}

double wasserstein(const GaussianParams& pred, const GaussianParams& gt, ParamGradient* grad) {
  if (pred.frame != gt.frame) {
    throw std::invalid_argument("wasserstein: frame mismatch");
  }
  require_pd(pred.sigma, "wasserstein");
  require_pd(gt.sigma, "wasserstein");

  const Eigen::Vector2d dmu = pred.mu - gt.mu;
  const double pxx = pred.sigma(0, 0), pyy = pred.sigma(1, 1), pxy = pred.sigma(0, 1);
  const double gxx = gt.sigma(0, 0), gyy = gt.sigma(1, 1), gxy = gt.sigma(0, 1);
  const double det_p = pxx * pyy - pxy * pxy;
  const double det_g = gxx * gyy - gxy * gxy;
  // tr((Sg^1/2 Sp Sg^1/2)^1/2) = sqrt(tr(Sp Sg) + 2 sqrt(det Sp det Sg)) for 2x2 SPD.
  const double cross = pxx * gxx + pyy * gyy + 2.0 * pxy * gxy;
  const double root_dets = std::sqrt(det_p * det_g);
  const double s = cross + 2.0 * root_dets;
  const double sqrt_s = std::sqrt(s);
  const double value = dmu.squaredNorm() + pred.sigma.trace() + gt.sigma.trace() - 2.0 * sqrt_s;

  if (grad != nullptr) {
    const double ratio = std::sqrt(det_g / det_p);
    (*grad)(0) = 2.0 * dmu(0);
    (*grad)(1) = 2.0 * dmu(1);
    (*grad)(2) = 1.0 - (gxx + ratio * pyy) / sqrt_s;
    (*grad)(3) = 1.0 - (gyy + ratio * pxx) / sqrt_s;
    (*grad)(4) = -(2.0 * gxy - 2.0 * ratio * pxy) / sqrt_s;
  }
  return value;
}

double kl_heatmaps(const HeatmapGrid& d1, const HeatmapGrid& d2) {
  require_same_grid(d1, d2, "kl_heatmaps");
  double acc = 0.0;
  for (int i = 0; i < d1.height; ++i) {
    for (int j = 0; j < d1.width; ++j) {
      const double p = d1.values(i, j);
      if (p <= 0.0) continue;  // 0 log(0/q) = 0
      const double q = d2.values(i, j);
      acc += p * (std::log(std::max(p, kLogFloor)) - std::log(std::max(q, kLogFloor)));
    }
  }
  return acc;
}

double js_heatmaps(const HeatmapGrid& pred, const HeatmapGrid& gt, Eigen::ArrayXXd* grad) {
  require_same_grid(pred, gt, "js_heatmaps");
  HeatmapGrid m;
  m.width = pred.width;
  m.height = pred.height;
  m.values = 0.5 * (pred.values + gt.values);
  const double value = 0.5 * kl_heatmaps(pred, m) + 0.5 * kl_heatmaps(gt, m);
  if (grad != nullptr) {
    grad->resize(pred.height, pred.width);
    for (int i = 0; i < pred.height; ++i) {
      for (int j = 0; j < pred.width; ++j) {
        const double p = std::max(pred.values(i, j), kLogFloor);
        const double mm = std::max(m.values(i, j), kLogFloor);
        (*grad)(i, j) = 0.5 * (std::log(p) - std::log(mm));
      }
    }
  }
  return value;
}

LossValue total_loss(const LogitGrid& logits, const GaussianParams& gt_normalized,
                     const HeatmapGrid& gt_heatmap, double lambda, Eigen::ArrayXXd* grad_logits,
                     LossVariant variant) {
  if (lambda < 0.0) {
    throw std::invalid_argument("total_loss: lambda must be non-negative");
  }
  if (gt_normalized.frame != Frame::Normalized) {
    throw std::invalid_argument("total_loss: label parameters must be in the normalized frame");
  }
  const HeatmapGrid z = softmax_normalize(logits);
  const bool use_w = variant != LossVariant::JensenShannon;
  const bool use_js =
      variant == LossVariant::JensenShannon || (variant == LossVariant::Combined && lambda > 0.0);

  LossValue out;
  // Keep total == wasserstein_term + lambda * js_term for every variant.
  out.lambda = (variant == LossVariant::Combined)      ? lambda
               : (variant == LossVariant::JensenShannon) ? 1.0
                                                         : 0.0;
  Eigen::ArrayXXd grad_z = Eigen::ArrayXXd::Zero(z.height, z.width);

  if (use_w) {
    const GaussianParams extracted = edsnt_extract(z);
    ParamGradient w_grad;
    out.wasserstein_term = wasserstein(extracted, gt_normalized, &w_grad);
    if (grad_logits != nullptr) {
      grad_z += edsnt_backward(z, w_grad);
    }
  }
  if (use_js) {
    require_same_grid(z, gt_heatmap, "total_loss");
    Eigen::ArrayXXd js_grad;
    const double weight = (variant == LossVariant::JensenShannon) ? 1.0 : lambda;
    out.js_term = js_heatmaps(z, gt_heatmap, grad_logits != nullptr ? &js_grad : nullptr);
    if (grad_logits != nullptr) {
      grad_z += weight * js_grad;
    }
  }

  switch (variant) {
    case LossVariant::Wasserstein:
      out.total = out.wasserstein_term;
      break;
    case LossVariant::JensenShannon:
      out.total = out.js_term;
      break;
    case LossVariant::Combined:
      out.total = out.wasserstein_term + lambda * out.js_term;
      break;
  }
  if (grad_logits != nullptr) {
    *grad_logits = softmax_backward(z, grad_z);
  }
  return out;
}

}  // namespace gol

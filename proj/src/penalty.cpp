#include "spge/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spge {

Piece piece_from_label(int label) {
  switch (label) {
    case 1:
      return Piece::Flat;
    case 2:
      return Piece::Rising;
    case 3:
      return Piece::Falling;
    default:
      throw std::invalid_argument("piece label must be 1, 2 or 3, got " +
                                  std::to_string(label));
  }
}

BoxConstraint::BoxConstraint(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("box: lower and upper have different lengths");
  }
  for (Index i = 0; i < lower_.size(); ++i) {
    const double lo = lower_[i];
    const double hi = upper_[i];
    if (std::isnan(lo) || std::isnan(hi)) {
      throw std::invalid_argument("box: NaN bound at index " + std::to_string(i));
    }
    if (!(lo <= 0.0 && 0.0 <= hi)) {
      throw std::invalid_argument("box: bounds must satisfy lower <= 0 <= upper at index " +
                                  std::to_string(i));
    }
    if (!(lo < hi)) {
      throw std::invalid_argument("box: degenerate bounds (lower == upper) at index " +
                                  std::to_string(i));
    }
  }
}

BoxConstraint BoxConstraint::uniform(Index n, double lo, double hi) {
  return BoxConstraint(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

Vector BoxConstraint::project(const Vector& x) const {
  if (x.size() != size()) {
    throw std::invalid_argument("box: dimension mismatch in project");
  }
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool BoxConstraint::contains(const Vector& x, double tol) const {
  if (x.size() != size()) return false;
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] - tol && x[i] <= upper_[i] + tol)) return false;
  }
  return true;
}

BoxConstraint BoxConstraint::padded(Index extra, double lo, double hi) const {
  Vector lower(size() + extra);
  Vector upper(size() + extra);
  lower << lower_, Vector::Constant(extra, lo);
  upper << upper_, Vector::Constant(extra, hi);
  return BoxConstraint(std::move(lower), std::move(upper));
}

CappedL1Penalty::CappedL1Penalty(double lambda, double v) : lambda_(lambda), v_(v) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("penalty: lambda must be positive and finite");
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("penalty: v must be positive and finite");
  }
}

double CappedL1Penalty::phi_sum(const Vector& x) const {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += phi(x[i], v_);
  return s;
}

bool CappedL1Penalty::satisfies_cap_condition(double lf) const {
  return lf > 0.0 && v_ < lambda_ / lf;
}

double phi(double t, double v) { return std::min(1.0, std::abs(t) / v); }

double theta(Piece piece, double t, double v) {
  switch (piece) {
    case Piece::Flat:
      return 0.0;
    case Piece::Rising:
      return t / v - 1.0;
    case Piece::Falling:
      return -t / v - 1.0;
  }
  throw std::invalid_argument("theta: invalid piece");
}

Piece select_piece(double t, double v) {
  if (t >= v) return Piece::Rising;
  if (t <= -v) return Piece::Falling;
  return Piece::Flat;
}

DVector d_select(const Vector& x, double v) {
  DVector d(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) d[static_cast<std::size_t>(i)] = select_piece(x[i], v);
  return d;
}

double phi_d(const Vector& x, const DVector& d, double v) {
  if (static_cast<std::size_t>(x.size()) != d.size()) {
    throw std::invalid_argument("phi_d: length mismatch between x and d");
  }
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    s += std::abs(x[i]) / v - theta(d[static_cast<std::size_t>(i)], x[i], v);
  }
  return s;
}

double prox_capped_scalar(double w, Piece d, double tau, double v, double lower,
                          double upper) {
  const double thr = tau / v;
  double shifted = w;
  if (d == Piece::Rising) {
    shifted = w + thr;
  } else if (d == Piece::Falling) {
    shifted = w - thr;
  }
  double h = 0.0;
  if (shifted > thr) {
    h = shifted - thr;
  } else if (shifted < -thr) {
    h = shifted + thr;
  }
  return std::min(std::max(lower, h), upper);
}

Vector prox_capped_piece(const Vector& w, const DVector& d, double tau, double v,
                         const BoxConstraint& box) {
  if (!(tau > 0.0)) throw std::invalid_argument("prox: tau must be positive");
  if (!(v > 0.0)) throw std::invalid_argument("prox: v must be positive");
  if (static_cast<std::size_t>(w.size()) != d.size() || w.size() != box.size()) {
    throw std::invalid_argument("prox: dimension mismatch");
  }
  Vector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    out[i] = prox_capped_scalar(w[i], d[static_cast<std::size_t>(i)], tau, v,
                                box.lower()[i], box.upper()[i]);
  }
  return out;
}

Index support_size(const Vector& x) {
  Index n = 0;
  for (Index i = 0; i < x.size(); ++i) n += (x[i] != 0.0);
  return n;
}

}  // namespace spge

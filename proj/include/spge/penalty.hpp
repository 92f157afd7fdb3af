#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace spge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Label of the active concave piece of the capped-l1 DC decomposition.
///   Flat    (1): theta = 0
///   Rising  (2): theta = t/v - 1
///   Falling (3): theta = -t/v - 1
enum class Piece : std::uint8_t { Flat = 1, Rising = 2, Falling = 3 };

using DVector = std::vector<Piece>;

/// Converts an integer label to a piece; throws std::invalid_argument
/// unless label is 1, 2 or 3.
Piece piece_from_label(int label);

inline int label_of(Piece p) { return static_cast<int>(p); }

/// Feasible box {x : lower <= x <= upper} with lower <= 0 <= upper and
/// lower < upper coordinatewise. Infinite bounds are allowed.
class BoxConstraint {
 public:
  BoxConstraint(Vector lower, Vector upper);

  /// [lo, hi]^n
  static BoxConstraint uniform(Index n, double lo, double hi);

  Index size() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const;

  /// Copy of the box with `extra` unbounded-above, zero-below coordinates
  /// appended (used when padding a problem with inert coordinates).
  BoxConstraint padded(Index extra, double lo, double hi) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// lambda * sum_i min{1, |x_i| / v}
class CappedL1Penalty {
 public:
  CappedL1Penalty(double lambda, double v);

  double lambda() const { return lambda_; }
  double v() const { return v_; }

  /// Phi(x) = sum_i phi(x_i), without the lambda weight.
  double phi_sum(const Vector& x) const;
  /// lambda * Phi(x)
  double value(const Vector& x) const { return lambda_ * phi_sum(x); }

  /// v < lambda / lf, the cap condition that makes every lifted stationary
  /// point satisfy the lower-bound property.
  bool satisfies_cap_condition(double lf) const;

 private:
  double lambda_;
  double v_;
};

/// min{1, |t| / v}
double phi(double t, double v);

/// The concave pieces theta_1, theta_2, theta_3.
double theta(Piece piece, double t, double v);

/// Per-coordinate selection: Flat iff |x_i| < v, Rising iff x_i >= v,
/// Falling iff x_i <= -v.
DVector d_select(const Vector& x, double v);

/// Label selection for a single scalar, same rule as d_select.
Piece select_piece(double t, double v);

/// Phi^d(x) = sum_i (|x_i|/v - theta_{d_i}(x_i)). Never below Phi(x);
/// equal when d = d_select(x, v).
double phi_d(const Vector& x, const DVector& d, double v);

/// Closed-form minimiser of tau * Phi^d(x) + 0.5 * ||x - w||^2 over the box.
/// Shift by the piece slope, soft-threshold at tau/v, clamp.
Vector prox_capped_piece(const Vector& w, const DVector& d, double tau, double v,
                         const BoxConstraint& box);

/// Scalar form of prox_capped_piece for one coordinate.
double prox_capped_scalar(double w, Piece d, double tau, double v, double lower,
                          double upper);

/// Number of nonzero coordinates.
Index support_size(const Vector& x);

}  // namespace spge

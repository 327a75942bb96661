#pragma once

#include <cstddef>
#include <vector>

namespace pogd {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
double distance(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

/// Throws std::invalid_argument when v contains NaN or infinity.
void require_finite(const Vector& v, const char* what);
void require_dimension(const Vector& v, std::size_t dim, const char* what);

/// Clamp to [lo, hi]; shared by box projection and the per-coordinate
/// engine so both take bit-identical decisions.
inline double clamp_coordinate(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

// Extension point for decision sets with a custom projection. The library
// ships balls and hyper-rectangles (FeasibleSet below); anything else can be
// plugged in behind this interface.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;
  virtual std::size_t dimension() const = 0;
  virtual double diameter() const = 0;
  virtual Vector coordinate_diameters() const = 0;
  virtual Vector project(const Vector& point) const = 0;
};

// Euclidean ball or axis-aligned box, both with closed-form projection.
//
// Boundary comparisons leave a few ulps of slack so projecting twice is
// exactly idempotent; the slack is far below the 1e-12 membership tolerance
// used by the test properties.
class FeasibleSet final : public ConvexSet {
 public:
  enum class Kind { kBall, kBox };

  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet box(Vector lower, Vector upper);

  Kind kind() const { return kind_; }
  bool is_box() const { return kind_ == Kind::kBox; }
  std::size_t dimension() const override;
  double diameter() const override;
  Vector coordinate_diameters() const override;
  Vector project(const Vector& point) const override;

  bool contains(const Vector& point, double slack = 1e-12) const;

  /// argmin over the set of direction^T w (closed form). Zero direction
  /// components fall back to the center/midpoint.
  Vector linear_minimizer(const Vector& direction) const;

  /// Ball center, or box midpoint; the default starting decision.
  Vector midpoint() const;

  const Vector& center() const;
  double radius() const;
  const Vector& lower() const;
  const Vector& upper() const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::kBall;
  Vector a_;  // center | lower
  Vector b_;  // unused | upper
  double radius_ = 0.0;
};

/// Sum of successive Euclidean distances; 0 for a single point.
double path_variation(const std::vector<Vector>& points);

/// Per-coordinate total variation, sum_t |w_{t+1,i} - w_{t,i}|.
std::vector<double> coordinate_path_variations(const std::vector<Vector>& points);

// A comparator decision sequence together with the budget that its total
// variation is certified against.
struct ComparatorPath {
  std::vector<Vector> points;
  double budget = 0.0;

  std::size_t length() const { return points.size(); }
};

/// Validates membership (each point moves < 1e-9 * diameter under
/// projection), the variation budget, and budget <= diameter * (T - 1).
ComparatorPath make_comparator_path(const FeasibleSet& set,
                                    std::vector<Vector> points, double budget);

}  // namespace pogd

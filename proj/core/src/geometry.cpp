#include "pogd/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pogd {

namespace {

// Relative slack for "is this point already inside" checks on the ball.
// Wide enough that a freshly projected point always counts as inside, which
// makes projection exactly idempotent.
constexpr double kBoundarySlack = 128.0 * std::numeric_limits<double>::epsilon();

}  // namespace

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

double distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_finite(const Vector& v, const char* what) {
  if (!all_finite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

void require_dimension(const Vector& v, std::size_t dim, const char* what) {
  if (v.size() != dim) {
    std::ostringstream os;
    os << what << ": dimension mismatch, got " << v.size() << ", expected "
       << dim;
    throw std::invalid_argument(os.str());
  }
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require_finite(center, "ball center");
  if (center.empty()) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball: radius must be positive and finite");
  }
  FeasibleSet s;
  s.kind_ = Kind::kBall;
  s.a_ = std::move(center);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if (lower.empty()) throw std::invalid_argument("box: dimension must be >= 1");
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("box: lower/upper dimension mismatch");
  }
  bool any_width = false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("box: lower exceeds upper");
    }
    if (lower[i] < upper[i]) any_width = true;
  }
  if (!any_width) {
    throw std::invalid_argument("box: at least one coordinate must have width");
  }
  FeasibleSet s;
  s.kind_ = Kind::kBox;
  s.a_ = std::move(lower);
  s.b_ = std::move(upper);
  return s;
}

std::size_t FeasibleSet::dimension() const { return a_.size(); }

double FeasibleSet::diameter() const {
  if (kind_ == Kind::kBall) return 2.0 * radius_;
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const double w = b_[i] - a_[i];
    s += w * w;
  }
  return std::sqrt(s);
}

Vector FeasibleSet::coordinate_diameters() const {
  Vector d(dimension());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = kind_ == Kind::kBall ? 2.0 * radius_ : b_[i] - a_[i];
  }
  return d;
}

Vector FeasibleSet::project(const Vector& point) const {
  require_dimension(point, dimension(), "project");
  require_finite(point, "project");
  if (kind_ == Kind::kBox) {
    Vector out(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
      out[i] = clamp_coordinate(point[i], a_[i], b_[i]);
    }
    return out;
  }
  const double dist = distance(point, a_);
  if (dist <= radius_ * (1.0 + kBoundarySlack)) return point;
  const double scale = radius_ / dist;
  Vector out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    out[i] = a_[i] + (point[i] - a_[i]) * scale;
  }
  return out;
}

bool FeasibleSet::contains(const Vector& point, double slack) const {
  if (point.size() != dimension() || !all_finite(point)) return false;
  if (kind_ == Kind::kBox) {
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (point[i] < a_[i] - slack || point[i] > b_[i] + slack) return false;
    }
    return true;
  }
  return distance(point, a_) <= radius_ + slack;
}

Vector FeasibleSet::linear_minimizer(const Vector& direction) const {
  require_dimension(direction, dimension(), "linear_minimizer");
  require_finite(direction, "linear_minimizer");
  if (kind_ == Kind::kBox) {
    Vector out(direction.size());
    for (std::size_t i = 0; i < direction.size(); ++i) {
      if (direction[i] > 0.0) {
        out[i] = a_[i];
      } else if (direction[i] < 0.0) {
        out[i] = b_[i];
      } else {
        out[i] = 0.5 * (a_[i] + b_[i]);
      }
    }
    return out;
  }
  const double len = norm(direction);
  if (len == 0.0) return a_;
  Vector out(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) {
    out[i] = a_[i] - radius_ * direction[i] / len;
  }
  return out;
}

Vector FeasibleSet::midpoint() const {
  if (kind_ == Kind::kBall) return a_;
  Vector out(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) out[i] = 0.5 * (a_[i] + b_[i]);
  return out;
}

const Vector& FeasibleSet::center() const {
  if (kind_ != Kind::kBall) throw std::logic_error("center: not a ball");
  return a_;
}

double FeasibleSet::radius() const {
  if (kind_ != Kind::kBall) throw std::logic_error("radius: not a ball");
  return radius_;
}

const Vector& FeasibleSet::lower() const {
  if (kind_ != Kind::kBox) throw std::logic_error("lower: not a box");
  return a_;
}

const Vector& FeasibleSet::upper() const {
  if (kind_ != Kind::kBox) throw std::logic_error("upper: not a box");
  return b_;
}

double path_variation(const std::vector<Vector>& points) {
  if (points.empty()) {
    throw std::invalid_argument("path_variation: empty sequence");
  }
  const std::size_t dim = points.front().size();
  double total = 0.0;
  for (std::size_t t = 0; t < points.size(); ++t) {
    require_dimension(points[t], dim, "path_variation");
    require_finite(points[t], "path_variation");
    if (t > 0) total += distance(points[t], points[t - 1]);
  }
  return total;
}

std::vector<double> coordinate_path_variations(const std::vector<Vector>& points) {
  if (points.empty()) {
    throw std::invalid_argument("coordinate_path_variations: empty sequence");
  }
  const std::size_t dim = points.front().size();
  std::vector<double> totals(dim, 0.0);
  for (std::size_t t = 1; t < points.size(); ++t) {
    require_dimension(points[t], dim, "coordinate_path_variations");
    for (std::size_t i = 0; i < dim; ++i) {
      totals[i] += std::abs(points[t][i] - points[t - 1][i]);
    }
  }
  return totals;
}

ComparatorPath make_comparator_path(const FeasibleSet& set,
                                    std::vector<Vector> points, double budget) {
  if (points.empty()) {
    throw std::invalid_argument("comparator path: empty sequence");
  }
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("comparator path: budget must be >= 0");
  }
  const double d = set.diameter();
  for (const Vector& p : points) {
    require_dimension(p, set.dimension(), "comparator point");
    require_finite(p, "comparator point");
    if (distance(p, set.project(p)) >= 1e-9 * d) {
      throw std::invalid_argument("comparator path: point outside the set");
    }
  }
  const double variation = path_variation(points);
  if (variation > budget + 1e-9 * (1.0 + budget)) {
    throw std::invalid_argument("comparator path: variation exceeds budget");
  }
  const double cap = d * static_cast<double>(points.size() - 1);
  if (budget > cap + 1e-9 * (1.0 + cap)) {
    throw std::invalid_argument(
        "comparator path: budget exceeds diameter * (T - 1)");
  }
  return ComparatorPath{std::move(points), budget};
}

}  // namespace pogd

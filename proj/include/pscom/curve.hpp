#ifndef PSCOM_CURVE_HPP
#define PSCOM_CURVE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pscom/model.hpp"

namespace pscom {

struct Knot {
  double eta;
  double load;

  bool operator==(const Knot&) const = default;
};

/// One linear piece g(eta) = slope * eta + intercept on [eta_lo, eta_hi].
struct Segment {
  double slope;
  double intercept;
  double eta_lo;
  double eta_hi;
};

enum class CurveError {
  TooFewKnots,
  NonFinite,
  FirstKnotNotAnchor,
  EtaNotDescending,
  EtaOutOfRange,
  LoadNotIncreasing,
  SlopeMagnitudeDecreasing,
};

class CurveValidationError : public std::invalid_argument {
 public:
  CurveValidationError(CurveError kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  CurveError kind() const { return kind_; }

 private:
  CurveError kind_;
};

/// Piecewise-linear computation load over the compression ratio, stored as
/// knots descending in eta from (1, 0). Segment s spans [D_s, D_{s-1}).
class CompLoadCurve {
 public:
  /// Validates and derives the segments. Throws CurveValidationError.
  static CompLoadCurve from_knots(std::vector<Knot> knots);

  /// Repository default: {(1,0),(0.8,100),(0.6,300),(0.4,700),(0.2,1500)}.
  static CompLoadCurve default_curve();

  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t segment_count() const { return segments_.size(); }

  /// Smallest admissible compression ratio D_S.
  double eta_min() const { return knots_.back().eta; }

  bool in_domain(double eta) const { return eta >= eta_min() && eta <= 1.0; }

  /// g(eta). Throws std::domain_error outside [D_S, 1].
  double load(double eta) const;

  /// Knot ratios {1, D_1, ..., D_S}, strictly decreasing.
  std::vector<double> breakpoints() const;

  bool operator==(const CompLoadCurve& other) const { return knots_ == other.knots_; }

 private:
  std::vector<Knot> knots_;
  std::vector<Segment> segments_;
};

inline CompLoadCurve validate_curve(std::vector<Knot> knots) {
  return CompLoadCurve::from_knots(std::move(knots));
}

inline double comp_load(const CompLoadCurve& curve, double eta) { return curve.load(eta); }

inline double comp_power(const CompLoadCurve& curve, double eta, const SystemParams& params) {
  return curve.load(eta) * params.p0_w_per_load;
}

}  // namespace pscom

#endif  // PSCOM_CURVE_HPP

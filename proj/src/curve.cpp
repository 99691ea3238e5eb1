#include "pscom/curve.hpp"

#include <cmath>
#include <sstream>

namespace pscom {
namespace {

// Collinear knots give equal slopes; allow for rounding in the differences.
constexpr double kSlopeTolerance = 1e-12;

std::string knot_str(std::size_t i, const Knot& k) {
  std::ostringstream os;
  os.precision(17);
  os << "knot " << i << " (eta=" << k.eta << ", load=" << k.load << ")";
  return os.str();
}

}  // namespace

CompLoadCurve CompLoadCurve::from_knots(std::vector<Knot> knots) {
  if (knots.size() < 2) {
    throw CurveValidationError(CurveError::TooFewKnots, "curve needs at least 2 knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].eta) || !std::isfinite(knots[i].load)) {
      throw CurveValidationError(CurveError::NonFinite, knot_str(i, knots[i]) + " is not finite");
    }
  }
  if (knots[0].eta != 1.0 || knots[0].load != 0.0) {
    throw CurveValidationError(CurveError::FirstKnotNotAnchor,
                               "first knot must be (eta=1, load=0): g(1) = 0 is required, got " +
                                   knot_str(0, knots[0]));
  }

  std::vector<Segment> segments;
  segments.reserve(knots.size() - 1);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const Knot& hi = knots[i - 1];
    const Knot& lo = knots[i];
    if (!(lo.eta < hi.eta)) {
      throw CurveValidationError(CurveError::EtaNotDescending,
                                 knot_str(i, lo) + " is not below the previous knot's eta");
    }
    if (!(lo.eta > 0.0)) {
      throw CurveValidationError(CurveError::EtaOutOfRange, knot_str(i, lo) + " has eta <= 0");
    }
    if (!(lo.load > hi.load)) {
      throw CurveValidationError(CurveError::LoadNotIncreasing,
                                 knot_str(i, lo) + " does not increase the load");
    }
    const double slope = (lo.load - hi.load) / (lo.eta - hi.eta);
    if (!segments.empty()) {
      const double prev = std::abs(segments.back().slope);
      if (std::abs(slope) < prev * (1.0 - kSlopeTolerance)) {
        std::ostringstream os;
        os << "slope magnitude decreases at segment " << i << ": |" << segments.back().slope
           << "| > |" << slope << "|";
        throw CurveValidationError(CurveError::SlopeMagnitudeDecreasing, os.str());
      }
    }
    segments.push_back({slope, hi.load - slope * hi.eta, lo.eta, hi.eta});
  }

  CompLoadCurve curve;
  curve.knots_ = std::move(knots);
  curve.segments_ = std::move(segments);
  return curve;
}

CompLoadCurve CompLoadCurve::default_curve() {
  return from_knots({{1.0, 0.0}, {0.8, 100.0}, {0.6, 300.0}, {0.4, 700.0}, {0.2, 1500.0}});
}

double CompLoadCurve::load(double eta) const {
  if (!(eta >= eta_min() && eta <= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "comp_load: eta=" << eta << " outside [" << eta_min() << ", 1]";
    throw std::domain_error(os.str());
  }
  // Segments are ordered by descending eta; segment s holds [eta_lo, eta_hi).
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const Knot& upper = knots_[s];
    if (eta == upper.eta) return upper.load;
    if (eta > segments_[s].eta_lo) return upper.load + segments_[s].slope * (eta - upper.eta);
  }
  return knots_.back().load;
}

std::vector<double> CompLoadCurve::breakpoints() const {
  std::vector<double> out;
  out.reserve(knots_.size());
  for (const Knot& k : knots_) out.push_back(k.eta);
  return out;
}

}  // namespace pscom

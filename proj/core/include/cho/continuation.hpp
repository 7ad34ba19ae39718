#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cho/spectral.hpp"

namespace cho {

struct LineSegment {
  Complex from;
  Complex to;
};

/// Arc of a circle; runs counterclockwise when to_angle > from_angle.
struct ArcSegment {
  Complex center;
  double radius = 1.0;
  double from_angle = 0.0;
  double to_angle = 0.0;
};

using PathSegment = std::variant<LineSegment, ArcSegment>;

Complex segment_point(const PathSegment& segment, double t);

class PathSpec {
 public:
  static constexpr int kDefaultSamples = 256;
  static constexpr double kContinuityTolerance = 1e-12;

  PathSpec() = default;
  explicit PathSpec(std::vector<PathSegment> segments, int samples_per_segment = kDefaultSamples);

  const std::vector<PathSegment>& segments() const noexcept { return segments_; }
  int samples_per_segment() const noexcept { return samples_; }

  Complex start() const;
  Complex end() const;
  Complex point(std::size_t segment, double t) const;
  bool closed() const;

  /// Same curve traversed backwards.
  PathSpec reversed() const;
  /// This path followed by other (which must start where this one ends).
  PathSpec then(const PathSpec& other) const;
  PathSpec repeated(int times) const;

 private:
  std::vector<PathSegment> segments_;
  int samples_ = kDefaultSamples;
};

/// Full circle of the given radius around center starting at
/// center + radius * exp(i base_angle).
PathSpec circle_loop(Complex center, double radius, double base_angle, bool counterclockwise = true,
                     int samples_per_segment = PathSpec::kDefaultSamples);

struct TracePoint {
  Complex g;
  Complex energy;
  SheetLabel sheet;
};

struct CutCrossing {
  std::size_t segment = 0;
  double parameter = 0.0;
  /// Which cut family: real_axis (cut of sqrt(4 nu^2 omega^2 - g^2)) or
  /// imaginary_axis (cut of the inner radical of R-).
  BranchKind cut = BranchKind::real_axis;
};

struct ContinuationTrace {
  LevelSpec level;
  SheetLabel start_sheet;
  std::vector<TracePoint> points;
  SheetLabel end_sheet;
  std::vector<CutCrossing> cut_crossings;
};

struct ContinuationOptions {
  int max_halvings = 12;
  /// A step is ambiguous when the runner-up candidate is closer than this
  /// factor times the distance to the best candidate.
  double separation_ratio = 10.0;
};

/// Follows the eigenvalue that starts on start_sheet along the path by
/// nearest-candidate matching against all closed-form sheet values.
/// For m = 0 the sB component is irrelevant and is held fixed.
ContinuationTrace continue_along(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& start_sheet,
                                 const PathSpec& path, const ContinuationOptions& options = {});

class MonodromyPermutation {
 public:
  MonodromyPermutation() = default;  ///< identity
  MonodromyPermutation(std::array<SheetLabel, 8> mapping, Complex base_point, PathSpec loop);

  SheetLabel operator()(const SheetLabel& s) const { return mapping_[static_cast<std::size_t>(s.index())]; }
  const std::array<SheetLabel, 8>& mapping() const noexcept { return mapping_; }
  Complex base_point() const noexcept { return base_; }
  const PathSpec& loop() const noexcept { return loop_; }

  bool bijective() const;
  bool identity() const;
  /// Smallest k >= 1 with p^k = identity.
  int order() const;
  /// Labels moved by the permutation.
  int moved() const;
  /// Cycles of length >= 2.
  std::vector<std::vector<SheetLabel>> cycles() const;
  /// Cycle notation, e.g. "(+++ -++)(+-+ --+)"; "()" for the identity.
  std::string cycle_notation() const;

  /// (a.then(b))(s) = b(a(s)).
  MonodromyPermutation then(const MonodromyPermutation& next) const;
  MonodromyPermutation inverse() const;

  friend bool operator==(const MonodromyPermutation& a, const MonodromyPermutation& b) {
    return a.mapping_ == b.mapping_;
  }

 private:
  std::array<SheetLabel, 8> mapping_ = SheetLabel::all();
  Complex base_{};
  PathSpec loop_;
};

/// Runs continue_along from each of the eight labels around a closed loop.
MonodromyPermutation monodromy(const Frequencies& freqs, const LevelSpec& level, const PathSpec& loop,
                               const ContinuationOptions& options = {});

/// Counterclockwise circle around one branch point, based on the side facing
/// the origin. Radius defaults to half the distance to the nearest other
/// branch point.
PathSpec generator_loop(const Frequencies& freqs, const BranchPoint& point, std::optional<double> radius = {},
                        int samples_per_segment = PathSpec::kDefaultSamples);

struct SheetOrbit {
  std::vector<SheetLabel> sheets;
  /// Number of distinct energy values on the orbit (labels differing only in
  /// sB coincide when m = 0).
  int distinct_values = 0;
};

struct Reachability {
  LevelSpec level;
  std::vector<std::string> generator_ids;
  std::vector<MonodromyPermutation> generators;
  /// Orbits of the generated group. For m = 0 only the sB = plus labels are listed.
  std::vector<SheetOrbit> orbits;
};

Reachability reachability(const Frequencies& freqs, const LevelSpec& level);

}  // namespace cho

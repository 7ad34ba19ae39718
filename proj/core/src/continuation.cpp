#include "cho/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "parallel.hpp"

namespace cho {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool close_points(Complex a, Complex b) {
  return std::abs(a - b) <= PathSpec::kContinuityTolerance * std::max(1.0, std::abs(a));
}

void require_not_excluded(const std::vector<BranchPoint>& points, Complex g) {
  for (const auto& bp : points) {
    if (std::abs(g - bp.g) <= tol::exclusion * (1.0 + std::abs(bp.g))) {
      throw Error(ErrorCode::path_hits_branch_point, "path passes within the exclusion radius of branch point " + bp.id);
    }
  }
}

/// Arguments of the two square roots that can cross their principal cut.
struct CutArguments {
  Complex outer;  ///< 4 nu^2 omega^2 - g^2
  Complex inner;  ///< nu^2 + omega^2 - sqrt(outer)
};

CutArguments cut_arguments(const Frequencies& f, Complex g) {
  const double nu2 = f.nu() * f.nu();
  const double om2 = f.omega() * f.omega();
  const Complex outer = 4.0 * nu2 * om2 - g * g;
  return {outer, nu2 + om2 - principal_sqrt(outer)};
}

// Upper half plane includes the negative real axis itself, as in principal_sqrt.
bool upper(Complex z) { return z.imag() > 0.0 || (z.imag() == 0.0 && !std::signbit(z.imag())); }

std::optional<double> negative_axis_crossing(Complex a, Complex b) {
  if (upper(a) == upper(b)) return std::nullopt;
  const double denom = a.imag() - b.imag();
  const double frac = denom == 0.0 ? 0.5 : a.imag() / denom;
  const double re = a.real() + frac * (b.real() - a.real());
  if (re >= 0.0) return std::nullopt;
  return std::clamp(frac, 0.0, 1.0);
}

bool on_cut(Complex z) {
  return z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * std::abs(z);
}

std::vector<SheetLabel> candidate_labels(const LevelSpec& level, const SheetLabel& start) {
  std::vector<SheetLabel> out;
  for (const auto& s : SheetLabel::all()) {
    if (level.m == 0 && s.b != start.b) continue;
    out.push_back(s);
  }
  return out;
}

}  // namespace

Complex segment_point(const PathSegment& segment, double t) {
  return std::visit(overloaded{
                        [t](const LineSegment& l) { return l.from + t * (l.to - l.from); },
                        [t](const ArcSegment& a) {
                          const double angle = a.from_angle + t * (a.to_angle - a.from_angle);
                          return a.center + std::polar(a.radius, angle);
                        },
                    },
                    segment);
}

PathSpec::PathSpec(std::vector<PathSegment> segments, int samples_per_segment)
    : segments_(std::move(segments)), samples_(samples_per_segment) {
  if (segments_.empty()) throw Error(ErrorCode::invalid_input, "path needs at least one segment");
  if (samples_ <= 0) throw Error(ErrorCode::invalid_input, "samples_per_segment must be positive");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (const auto* arc = std::get_if<ArcSegment>(&segments_[i])) {
      if (!(arc->radius > 0.0) || !std::isfinite(arc->radius)) {
        throw Error(ErrorCode::invalid_input, "arc radius must be positive and finite");
      }
      require_finite(arc->center, "arc center");
      if (!std::isfinite(arc->from_angle) || !std::isfinite(arc->to_angle)) {
        throw Error(ErrorCode::invalid_input, "arc angles must be finite");
      }
    } else {
      const auto& line = std::get<LineSegment>(segments_[i]);
      require_finite(line.from, "line start");
      require_finite(line.to, "line end");
    }
    if (i > 0 && !close_points(segment_point(segments_[i - 1], 1.0), segment_point(segments_[i], 0.0))) {
      throw Error(ErrorCode::invalid_input, "segment " + std::to_string(i) + " does not start where the previous one ends");
    }
  }
}

Complex PathSpec::start() const { return segment_point(segments_.front(), 0.0); }
Complex PathSpec::end() const { return segment_point(segments_.back(), 1.0); }

Complex PathSpec::point(std::size_t segment, double t) const { return segment_point(segments_.at(segment), t); }

bool PathSpec::closed() const { return !segments_.empty() && close_points(start(), end()); }

PathSpec PathSpec::reversed() const {
  std::vector<PathSegment> out;
  out.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    out.push_back(std::visit(overloaded{
                                 [](const LineSegment& l) -> PathSegment { return LineSegment{l.to, l.from}; },
                                 [](const ArcSegment& a) -> PathSegment {
                                   return ArcSegment{a.center, a.radius, a.to_angle, a.from_angle};
                                 },
                             },
                             *it));
  }
  return PathSpec(std::move(out), samples_);
}

PathSpec PathSpec::then(const PathSpec& other) const {
  std::vector<PathSegment> out = segments_;
  out.insert(out.end(), other.segments_.begin(), other.segments_.end());
  return PathSpec(std::move(out), samples_);
}

PathSpec PathSpec::repeated(int times) const {
  if (times < 1) throw Error(ErrorCode::invalid_input, "repeat count must be positive");
  std::vector<PathSegment> out;
  for (int k = 0; k < times; ++k) out.insert(out.end(), segments_.begin(), segments_.end());
  return PathSpec(std::move(out), samples_);
}

PathSpec circle_loop(Complex center, double radius, double base_angle, bool counterclockwise,
                     int samples_per_segment) {
  const double sweep = counterclockwise ? 2.0 * std::numbers::pi : -2.0 * std::numbers::pi;
  return PathSpec({ArcSegment{center, radius, base_angle, base_angle + sweep}}, samples_per_segment);
}

ContinuationTrace continue_along(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& start_sheet,
                                 const PathSpec& path, const ContinuationOptions& options) {
  const auto bps = branch_points(freqs);
  const auto labels = candidate_labels(level, start_sheet);

  ContinuationTrace trace;
  trace.level = level;
  trace.start_sheet = start_sheet;

  Complex g_prev = path.start();
  require_not_excluded(bps, g_prev);
  Complex e_prev = energy(freqs, level, start_sheet, g_prev);
  SheetLabel sheet = start_sheet;
  trace.points.push_back({g_prev, e_prev, sheet});
  CutArguments cut_prev = cut_arguments(freqs, g_prev);

  const double base_step = 1.0 / path.samples_per_segment();
  const double min_step = std::ldexp(base_step, -options.max_halvings);

  for (std::size_t seg = 0; seg < path.segments().size(); ++seg) {
    double t = 0.0;
    while (t < 1.0) {
      double h = std::min(base_step, 1.0 - t);
      while (true) {
        const double t_next = (t + h >= 1.0 - 1e-15) ? 1.0 : t + h;
        const Complex g = path.point(seg, t_next);
        require_not_excluded(bps, g);
        const Radicals rad = radicals(freqs, g);

        double d1 = std::numeric_limits<double>::infinity();
        double d2 = d1;
        SheetLabel best = sheet;
        Complex best_e;
        for (const auto& s : labels) {
          const Complex e = energy(rad, level, s);
          const double d = std::abs(e - e_prev);
          if (d < d1) {
            d2 = d1;
            d1 = d;
            best = s;
            best_e = e;
          } else if (d < d2) {
            d2 = d;
          }
        }

        const bool ambiguous = d2 < options.separation_ratio * d1;
        if (ambiguous && h > min_step * 1.5) {
          h /= 2.0;
          continue;
        }
        if (ambiguous) {
          throw Error(ErrorCode::tracking_ambiguous,
                      "candidates remain indistinguishable at minimum step near g = (" + std::to_string(g.real()) +
                          ", " + std::to_string(g.imag()) + ")");
        }

        const CutArguments cut = cut_arguments(freqs, g);
        if (auto f = negative_axis_crossing(cut_prev.outer, cut.outer)) {
          trace.cut_crossings.push_back({seg, t + *f * (t_next - t), BranchKind::real_axis});
        }
        if (auto f = negative_axis_crossing(cut_prev.inner, cut.inner)) {
          trace.cut_crossings.push_back({seg, t + *f * (t_next - t), BranchKind::imaginary_axis});
        }
        cut_prev = cut;
        sheet = best;
        e_prev = best_e;
        g_prev = g;
        trace.points.push_back({g, best_e, best});
        t = t_next;
        break;
      }
    }
  }
  trace.end_sheet = sheet;
  return trace;
}

MonodromyPermutation::MonodromyPermutation(std::array<SheetLabel, 8> mapping, Complex base_point, PathSpec loop)
    : mapping_(mapping), base_(base_point), loop_(std::move(loop)) {}

bool MonodromyPermutation::bijective() const {
  std::array<bool, 8> seen{};
  for (const auto& s : mapping_) seen[static_cast<std::size_t>(s.index())] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool MonodromyPermutation::identity() const { return mapping_ == SheetLabel::all(); }

int MonodromyPermutation::moved() const {
  int count = 0;
  for (int i = 0; i < 8; ++i) count += mapping_[static_cast<std::size_t>(i)].index() != i;
  return count;
}

std::vector<std::vector<SheetLabel>> MonodromyPermutation::cycles() const {
  std::vector<std::vector<SheetLabel>> out;
  std::array<bool, 8> visited{};
  for (int i = 0; i < 8; ++i) {
    if (visited[static_cast<std::size_t>(i)]) continue;
    std::vector<SheetLabel> cycle;
    int j = i;
    while (!visited[static_cast<std::size_t>(j)]) {
      visited[static_cast<std::size_t>(j)] = true;
      cycle.push_back(SheetLabel::from_index(j));
      j = mapping_[static_cast<std::size_t>(j)].index();
    }
    if (cycle.size() >= 2) out.push_back(std::move(cycle));
  }
  return out;
}

int MonodromyPermutation::order() const {
  int result = 1;
  for (const auto& c : cycles()) result = std::lcm(result, static_cast<int>(c.size()));
  return result;
}

std::string MonodromyPermutation::cycle_notation() const {
  const auto cs = cycles();
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& c : cs) {
    out += '(';
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) out += ' ';
      out += c[k].str();
    }
    out += ')';
  }
  return out;
}

MonodromyPermutation MonodromyPermutation::then(const MonodromyPermutation& next) const {
  std::array<SheetLabel, 8> m{};
  for (std::size_t i = 0; i < 8; ++i) m[i] = next(mapping_[i]);
  // The loops concatenate only when they share the base point.
  PathSpec loop;
  if (loop_.segments().empty()) {
    loop = next.loop_;
  } else if (!next.loop_.segments().empty() && close_points(loop_.end(), next.loop_.start())) {
    loop = loop_.then(next.loop_);
  }
  return MonodromyPermutation(m, base_, std::move(loop));
}

MonodromyPermutation MonodromyPermutation::inverse() const {
  std::array<SheetLabel, 8> m{};
  for (std::size_t i = 0; i < 8; ++i) m[static_cast<std::size_t>(mapping_[i].index())] = SheetLabel::from_index(int(i));
  return MonodromyPermutation(m, base_, loop_.segments().empty() ? loop_ : loop_.reversed());
}

MonodromyPermutation monodromy(const Frequencies& freqs, const LevelSpec& level, const PathSpec& loop,
                               const ContinuationOptions& options) {
  if (!loop.closed()) throw Error(ErrorCode::invalid_input, "monodromy loop must be closed");
  const Complex base = loop.start();
  const CutArguments args = cut_arguments(freqs, base);
  if (on_cut(args.outer) || on_cut(args.inner)) {
    throw Error(ErrorCode::invalid_input, "monodromy base point lies on a branch cut");
  }
  std::array<SheetLabel, 8> mapping{};
  detail::parallel_for(8, [&](std::size_t i) {
    mapping[i] = continue_along(freqs, level, SheetLabel::from_index(int(i)), loop, options).end_sheet;
  });
  MonodromyPermutation result(mapping, base, loop);
  if (!result.bijective()) {
    throw Error(ErrorCode::tracking_ambiguous, "continuation around the loop did not produce a bijection");
  }
  return result;
}

PathSpec generator_loop(const Frequencies& freqs, const BranchPoint& point, std::optional<double> radius,
                        int samples_per_segment) {
  double r = 0.0;
  if (radius) {
    r = *radius;
  } else {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& other : branch_points(freqs)) {
      if (other.id != point.id) nearest = std::min(nearest, std::abs(other.g - point.g));
    }
    r = 0.5 * nearest;
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_input, "loop radius must be positive");
  const double base_angle = std::abs(point.g) > 0.0 ? std::arg(-point.g) : 0.0;
  return circle_loop(point.g, r, base_angle, true, samples_per_segment);
}

Reachability reachability(const Frequencies& freqs, const LevelSpec& level) {
  Reachability out;
  out.level = level;
  for (const auto& bp : branch_points(freqs)) {
    out.generator_ids.push_back(bp.id);
    out.generators.push_back(monodromy(freqs, level, generator_loop(freqs, bp)));
  }

  std::array<int, 8> parent{};
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const auto& gen : out.generators) {
    for (int i = 0; i < 8; ++i) {
      const int a = find(i);
      const int b = find(gen.mapping()[static_cast<std::size_t>(i)].index());
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }

  std::array<int, 8> slot{};
  slot.fill(-1);
  for (const auto& s : SheetLabel::all()) {
    if (level.m == 0 && s.b != Sign::plus) continue;
    const int root = find(s.index());
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<int>(out.orbits.size());
      out.orbits.emplace_back();
    }
    out.orbits[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].sheets.push_back(s);
  }
  for (auto& orbit : out.orbits) orbit.distinct_values = static_cast<int>(orbit.sheets.size());
  return out;
}

}  // namespace cho

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace s2gd {

/// One recorded point of a solver run. `work` counts cumulative stochastic
/// gradient evaluations (a full gradient costs n units).
struct TracePoint {
  std::uint64_t work;
  std::uint64_t epoch;
  double objective;
};

class ConvergenceTrace {
 public:
  void record(std::uint64_t work, std::uint64_t epoch, double objective);

  /// Attaches f(x*) so residual columns f(x) - f(x*) can be emitted.
  void attach_reference(double optimum) { reference_ = optimum; }

  const std::vector<TracePoint>& points() const { return points_; }
  std::optional<double> reference() const { return reference_; }
  bool empty() const { return points_.empty(); }
  const TracePoint& back() const { return points_.back(); }

  std::optional<double> residual(const TracePoint& p) const {
    if (!reference_) return std::nullopt;
    return p.objective - *reference_;
  }

 private:
  std::vector<TracePoint> points_;
  std::optional<double> reference_;
};

/// CSV with header `work_units,epoch,objective,residual`; the residual
/// column is left empty when no reference optimum is attached. Throws on
/// an empty trace or an I/O failure.
void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out);
void save_trace_csv(const ConvergenceTrace& trace, const std::string& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace s2gd

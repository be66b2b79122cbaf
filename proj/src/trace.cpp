#include "s2gd/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace s2gd {

void ConvergenceTrace::record(std::uint64_t work, std::uint64_t epoch,
                              double objective) {
  if (!points_.empty() && work <= points_.back().work) {
    throw std::logic_error("trace work units must be strictly increasing");
  }
  points_.push_back({work, epoch, objective});
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_trace_csv(const ConvergenceTrace& trace, std::ostream& out) {
  if (trace.empty()) {
    throw std::invalid_argument("write_trace_csv: empty trace");
  }
  out << "work_units,epoch,objective,residual\n";
  for (const TracePoint& p : trace.points()) {
    out << p.work << ',' << p.epoch << ',' << format_double(p.objective)
        << ',';
    if (const auto r = trace.residual(p)) out << format_double(*r);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failure");
}

void save_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_trace_csv(trace, out);
}

}  // namespace s2gd

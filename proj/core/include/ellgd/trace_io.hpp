#pragma once

#include <iosfwd>
#include <string>

#include "ellgd/gd_solver.hpp"

namespace ellgd {

/// CSV trace format. Header is exactly
///   k,x0,...,x{d-1},f,grad_norm,step,safeguard
/// with ",batch,true_grad_norm" appended for stochastic traces. Doubles are
/// printed with 17 significant digits so a parsed trace is bit-identical.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::string& path);

Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::string& path);

}  // namespace ellgd

#include "ellgd/trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ellgd {

namespace {

void append_double(std::string& row, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  row += buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) {
    throw std::invalid_argument("trace CSV: bad numeric field '" + s + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
  std::string header = "k";
  for (int i = 0; i < trace.dim; ++i) {
    header += ",x" + std::to_string(i);
  }
  header += ",f,grad_norm,step,safeguard";
  if (trace.stochastic) header += ",batch,true_grad_norm";
  out << header << '\n';

  std::string row;
  for (const TraceRecord& r : trace.records) {
    row.clear();
    row += std::to_string(r.k);
    for (int i = 0; i < trace.dim; ++i) {
      row += ',';
      append_double(row, r.x[i]);
    }
    row += ',';
    append_double(row, r.f_val);
    row += ',';
    append_double(row, r.grad_norm);
    row += ',';
    append_double(row, r.step);
    row += ',';
    row += r.safeguard_hit ? '1' : '0';
    if (trace.stochastic) {
      row += ',';
      row += std::to_string(r.batch);
      row += ',';
      append_double(row, r.true_grad_norm);
    }
    out << row << '\n';
  }
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  write_trace_csv(trace, out);
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("trace CSV: empty input");
  }
  const std::vector<std::string> header = split_csv(line);
  int dim = 0;
  while (1 + dim < static_cast<int>(header.size()) &&
         header[1 + dim] == "x" + std::to_string(dim)) {
    ++dim;
  }
  if (dim == 0 || header[0] != "k") {
    throw std::invalid_argument("trace CSV: unrecognized header");
  }
  const std::size_t base_cols = 1 + dim + 4;
  const bool stochastic = header.size() == base_cols + 2;
  if (header.size() != base_cols && !stochastic) {
    throw std::invalid_argument("trace CSV: unrecognized header");
  }

  Trace trace;
  trace.dim = dim;
  trace.stochastic = stochastic;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("trace CSV: row width mismatch");
    }
    TraceRecord r;
    r.k = std::strtol(fields[0].c_str(), nullptr, 10);
    r.x.resize(dim);
    for (int i = 0; i < dim; ++i) r.x[i] = parse_double(fields[1 + i]);
    r.f_val = parse_double(fields[1 + dim]);
    r.grad_norm = parse_double(fields[2 + dim]);
    r.step = parse_double(fields[3 + dim]);
    r.safeguard_hit = fields[4 + dim] == "1";
    if (stochastic) {
      r.batch = std::strtol(fields[5 + dim].c_str(), nullptr, 10);
      r.true_grad_norm = parse_double(fields[6 + dim]);
    }
    trace.records.push_back(std::move(r));
  }
  return trace;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file for reading: " + path);
  return read_trace_csv(in);
}

}  // namespace ellgd

// Copyright 2026 The beq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beq/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace beq {
namespace {

void append_real(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_optional(std::string& out, const std::optional<double>& v) {
  if (v) {
    append_real(out, *v);
  } else {
    out += "nan";
  }
}

}  // namespace

void Trace::append(TraceRecord record) {
  if (!records_.empty() && record.n <= records_.back().n) {
    throw std::invalid_argument("Trace::append: record indices must increase");
  }
  if (!(record.step_norm >= 0.0)) {
    throw std::invalid_argument("Trace::append: negative step norm");
  }
  records_.push_back(std::move(record));
}

const TraceRecord& Trace::at_n(long n) const {
  if (records_.empty()) throw std::out_of_range("Trace::at_n: empty trace");
  const long offset = n - records_.front().n;
  if (offset < 0 || offset >= static_cast<long>(records_.size()) ||
      records_[offset].n != n) {
    throw std::out_of_range("Trace::at_n: no record " + std::to_string(n));
  }
  return records_[offset];
}

std::string trace_to_csv(const Trace& trace, Eigen::Index dim) {
  std::string out = "n,lambda,beta,alpha,step_norm,err_to_ref,ep_residual";
  for (Eigen::Index i = 0; i < dim; ++i) out += ",x_" + std::to_string(i);
  out += '\n';
  for (const auto& r : trace.records()) {
    require_same_dim(dim, r.x.size(), "trace_to_csv");
    out += std::to_string(r.n);
    for (double v : {r.lambda, r.beta, r.alpha, r.step_norm}) {
      out += ',';
      append_real(out, v);
    }
    out += ',';
    append_optional(out, r.err_to_ref);
    out += ',';
    append_optional(out, r.ep_residual);
    for (Eigen::Index i = 0; i < dim; ++i) {
      out += ',';
      append_real(out, r.x[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_trace(const Trace& trace, const std::string& path, Eigen::Index dim) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("emit_trace: cannot open " + path);
  file << trace_to_csv(trace, dim);
  if (!file) throw std::runtime_error("emit_trace: write failed for " + path);
}

}  // namespace beq

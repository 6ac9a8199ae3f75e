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

#ifndef BEQ_TRACE_HPP_
#define BEQ_TRACE_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beq/core.hpp"

namespace beq {

// Row n describes the iterate x_n: the schedule values at n (used for the
// step x_n -> x_{n+1}), the inner point z_n that produced it and the
// backward step |x_n - x_{n-1}|. The first row has z_1 = x_1.
struct TraceRecord {
  long n = 0;
  double lambda = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  Vector x;
  Vector z;
  double step_norm = 0.0;
  std::optional<double> err_to_ref;
  std::optional<double> ep_residual;
};

class Trace {
 public:
  void append(TraceRecord record);

  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
  const TraceRecord& back() const { return records_.back(); }
  const std::vector<TraceRecord>& records() const { return records_; }

  long first_n() const { return records_.empty() ? 0 : records_.front().n; }
  long last_n() const { return records_.empty() ? 0 : records_.back().n; }
  // Record with index n; throws std::out_of_range when absent.
  const TraceRecord& at_n(long n) const;

 private:
  std::vector<TraceRecord> records_;
};

// Writes the trace as CSV:
//   n,lambda,beta,alpha,step_norm,err_to_ref,ep_residual,x_0..x_{d-1}
// Reals use 17 significant digits; missing optional values are "nan".
// `dim` fixes the number of x columns for an empty trace.
void emit_trace(const Trace& trace, const std::string& path, Eigen::Index dim);
std::string trace_to_csv(const Trace& trace, Eigen::Index dim);

}  // namespace beq

#endif  // BEQ_TRACE_HPP_

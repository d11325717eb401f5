// Copyright 2026 The IHS-WCSP Authors
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

// Reader and writer for the .wcsp text format, and the CSV writer for
// anytime bound traces.
//
// Instance format, whitespace separated, all indices 0-based:
//
//   <name> <num_vars> <max_domain_size> <num_functions> <top>
//   <domain size of each variable>
//   per function:
//     <arity> <var_1> ... <var_arity> <default_cost> <num_tuples>
//     num_tuples lines of <val_1> ... <val_arity> <cost>
//
// Blank lines and lines starting with '#' are ignored. A declared function
// with some >= top tuple and all other costs 0 is read as a hard constraint
// forbidding those tuples. Any other function becomes a cost function, and its >= top
// tuples are lifted to hard forbidden tuples.

#ifndef IHS_WCSP_IO_H_
#define IHS_WCSP_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ihs/model.h"

namespace ihs {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

Wcsp ParseWcsp(std::istream& in);
Wcsp ParseWcspString(std::string_view text);
Wcsp ReadWcspFile(const std::string& path);

// Writes `w` so that ParseWcsp reads back an instance with identical
// Evaluate() results. Tables are written with the most frequent cost as the
// default. Lifted hard constraints are folded back into their cost function.
void WriteWcsp(const Wcsp& w, std::ostream& out);

enum class TraceKind { kLb, kUb, kCore, kDone };
enum class TraceSource { kLbWorker, kUbWorker, kSeed, kMain };

std::string_view ToString(TraceKind kind);
std::string_view ToString(TraceSource source);

struct TraceEvent {
  std::int64_t elapsed_ms = 0;
  TraceKind kind = TraceKind::kLb;
  Cost value = 0;  // bound, cumulative core count, or final optimum
  TraceSource source = TraceSource::kMain;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// "elapsed_ms,kind,value,source" row without the newline.
std::string FormatTraceEvent(const TraceEvent& e);

// Streams trace rows to a sink, flushing after each one so that a killed run
// leaves a readable prefix. Not synchronized; the engine serializes calls.
class TraceWriter {
 public:
  // Writes each comment as a "# ..." line, then the CSV header.
  explicit TraceWriter(std::ostream& out,
                       std::span<const std::string> comments = {});

  // Throws std::ios_base::failure when the sink goes bad.
  void Write(const TraceEvent& e);

 private:
  std::ostream& out_;
};

void WriteTrace(std::span<const TraceEvent> events, std::ostream& out);

}  // namespace ihs

#endif  // IHS_WCSP_IO_H_

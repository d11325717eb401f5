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

#include "ihs/wcsp_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ihs {

namespace {

// Largest dense table the reader will allocate for one function.
constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

struct Token {
  std::string text;
  int line;
};

class TokenStream {
 public:
  explicit TokenStream(std::istream& in) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      last_line_ = number;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream words(line);
      std::string word;
      while (words >> word) tokens_.push_back({word, number});
    }
  }

  bool AtEnd() const { return pos_ == tokens_.size(); }
  int line() const { return AtEnd() ? last_line_ : tokens_[pos_].line; }

  const Token& Next(const char* what) {
    if (AtEnd()) {
      throw ParseError(last_line_, std::string("unexpected end of input, expected ") + what);
    }
    return tokens_[pos_++];
  }

  std::string Word(const char* what) { return Next(what).text; }

  // Non-negative integer; a leading '-' is reported as a negative value.
  std::uint64_t Unsigned(const char* what) {
    const Token& t = Next(what);
    if (!t.text.empty() && t.text[0] == '-') {
      throw ParseError(t.line, std::string("negative ") + what + " '" + t.text + "'");
    }
    std::uint64_t v = 0;
    const char* begin = t.text.data();
    const char* end = begin + t.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(t.line, std::string("malformed ") + what + " '" + t.text + "'");
    }
    return v;
  }

  std::uint64_t Bounded(const char* what, std::uint64_t limit) {
    int at = line();
    std::uint64_t v = Unsigned(what);
    if (v > limit) {
      throw ParseError(at, std::string(what) + " " + std::to_string(v) +
                               " exceeds " + std::to_string(limit));
    }
    return v;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
};

std::vector<Value> DecodeTuple(std::size_t index, const std::vector<int>& scope,
                              const std::vector<Value>& domains) {
  std::vector<Value> tuple(scope.size());
  for (std::size_t k = scope.size(); k-- > 0;) {
    tuple[k] = static_cast<Value>(index % domains[scope[k]]);
    index /= domains[scope[k]];
  }
  return tuple;
}

}  // namespace

Wcsp ParseWcsp(std::istream& in) {
  TokenStream ts(in);
  const int header_line = ts.line();
  std::string name = ts.Word("problem name");
  const auto num_vars = ts.Bounded("variable count", 1u << 24);
  const auto max_dom = ts.Bounded("max domain size", 1u << 24);
  const auto num_functions = ts.Bounded("function count", 1u << 24);
  const Cost top = ts.Unsigned("top");
  if (num_functions == 0) {
    throw ParseError(header_line, "instance declares no cost functions");
  }

  std::vector<Value> domains;
  domains.reserve(num_vars);
  for (std::uint64_t x = 0; x < num_vars; ++x) {
    int at = ts.line();
    auto d = ts.Bounded("domain size", max_dom);
    if (d == 0) throw ParseError(at, "domain size must be >= 1");
    domains.push_back(static_cast<Value>(d));
  }

  std::vector<HardConstraint> hard;
  std::vector<CostFunction> functions;
  for (std::uint64_t f = 0; f < num_functions; ++f) {
    const int fline = ts.line();
    const auto arity = ts.Bounded("arity", num_vars);
    std::vector<int> scope;
    std::size_t size = 1;
    for (std::uint64_t k = 0; k < arity; ++k) {
      int at = ts.line();
      if (num_vars == 0) throw ParseError(at, "scope variable out of range");
      int x = static_cast<int>(ts.Bounded("scope variable", num_vars - 1));
      if (std::find(scope.begin(), scope.end(), x) != scope.end()) {
        throw ParseError(at, "repeated variable " + std::to_string(x) + " in scope");
      }
      scope.push_back(x);
      size *= domains[x];
      if (size > kMaxTableSize) throw ParseError(at, "cost table too large");
    }
    const Cost default_cost = ts.Unsigned("default cost");
    const auto num_tuples = ts.Bounded("tuple count", size);
    std::vector<Cost> table(size, default_cost);
    for (std::uint64_t t = 0; t < num_tuples; ++t) {
      std::size_t index = 0;
      for (std::uint64_t k = 0; k < arity; ++k) {
        int at = ts.line();
        auto v = ts.Unsigned("value");
        if (v >= domains[scope[k]]) {
          throw ParseError(at, "value " + std::to_string(v) + " outside domain of variable " +
                                   std::to_string(scope[k]));
        }
        index = index * domains[scope[k]] + v;
      }
      table[index] = ts.Unsigned("cost");
    }

    const bool pure_constraint =
        std::all_of(table.begin(), table.end(), [top](Cost c) { return c == 0 || c >= top; }) &&
        std::any_of(table.begin(), table.end(), [top](Cost c) { return c >= top; });
    try {
      if (pure_constraint) {
        HardConstraint c{scope, {}, -1};
        for (std::size_t t = 0; t < size; ++t) {
          if (table[t] >= top) c.forbidden_tuples.push_back(DecodeTuple(t, scope, domains));
        }
        hard.push_back(std::move(c));
      } else {
        functions.emplace_back(std::move(scope), std::move(table), top, domains);
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(fline, e.what());
    }
  }
  if (!ts.AtEnd()) throw ParseError(ts.line(), "trailing data after last function");

  try {
    return Wcsp(std::move(name), std::move(domains), std::move(hard),
                std::move(functions), top);
  } catch (const std::invalid_argument& e) {
    throw ParseError(header_line, e.what());
  }
}

Wcsp ParseWcspString(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseWcsp(in);
}

Wcsp ReadWcspFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ParseWcsp(in);
}

namespace {

void WriteTuple(std::ostream& out, std::span<const Value> tuple, Cost cost) {
  for (Value v : tuple) out << v << ' ';
  out << cost << '\n';
}

}  // namespace

void WriteWcsp(const Wcsp& w, std::ostream& out) {
  std::vector<const HardConstraint*> declared;
  for (const auto& c : w.hard_constraints()) {
    // Constraints forbidding nothing are dropped; read back they would be
    // all-zero cost functions.
    if (c.lifted_from < 0 && !c.forbidden_tuples.empty()) declared.push_back(&c);
  }
  // A name must be a single token.
  std::string name = w.name().empty() ? std::string("wcsp") : w.name();
  std::replace_if(name.begin(), name.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); }, '_');

  out << name << ' ' << w.num_vars() << ' ' << w.max_domain_size() << ' '
      << declared.size() + w.cost_functions().size() << ' ' << w.top() << '\n';
  for (int x = 0; x < w.num_vars(); ++x) {
    out << (x > 0 ? " " : "") << w.domains()[x];
  }
  out << '\n';

  for (const HardConstraint* c : declared) {
    out << c->scope.size();
    for (int x : c->scope) out << ' ' << x;
    out << " 0 " << c->forbidden_tuples.size() << '\n';
    for (const auto& t : c->forbidden_tuples) WriteTuple(out, t, w.top());
  }

  for (const auto& f : w.cost_functions()) {
    std::map<Cost, std::size_t> counts;
    for (Cost c : f.table()) ++counts[c];
    Cost default_cost = counts.begin()->first;
    std::size_t best = 0;
    for (const auto& [c, n] : counts) {
      if (n > best) {
        best = n;
        default_cost = c;
      }
    }
    out << f.arity();
    for (int x : f.scope()) out << ' ' << x;
    out << ' ' << default_cost << ' ' << f.table().size() - best << '\n';
    for (std::size_t t = 0; t < f.table().size(); ++t) {
      if (f.table()[t] != default_cost) WriteTuple(out, f.TupleAt(t), f.table()[t]);
    }
  }
}

std::string_view ToString(TraceKind kind) {
  switch (kind) {
    case TraceKind::kLb:
      return "LB";
    case TraceKind::kUb:
      return "UB";
    case TraceKind::kCore:
      return "CORE";
    case TraceKind::kDone:
      return "DONE";
  }
  return "?";
}

std::string_view ToString(TraceSource source) {
  switch (source) {
    case TraceSource::kLbWorker:
      return "LB_WORKER";
    case TraceSource::kUbWorker:
      return "UB_WORKER";
    case TraceSource::kSeed:
      return "SEED";
    case TraceSource::kMain:
      return "MAIN";
  }
  return "?";
}

std::string FormatTraceEvent(const TraceEvent& e) {
  std::string row = std::to_string(e.elapsed_ms);
  row += ',';
  row += ToString(e.kind);
  row += ',';
  row += std::to_string(e.value);
  row += ',';
  row += ToString(e.source);
  return row;
}

TraceWriter::TraceWriter(std::ostream& out, std::span<const std::string> comments)
    : out_(out) {
  for (const auto& c : comments) out_ << "# " << c << '\n';
  out_ << "elapsed_ms,kind,value,source\n";
  out_.flush();
  if (!out_) throw std::ios_base::failure("trace sink write failed");
}

void TraceWriter::Write(const TraceEvent& e) {
  out_ << FormatTraceEvent(e) << '\n';
  out_.flush();
  if (!out_) throw std::ios_base::failure("trace sink write failed");
}

void WriteTrace(std::span<const TraceEvent> events, std::ostream& out) {
  TraceWriter writer(out);
  for (const auto& e : events) writer.Write(e);
}

}  // namespace ihs

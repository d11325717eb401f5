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

// ihs_wcsp: solve, gen and verify subcommands.
//
// Exit codes: 0 optimal / ok, 1 usage or input error, 2 timeout with
// bounds, 3 infeasible, 4 verification mismatch.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ihs/bruteforce.h"
#include "ihs/engine.h"
#include "ihs/wcsp_io.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitMismatch = 4;

struct SolveArgs {
  std::string file;
  std::string alg = "lub";
  double time_limit = 0;
  int lb_cores = 0;
  int ub_cores = 0;
  bool seed_disjoint = false;
  std::string trace;
  bool deterministic = false;
  std::string dump_cnf;
};

struct VerifyArgs {
  std::string file;
  double time_limit = 60;
  bool inject_fault = false;
};

std::string Invocation(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    out += argv[i];
  }
  return out;
}

// Hardware threads split evenly between the two loops unless given.
void ResolveCores(SolveArgs& args) {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  if (args.lb_cores <= 0) args.lb_cores = std::max(1, hw / 2);
  if (args.ub_cores <= 0) args.ub_cores = std::max(1, hw - hw / 2);
}

int RunSolve(SolveArgs args, const std::string& invocation) {
  const ihs::Wcsp w = ihs::ReadWcspFile(args.file);
  ResolveCores(args);
  const std::map<std::string, ihs::Algorithm> algs = {
      {"lb", ihs::Algorithm::kLb}, {"ub", ihs::Algorithm::kUb}, {"lub", ihs::Algorithm::kLub}};

  if (!args.dump_cnf.empty()) {
    std::ofstream cnf(args.dump_cnf);
    if (!cnf) throw std::runtime_error("cannot write " + args.dump_cnf);
    ihs::CspEncoding(w).WriteDimacs(cnf);
  }

  std::ofstream trace_file;
  std::unique_ptr<ihs::TraceWriter> writer;
  if (!args.trace.empty()) {
    trace_file.open(args.trace);
    if (!trace_file) throw std::runtime_error("cannot write " + args.trace);
    std::ostringstream opts;
    opts << "alg=" << args.alg << " time_limit=" << args.time_limit
         << " lb_cores=" << args.lb_cores << " ub_cores=" << args.ub_cores
         << " seed_disjoint=" << args.seed_disjoint
         << " deterministic=" << args.deterministic;
    const std::vector<std::string> comments = {
        "invocation: " + invocation,
        "instance: " + w.name() + " (" + args.file + ")",
        "options: " + opts.str(),
    };
    writer = std::make_unique<ihs::TraceWriter>(trace_file, comments);
  }

  ihs::CorePool pool(writer ? ihs::CorePool::Listener(
                                  [&](const ihs::TraceEvent& e) { writer->Write(e); })
                            : ihs::CorePool::Listener());
  ihs::SolveOptions options;
  if (args.time_limit > 0) {
    options.time_limit = std::chrono::milliseconds(static_cast<long long>(args.time_limit * 1000));
  }
  options.seed_disjoint_cores = args.seed_disjoint;
  options.lb_threads = args.lb_cores;
  options.ub_threads = args.ub_cores;
  options.deterministic = args.deterministic;
  const ihs::SolveResult r = ihs::Solve(algs.at(args.alg), w, pool, options);

  std::cout << "STATUS " << ihs::ToString(r.status) << " LB " << ihs::CostToString(r.lb)
            << " UB " << ihs::CostToString(r.ub) << " CORES " << r.cores_used << " TIME_MS "
            << r.wall_ms << "\n";
  switch (r.status) {
    case ihs::SolveStatus::kOptimal:
      std::cout << "OPTIMAL " << *r.optimum << "\n";
      return kExitOk;
    case ihs::SolveStatus::kTimeout:
      return kExitTimeout;
    case ihs::SolveStatus::kInfeasible:
      return kExitInfeasible;
  }
  return kExitUsage;
}

int RunGen(const ihs::GeneratorParams& params, const std::string& out) {
  const ihs::Wcsp w = ihs::GenerateWcsp(params);
  if (out.empty() || out == "-") {
    ihs::WriteWcsp(w, std::cout);
    return kExitOk;
  }
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write " + out);
  ihs::WriteWcsp(w, file);
  return kExitOk;
}

int RunVerify(const VerifyArgs& args) {
  const ihs::Wcsp w = ihs::ReadWcspFile(args.file);
  const std::optional<ihs::Cost> expected = ihs::BruteForceOptimum(w);

  auto show = [](const std::optional<ihs::Cost>& c) {
    return c ? std::to_string(*c) : std::string("INFEASIBLE");
  };
  std::ostringstream line;
  line << "w*=" << show(expected);
  std::vector<std::string> diffs;
  const std::pair<const char*, ihs::Algorithm> runs[] = {
      {"hs_lb", ihs::Algorithm::kLb}, {"hs_ub", ihs::Algorithm::kUb}, {"hs_lub", ihs::Algorithm::kLub}};
  for (const auto& [name, alg] : runs) {
    ihs::CorePool pool;
    ihs::SolveOptions options;
    options.time_limit = std::chrono::milliseconds(static_cast<long long>(args.time_limit * 1000));
    const ihs::SolveResult r = ihs::Solve(alg, w, pool, options);
    std::optional<ihs::Cost> got;
    std::string shown;
    if (r.status == ihs::SolveStatus::kOptimal) {
      got = *r.optimum;
      if (args.inject_fault) ++*got;
      shown = std::to_string(*got);
    } else {
      shown = std::string(ihs::ToString(r.status));
    }
    line << ", " << name << "=" << shown;
    const bool agree = r.status == ihs::SolveStatus::kInfeasible ? !expected
                                                                  : (got && got == expected);
    if (!agree) diffs.push_back(std::string(name) + ": expected " + show(expected) + ", got " + shown);
  }
  line << (diffs.empty() ? ", OK" : ", MISMATCH");
  std::cout << line.str() << "\n";
  for (const auto& d : diffs) std::cerr << "diff " << d << "\n";
  return diffs.empty() ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit hitting set optimizer for weighted CSPs"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a .wcsp instance");
  solve_cmd->add_option("file", solve.file, "Instance file")->required();
  solve_cmd->add_option("--alg", solve.alg, "lb, ub or lub")
      ->check(CLI::IsMember({"lb", "ub", "lub"}));
  solve_cmd->add_option("--time-limit", solve.time_limit, "Seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--lb-cores", solve.lb_cores, "Threads for the lower-bound loop")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--ub-cores", solve.ub_cores, "Threads for the upper-bound loop")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_flag("--seed-disjoint", solve.seed_disjoint, "Seed with disjoint cores");
  solve_cmd->add_option("--trace", solve.trace, "Write the bound trace CSV here");
  solve_cmd->add_flag("--deterministic", solve.deterministic,
                      "Single thread, alternating loop iterations");
  solve_cmd->add_option("--dump-cnf", solve.dump_cnf, "Write the base CNF in DIMACS format");

  ihs::GeneratorParams gen;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--vars", gen.num_vars);
  gen_cmd->add_option("--dom", gen.max_domain, "Maximum domain size");
  gen_cmd->add_option("--funcs", gen.num_functions);
  gen_cmd->add_option("--arity", gen.max_arity, "Maximum arity");
  gen_cmd->add_option("--min-cost", gen.min_cost);
  gen_cmd->add_option("--max-cost", gen.max_cost);
  gen_cmd->add_option("--hard-density", gen.hard_density);
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default stdout)");

  VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Check all algorithms against brute force");
  verify_cmd->add_option("file", verify.file, "Instance file")->required();
  verify_cmd->add_option("--time-limit", verify.time_limit, "Seconds per algorithm");
  verify_cmd->add_flag("--inject-fault", verify.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return RunSolve(solve, Invocation(argc, argv));
    if (gen_cmd->parsed()) return RunGen(gen, gen_out);
    if (verify_cmd->parsed()) return RunVerify(verify);
  } catch (const ihs::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

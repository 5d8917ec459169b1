/*
 * Copyright 2026 The aradse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// aradse: synthesize, simulate, sweep and summarize accelerator-rich designs.
//
//   aradse synth  --spec S.xml [--out topo.json] [--private]
//   aradse sim    --spec S.xml [--topology topo.json] (--trace T | --pattern P)
//                 [--kernels K.json] [--set key=value]... [--seed N]
//                 [--out report.json] [--csv report.csv]
//   aradse sweep  --plan plan.json [--out table.csv] [--set key=value]... [--seed N] [--jobs N]
//   aradse report --csv table.csv --scenario NAME [--out summary.json]
//
// Exit status is 0 on success and 1 on any error; diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aradse/aradse.hpp"

namespace {

using namespace aradse;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("error writing '" + path + "'");
}

AraSpec load_spec(const std::string& path) {
  std::vector<std::string> warnings;
  auto spec = parse_spec(read_text_file(path), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  const auto report = validate_spec(spec);
  if (!report.ok()) {
    std::string msg = "invalid spec '" + path + "':";
    for (const auto& v : report.violations) msg += "\n  " + v.message;
    throw ConfigError(msg);
  }
  return spec;
}

void apply_overrides(PlatformModel& p, const std::vector<std::string>& sets) {
  for (const auto& s : sets) p.set(s);
}

int cmd_synth(const std::string& spec_path, const std::string& out, bool private_buffers) {
  const auto spec = load_spec(spec_path);
  const auto instances = expand_instances(spec);
  const auto system = build_system(spec, private_buffers);
  const auto& t = system.topology;
  if (private_buffers) {
    std::cout << "buffers: private, " << t.num_banks << " banks\n";
  } else {
    std::cout << "buffer demand: " << buffer_demand(instances, spec.acc_to_buf.connectivity) << " of "
              << spec.shared_buffers.count << " banks (connectivity " << spec.acc_to_buf.connectivity << ")\n";
  }
  std::cout << "cross points: " << cross_point_count(t) << " (" << to_string(t.provenance);
  if (t.added_cross_points) std::cout << ", +" << t.added_cross_points << " by repair";
  std::cout << ")\n";
  if (t.num_instances() <= kFeasibilityOracleLimit) {
    const auto f = check_feasibility(t, std::min<std::uint64_t>(t.connectivity, t.num_instances()));
    std::cout << "feasibility: " << (f.feasible ? "feasible" : "INFEASIBLE") << " (" << f.checked_subsets
              << " subsets checked)\n";
  } else {
    std::cout << "feasibility: not checked (" << t.num_instances() << " instances)\n";
  }
  std::cout << "interleave: " << to_string(system.interleave.strategy) << " over " << system.interleave.num_dmacs
            << " DMACs\n";
  if (!out.empty()) write_file(out, topology_file_json(t, system.interleave).dump(2) + "\n");
  return 0;
}

struct SimArgs {
  std::string spec, topology, trace, pattern, kernels, out, csv;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
};

int cmd_sim(const SimArgs& a) {
  const auto spec = load_spec(a.spec);
  if (a.trace.empty() == a.pattern.empty()) throw ConfigError("give exactly one of --trace or --pattern");

  SystemModel system;
  if (a.topology.empty()) {
    system = build_system(spec);
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(a.topology));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("topology '" + a.topology + "' is not valid JSON: " + e.what());
    }
    auto file = topology_from_json(j);
    system.topology = std::move(file.topology);
    system.interleave = file.interleave ? *file.interleave
                                        : synthesize_interleave(system.topology, spec.shared_buffers.num_dmacs,
                                                                spec.buf_to_dmac.strategy);
  }

  Workload workload;
  if (!a.trace.empty()) {
    workload = load_trace(read_text_file(a.trace));
  } else {
    auto p = parse_pattern_text(a.pattern);
    if (a.seed) p.seed = *a.seed;
    workload = synth_workload(p, spec);
  }

  auto kernels = builtin_kernels();
  if (!a.kernels.empty()) {
    try {
      kernels = merge_kernel_overrides(kernels, nlohmann::json::parse(read_text_file(a.kernels)));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("kernel overrides '" + a.kernels + "' are not valid JSON: " + e.what());
    }
  }

  auto platform = PlatformModel::from_spec(spec);
  apply_overrides(platform, a.sets);

  const auto report = run_simulation(spec, system.topology, system.interleave, workload, kernels, platform);
  const auto json = to_json(report).dump(2) + "\n";
  if (a.out.empty()) std::cout << json;
  else write_file(a.out, json);
  const auto csv = csv_header() + "\n" + to_csv_row(report) + "\n";
  if (!a.csv.empty()) write_file(a.csv, csv);
  else if (!a.out.empty()) std::cout << csv;
  return 0;
}

int cmd_sweep(const std::string& plan_path, const std::string& out, const std::vector<std::string>& sets,
              std::optional<std::uint64_t> seed, unsigned jobs) {
  auto plan = load_plan(plan_path, seed);
  apply_overrides(plan.platform, sets);
  const auto rows = run_sweep(plan, jobs);
  const auto csv = sweep_csv(rows);
  if (out.empty()) std::cout << csv;
  else write_file(out, csv);
  return 0;
}

int cmd_report(const std::string& csv_path, const std::string& scenario, const std::string& out) {
  const auto table = parse_sweep_csv(read_text_file(csv_path));
  const auto summary = summarize(table, scenario);
  std::cout << summary.text;
  if (!out.empty()) write_file(out, summary.json.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerator-rich architecture synthesis and design-space exploration"};
  app.require_subcommand(1);

  std::string spec, out;
  bool private_buffers = false;
  auto* synth = app.add_subcommand("synth", "synthesize the crossbar and DMAC interleaving of a spec");
  synth->add_option("--spec", spec, "ARA specification (XML)")->required();
  synth->add_option("--out", out, "topology file to write (JSON)");
  synth->add_flag("--private", private_buffers, "give every port a private bank instead of sharing");

  SimArgs sim_args;
  std::uint64_t seed_value = 0;
  auto* sim = app.add_subcommand("sim", "simulate one workload");
  sim->add_option("--spec", sim_args.spec, "ARA specification (XML)")->required();
  sim->add_option("--topology", sim_args.topology, "topology file from 'synth' (default: synthesize)");
  sim->add_option("--trace", sim_args.trace, "workload trace file");
  sim->add_option("--pattern", sim_args.pattern, "synthetic workload, e.g. all_parallel or stream,kernel=gradient,count=64");
  sim->add_option("--kernels", sim_args.kernels, "kernel descriptor overrides (JSON)");
  sim->add_option("--set", sim_args.sets, "platform override key=value")->take_all();
  auto* sim_seed = sim->add_option("--seed", seed_value, "seed for synthetic workloads");
  sim->add_option("--out", sim_args.out, "report file to write (JSON; default stdout)");
  sim->add_option("--csv", sim_args.csv, "CSV file to write (header + one row)");

  std::string plan;
  std::vector<std::string> sweep_sets;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "run a design-space sweep");
  sweep->add_option("--plan", plan, "sweep plan (JSON)")->required();
  sweep->add_option("--out", out, "CSV table to write (default stdout)");
  sweep->add_option("--set", sweep_sets, "platform override key=value")->take_all();
  auto* sweep_seed = sweep->add_option("--seed", seed_value, "seed for synthetic workloads");
  sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  std::string csv, scenario;
  auto* report = app.add_subcommand("report", "summarize a sweep table");
  report->add_option("--csv", csv, "table from 'sweep'")->required();
  report->add_option("--scenario", scenario, "buffers|coherency|interleave|tlb|reuse")->required();
  report->add_option("--out", out, "summary file to write (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, std::cout, std::cerr) == 0 ? 0 : 1;
  }

  try {
    if (*synth) return cmd_synth(spec, out, private_buffers);
    if (*sim) {
      if (*sim_seed) sim_args.seed = seed_value;
      return cmd_sim(sim_args);
    }
    if (*sweep) return cmd_sweep(plan, out, sweep_sets, *sweep_seed ? std::optional(seed_value) : std::nullopt, jobs);
    if (*report) return cmd_report(csv, scenario, out);
  } catch (const aradse::CapacityError& e) {
    std::cerr << "error: capacity: " << e.what() << "\n";
  } catch (const aradse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}

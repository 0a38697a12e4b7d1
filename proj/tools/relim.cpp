/*
 * Copyright 2026 The relim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// relim: command-line front end. Problems travel as text on stdin/stdout so
// subcommands compose with pipes; diagnostics go to stderr.

#include <atomic>
#include <iostream>
#include <iterator>
#include <mutex>

#include <CLI11.hpp>

#include "relim/families.hpp"
#include "relim/json_io.hpp"
#include "relim/server.hpp"
#include "relim/sim/runner.hpp"

namespace {

using namespace relim;

enum Exit { kOk = 0, kVerdictFail = 1, kUsage = 2, kResource = 3 };

struct Globals {
  bool json = false;
  unsigned jobs = 1;
  std::size_t cap = cap_from_env();
  std::string out = "-";
  EngineOptions engine() const { return EngineOptions{cap, jobs}; }
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  return read_file(path);
}

void emit(const Globals& g, const std::string& text) {
  if (g.out == "-")
    std::cout << text;
  else
    write_file(g.out, text);
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

// Every run states its resolved configuration on stderr.
void announce(const std::string& cmd, const Globals& g, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::cerr << "# relim " << cmd << " cap=" << g.cap << " jobs=" << g.jobs << " json=" << (g.json ? 1 : 0);
  for (const auto& [k, v] : extra) std::cerr << " " << k << "=" << v;
  std::cerr << "\n";
}

Problem load_problem(const std::string& path, const Globals& g) { return parse_problem(read_input(path), g.engine()); }

std::string map_text(const std::map<std::string, std::string>& m) {
  std::string s;
  for (const auto& [a, b] : m) s += a + " -> " + b + "\n";
  return s;
}

// "A=X B=Y,Z" into a set-valued relaxation map; unlisted labels keep their name.
RelaxationMap parse_relaxation_map(const Problem& p1, const Problem& p2, const std::string& text) {
  RelaxationMap out = identity_relaxation(p1, p2);
  for (const auto& pair : detail::split_ws(text)) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed map entry '" + pair + "'");
    std::string from = pair.substr(0, eq);
    if (!p1.has_label(from)) throw InvalidArgument("map mentions unknown label '" + from + "'");
    LabelSet s(p2.num_labels());
    for (const auto& t : detail::split_on(pair.substr(eq + 1), ',')) {
      if (!p2.has_label(t)) throw InvalidArgument("map target '" + t + "' is not a label of the second problem");
      s.insert(p2.label(t));
    }
    out[p1.label(from)] = s;
  }
  return out;
}

ZVector parse_z(const std::string& z, std::size_t s) { return ZVector{parse_size_list(z), s}; }

std::string chain_text(const ChainReport& rep) {
  std::string s = "start: " + problem_handle(rep.start) + (rep.start_zero_round ? " (0-round solvable)" : "") + "\n";
  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    const auto& st = rep.steps[i];
    s += "step " + std::to_string(i + 1) + ": " + st.directive + " | " + std::to_string(st.stepped.num_labels()) +
         " stepped labels -> " + std::to_string(st.problem.num_labels()) + " labels, relaxation " +
         (st.relaxation.ok ? "ok" : "FAILED") + (st.zero_round ? ", 0-round solvable" : "") + "\n";
  }
  for (const auto& w : rep.warnings) s += "warning: " + w + "\n";
  s += "stop: " + rep.stop_reason + (rep.detail.empty() ? "" : " (" + rep.detail + ")") + "\n";
  s += "length: " + std::to_string(rep.length()) + "\n";
  if (!rep.steps.empty()) s += "final:\n" + render_problem(rep.steps.back().problem, false);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relim: round elimination engine, problem families and hypergraph MIS simulator"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--cap", g.cap, "Resource cap (default from RELIM_CAP)")->check(CLI::PositiveNumber);
  app.add_option("-o,--out", g.out, "Output path, '-' for stdout");

  int code = kOk;
  std::function<void()> action;

  // ---- problem ----
  auto* problem = app.add_subcommand("problem", "Parse and render problems");
  problem->require_subcommand(1);
  std::string in_path = "-";
  bool condensed = false;
  for (const char* name : {"parse", "render"}) {
    auto* sc = problem->add_subcommand(name, std::string(name) + " a problem text");
    sc->add_option("input", in_path, "Problem file, '-' for stdin");
    sc->add_flag("--condensed", condensed, "Condensed regex-like rendering");
    sc->callback([&, name] {
      action = [&, name] {
        announce(std::string("problem ") + name, g, {{"condensed", condensed ? "1" : "0"}});
        Problem p = load_problem(in_path, g);
        if (g.json)
          emit_json(g, problem_json(p, condensed));
        else
          emit(g, render_problem(p, condensed));
      };
    });
  }

  // ---- re ----
  auto* re = app.add_subcommand("re", "Round elimination steps");
  re->require_subcommand(1);
  bool provenance = false;
  std::string side = "node";
  auto* re_step_cmd = re->add_subcommand("step", "Universal step: the intermediate problem");
  re_step_cmd->add_option("input", in_path);
  re_step_cmd->add_flag("--condensed", condensed);
  re_step_cmd->callback([&] {
    action = [&] {
      announce("re step", g, {});
      SetProblem sp = re_step(load_problem(in_path, g), g.engine());
      if (g.json)
        emit_json(g, problem_json(sp.problem, condensed));
      else
        emit(g, render_problem(sp.problem, condensed));
    };
  });
  auto* full = re->add_subcommand("fullstep", "Both steps with fresh label names");
  full->add_option("input", in_path);
  full->add_flag("--condensed", condensed);
  full->add_flag("--provenance", provenance, "Print label provenance to stderr");
  full->callback([&] {
    action = [&] {
      announce("re fullstep", g, {});
      StepResult st = full_step(load_problem(in_path, g), g.engine());
      if (provenance)
        for (const auto& [n, s] : st.provenance) std::cerr << n << " = " << s << "\n";
      if (g.json)
        emit_json(g, step_json(st, condensed));
      else
        emit(g, render_problem(st.problem, condensed));
    };
  });
  auto* diag = re->add_subcommand("diagram", "Hasse diagram of the strength order");
  diag->add_option("input", in_path);
  diag->add_option("--side", side)->check(CLI::IsMember({"node", "edge"}));
  diag->callback([&] {
    action = [&] {
      announce("re diagram", g, {{"side", side}});
      Problem p = load_problem(in_path, g);
      json d = diagram_json(p, side == "edge");
      if (g.json) {
        emit_json(g, d);
        return;
      }
      std::string s;
      for (const auto& grp : d["groups"]) {
        std::string names;
        for (const auto& n : grp) names += (names.empty() ? "" : "=") + n.get<std::string>();
        s += "group " + names + "\n";
      }
      for (const auto& e : d["edges"]) s += e[0].get<std::string>() + " -> " + e[1].get<std::string>() + "\n";
      emit(g, s);
    };
  });

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "Zero-round, relaxation, equivalence and chains");
  analyze->require_subcommand(1);
  std::string second, map_spec, expect, script_path, pi_z;
  std::size_t pi_s = 1, chain_cap = 8;
  auto* zr = analyze->add_subcommand("zeroround", "Is the problem 0-round solvable in the PN model?");
  zr->add_option("input", in_path);
  zr->add_option("--expect", expect, "Fail unless the verdict matches")->check(CLI::IsMember({"solvable", "unsolvable"}));
  zr->callback([&] {
    action = [&] {
      announce("analyze zeroround", g, {{"expect", expect.empty() ? "none" : expect}});
      Problem p = load_problem(in_path, g);
      ZeroRoundResult z = zero_round_solvable(p);
      if (g.json)
        emit_json(g, zero_round_json(p, z));
      else
        emit(g, std::string(z.solvable ? "solvable" : "unsolvable") +
                    (z.witness ? " witness: " + render_configuration(p, *z.witness) : "") + "\n");
      if (!expect.empty() && (expect == "solvable") != z.solvable) code = kVerdictFail;
    };
  });
  auto* rx = analyze->add_subcommand("relaxation", "Does the first problem relax to the second?");
  rx->add_option("first", in_path)->required();
  rx->add_option("second", second)->required();
  rx->add_option("--map", map_spec, "Label map 'A=X B=Y,Z'; identity on unlisted labels");
  rx->callback([&] {
    action = [&] {
      announce("analyze relaxation", g, {{"map", map_spec.empty() ? "identity" : map_spec}});
      Problem p1 = load_problem(in_path, g), p2 = load_problem(second, g);
      RelaxationResult r = is_relaxation(p1, p2, parse_relaxation_map(p1, p2, map_spec));
      if (g.json)
        emit_json(g, relaxation_json(p1, p2, r));
      else
        emit(g, r.ok ? "relaxation\n" : "not a relaxation: " + r.failure + "\n");
      if (!r.ok) code = kVerdictFail;
    };
  });
  auto* eq = analyze->add_subcommand("equiv", "Find a label renaming making the problems equal");
  eq->add_option("first", in_path)->required();
  eq->add_option("second", second)->required();
  eq->callback([&] {
    action = [&] {
      announce("analyze equiv", g, {});
      Problem p1 = load_problem(in_path, g), p2 = load_problem(second, g);
      auto m = find_renaming_equivalence(p1, p2);
      if (g.json) {
        json j = {{"equivalent", m.has_value()}};
        if (m) j["renaming"] = renaming_json(*m);
        emit_json(g, j);
      } else {
        emit(g, m ? "equivalent\n" + map_text(*m) : "not equivalent\n");
      }
      if (!m) code = kVerdictFail;
    };
  });
  auto* chain = analyze->add_subcommand("chain", "Run a relaxation chain");
  chain->add_option("input", in_path, "Start problem (omit with --pi-z)");
  chain->add_option("--script", script_path, "Directive file, one line per step");
  chain->add_option("--steps", chain_cap, "Maximum chain length")->check(CLI::NonNegativeNumber);
  std::size_t pi_delta = 0, pi_rank = 0;
  chain->add_option("--pi-z", pi_z, "Start at the family member with this z and follow its schedule");
  chain->add_option("--pi-s", pi_s);
  chain->add_option("--delta", pi_delta);
  chain->add_option("--rank", pi_rank);
  chain->callback([&] {
    action = [&] {
      Problem start;
      std::vector<ChainDirective> ds;
      if (!pi_z.empty()) {
        if (pi_delta == 0 || pi_rank == 0) throw InvalidArgument("--pi-z needs --delta and --rank");
        ZVector zv = parse_z(pi_z, pi_s);
        start = pi_family(zv, pi_delta, pi_rank);
        ds = pi_chain_directives(zv, pi_delta, pi_rank, g.engine());
        if (chain_cap < ds.size()) ds.resize(chain_cap);
        chain_cap = ds.size();
      } else {
        start = load_problem(in_path, g);
      }
      if (!script_path.empty()) {
        ds.clear();
        auto ext = pi_directive_extension(start.delta(), start.rank(), g.engine());
        for (const auto& line : detail::split_on(read_file(script_path), '\n'))
          if (!detail::trim(line).empty() && detail::trim(line)[0] != '#')
            ds.push_back(parse_directive(line, start, ext, g.engine()));
      }
      announce("analyze chain", g, {{"steps", std::to_string(chain_cap)}, {"directives", std::to_string(ds.size())}});
      ChainReport rep = run_chain(start, ds, chain_cap, g.engine());
      if (g.json)
        emit_json(g, chain_json(rep));
      else
        emit(g, chain_text(rep));
      if (rep.stop_reason == "resource")
        code = kResource;
      else if (rep.stop_reason != "cap" && rep.stop_reason != "zero-round")
        code = kVerdictFail;
    };
  });

  // ---- family ----
  auto* family = app.add_subcommand("family", "Generate problem families");
  family->require_subcommand(1);
  std::size_t delta = 3, rank = 2, colors = 3, fs = 1, fq = 1;
  std::string fz;
  auto family_out = [&](const std::string& name, const std::function<Problem()>& make) {
    action = [&, name, make] {
      announce("family " + name, g, {{"delta", std::to_string(delta)}, {"rank", std::to_string(rank)}});
      Problem p = make();
      if (g.json)
        emit_json(g, problem_json(p, condensed));
      else
        emit(g, render_problem(p, condensed));
    };
  };
  auto* fmis = family->add_subcommand("mis", "Graph MIS");
  fmis->add_option("--delta", delta);
  fmis->add_flag("--condensed", condensed);
  fmis->callback([&] { family_out("mis", [&] { return mis_graph_problem(delta); }); });
  auto* fcol = family->add_subcommand("coloring", "Plain hypergraph coloring");
  auto* fful = family->add_subcommand("colorful", "Colorful hypergraph coloring");
  for (auto* sc : {fcol, fful}) {
    sc->add_option("--colors", colors);
    sc->add_option("--delta", delta);
    sc->add_option("--rank", rank);
    sc->add_flag("--condensed", condensed);
  }
  fcol->callback([&] { family_out("coloring", [&] { return plain_hypergraph_coloring(colors, delta, rank); }); });
  fful->callback([&] { family_out("colorful", [&] { return colorful_coloring(colors, delta, rank); }); });
  auto* ffp = family->add_subcommand("fixedpoint", "The coloring fixed point");
  ffp->add_option("--delta", delta);
  ffp->add_option("--rank", rank);
  ffp->add_flag("--condensed", condensed);
  ffp->callback([&] { family_out("fixedpoint", [&] { return coloring_fixed_point(delta, rank); }); });
  auto* fpi = family->add_subcommand("pi", "The lower-bound family member for (z, s)");
  fpi->add_option("--z", fz, "Comma-separated z")->required();
  fpi->add_option("--s", fs)->required();
  fpi->add_option("--delta", delta);
  fpi->add_option("--rank", rank);
  fpi->add_flag("--condensed", condensed);
  fpi->callback([&] { family_out("pi", [&] { return pi_family(parse_z(fz, fs), delta, rank); }); });

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "Mechanically check the fixed point and one-step claims");
  verify->require_subcommand(1);
  auto* vfp = verify->add_subcommand("fixedpoint", "The fixed point steps to itself");
  vfp->add_option("--delta", delta);
  vfp->add_option("--rank", rank);
  vfp->callback([&] {
    action = [&] {
      announce("verify fixedpoint", g, {{"delta", std::to_string(delta)}, {"rank", std::to_string(rank)}});
      FixedPointResult r = verify_fixed_point(delta, rank, g.engine());
      if (g.json)
        emit_json(g, fixed_point_json(r));
      else
        emit(g, std::string(r.ok ? "fixed point\n" : "not a fixed point\n") + map_text(r.renaming));
      if (!r.ok) code = kVerdictFail;
    };
  });
  auto* vos = verify->add_subcommand("onestep", "One step raises z_q by one");
  vos->add_option("--z", fz)->required();
  vos->add_option("--s", fs)->required();
  vos->add_option("--q", fq)->required();
  vos->add_option("--delta", delta);
  vos->add_option("--rank", rank);
  vos->callback([&] {
    action = [&] {
      announce("verify onestep", g,
               {{"z", fz}, {"s", std::to_string(fs)}, {"q", std::to_string(fq)}, {"delta", std::to_string(delta)},
                {"rank", std::to_string(rank)}});
      OneStepResult r = verify_onestep(parse_z(fz, fs), fq, delta, rank, g.engine());
      if (g.json) {
        emit_json(g, onestep_json(r));
      } else {
        std::string s = r.ok ? "ok: steps to z=" + z_text(r.next_z) + " s=" + std::to_string(r.next_z.s) + "\n"
                             : "failed: " + r.failure + "\n";
        s += "E* constructions agree: " + std::string(r.estar_agree ? "yes" : "no") + " (" +
             std::to_string(r.estar_size) + " configurations)\n";
        emit(g, s + map_text(r.renaming));
      }
      if (!r.ok) code = kVerdictFail;
    };
  });

  // ---- sim ----
  auto* sim_cmd = app.add_subcommand("sim", "Hypergraph generators and distributed MIS simulation");
  sim_cmd->require_subcommand(1);
  std::string gen = "random", graph_path, alg = "trivial", trace_path = "relim-trace.json", um_solver = "trivial";
  std::string kind = "mis", solution_path;
  std::size_t n = 50, depth = 2, repeat = 1;
  std::uint64_t seed = 1;
  bool check = false;
  auto gen_opts = [&](CLI::App* sc) {
    sc->add_option("--gen", gen)->check(CLI::IsMember({"random", "linear-hypertree", "single-edge", "from-file"}));
    sc->add_option("--graph", graph_path, "Hypergraph JSON for --gen from-file");
    sc->add_option("--n", n);
    sc->add_option("--delta", delta);
    sc->add_option("--rank", rank);
    sc->add_option("--seed", seed);
    sc->add_option("--depth", depth, "Depth for linear-hypertree");
  };
  auto make_graph = [&](std::uint64_t sd) {
    return generate_hypergraph(graph_path.empty() ? gen : "from-file", n, delta, rank, sd, depth, graph_path);
  };
  auto sim_config = [&]() -> std::vector<std::pair<std::string, std::string>> {
    return {{"gen", graph_path.empty() ? gen : "from-file"}, {"n", std::to_string(n)},
            {"delta", std::to_string(delta)}, {"rank", std::to_string(rank)}, {"seed", std::to_string(seed)}};
  };
  auto* sgen = sim_cmd->add_subcommand("gen", "Write a hypergraph as JSON");
  gen_opts(sgen);
  sgen->callback([&] {
    action = [&] {
      announce("sim gen", g, sim_config());
      emit_json(g, hypergraph_json(make_graph(seed)));
    };
  });
  auto* srun = sim_cmd->add_subcommand("run", "Run an algorithm and optionally check its output");
  gen_opts(srun);
  srun->add_option("--alg", alg)
      ->check(CLI::IsMember({"trivial", "slowdelta", "delta2", "indep-r", "um-greedy", "um-build"}));
  srun->add_option("--um-solver", um_solver, "MIS solver inside the UM construction")
      ->check(CLI::IsMember({"trivial", "slowdelta", "delta2", "indep-r"}));
  srun->add_flag("--check", check, "Validate the output with the checker");
  srun->add_option("--trace", trace_path, "Trace file");
  srun->add_option("--repeat", repeat, "Runs on seeds seed, seed+1, ... (random generator)")->check(CLI::PositiveNumber);
  srun->callback([&] {
    action = [&] {
      auto cfg = sim_config();
      cfg.push_back({"alg", alg});
      cfg.push_back({"check", check ? "1" : "0"});
      cfg.push_back({"repeat", std::to_string(repeat)});
      cfg.push_back({"trace", trace_path});
      announce("sim run", g, cfg);
      std::vector<json> results(repeat);
      std::atomic<bool> failed{false};
      std::mutex err_mu;
      std::string first_error;
      detail::parallel_for(repeat, g.jobs, [&](std::size_t i, unsigned) {
        std::uint64_t sd = seed + i;
        json r = {{"seed", sd}};
        try {
          sim::Hypergraph h = make_graph(sd);
          sim::AlgorithmRun run = sim::run_algorithm(alg, h, um_solver);
          r["nodes"] = h.num_nodes();
          r["hyperedges"] = h.num_edges();
          r["max_degree"] = h.max_degree();
          r["max_rank"] = h.max_rank();
          r["trace"] = trace_json(run.trace);
          if (run.is_coloring) {
            r["classes"] = run.classes;
            json col = json::object();
            for (int v = 0; v < h.num_nodes(); ++v) col[std::to_string(h.node_id(v))] = run.color[static_cast<std::size_t>(v)];
            r["coloring"] = col;
          } else {
            json in = json::array();
            for (int v = 0; v < h.num_nodes(); ++v)
              if (run.in[static_cast<std::size_t>(v)]) in.push_back(h.node_id(v));
            r["mis"] = in;
            if (alg == "um-greedy") r["classes"] = run.classes;
          }
          if (check) {
            r["check"] = check_report_json(run.check);
            if (!run.check.ok()) failed = true;
          }
        } catch (const sim::InvariantViolation& e) {
          r["invariant_violation"] = e.what();
          failed = true;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> l(err_mu);
          if (first_error.empty()) first_error = e.what();
        }
        results[i] = r;
      });
      if (!first_error.empty()) throw InvalidArgument(first_error);
      json all = repeat == 1 ? results[0] : json(results);
      write_file(trace_path, all.dump(2) + "\n");
      if (g.json) {
        emit_json(g, all);
      } else {
        std::string s;
        for (const auto& r : results) {
          s += "seed " + r["seed"].dump() + ": n=" + r["nodes"].dump() + " m=" + r["hyperedges"].dump() +
               " rounds=" + r["trace"]["rounds"].dump() + " phases=" + r["trace"]["phases"].dump();
          if (r.contains("classes")) s += " classes=" + r["classes"].dump();
          if (r.contains("check")) s += r["check"]["ok"].get<bool>() ? " check=ok" : " check=FAILED";
          if (r.contains("invariant_violation")) s += " invariant violated: " + r["invariant_violation"].get<std::string>();
          s += "\n";
        }
        emit(g, s);
      }
      if (failed) code = kVerdictFail;
    };
  });
  auto* scheck = sim_cmd->add_subcommand("check", "Check a solution file against a hypergraph");
  scheck->add_option("--graph", graph_path)->required();
  scheck->add_option("--solution", solution_path, "JSON: {\"mis\": [ids]} or {\"coloring\": {id: color}} or "
                                                  "{\"matching\": [edge ids]}")->required();
  scheck->add_option("--kind", kind)->check(
      CLI::IsMember({"mis", "matching-maximal", "coloring", "colorful", "unique-maximum"}));
  scheck->callback([&] {
    action = [&] {
      announce("sim check", g, {{"kind", kind}});
      sim::Hypergraph h = hypergraph_from_json(parse_json(read_file(graph_path)));
      json sol = parse_json(read_file(solution_path));
      sim::SolutionKind k = sim::parse_solution_kind(kind);
      sim::CheckReport rep;
      try {
        if (k == sim::SolutionKind::Mis) {
          std::vector<bool> in(static_cast<std::size_t>(h.num_nodes()));
          for (const auto& v : sol.at("mis")) in[static_cast<std::size_t>(h.node_index(v.get<sim::NodeId>()))] = true;
          rep = sim::check_solution(h, k, in);
        } else if (k == sim::SolutionKind::MatchingMaximal) {
          std::vector<bool> in(static_cast<std::size_t>(h.num_edges()));
          for (const auto& e : sol.at("matching")) in[static_cast<std::size_t>(h.edge_index(e.get<std::uint64_t>()))] = true;
          rep = sim::check_solution(h, k, in);
        } else {
          std::vector<std::uint64_t> col(static_cast<std::size_t>(h.num_nodes()), 0);
          for (const auto& [id, c] : sol.at("coloring").items())
            col[static_cast<std::size_t>(h.node_index(std::stoull(id)))] = c.get<std::uint64_t>();
          rep = sim::check_solution(h, k, col);
        }
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed solution: ") + e.what());
      }
      if (g.json) {
        emit_json(g, check_report_json(rep));
      } else {
        std::string s = rep.ok() ? "ok\n" : "";
        for (const auto& v : rep.violations)
          s += v.kind + " at " + (v.on_edge ? "hyperedge " : "node ") + std::to_string(v.id) + "\n";
        emit(g, s);
      }
      if (!rep.ok()) code = kVerdictFail;
    };
  });

  // ---- serve ----
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  server::ServeOptions so;
  serve->add_option("--bind", so.host, "Address to bind (loopback by default)");
  serve->add_option("--port", so.port);
  serve->add_option("--history-file", so.history_file, "Replay and append the handle history here");
  serve->callback([&] {
    action = [&] {
      announce("serve", g, {{"bind", so.host}, {"port", std::to_string(so.port)},
                            {"history", so.history_file.empty() ? "none" : so.history_file}});
      if (!server::serve(so, g.engine())) throw InvalidArgument("cannot listen on " + so.host + ":" + std::to_string(so.port));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    action();
  } catch (const ResourceLimitError& e) {
    std::cerr << "relim: resource cap exceeded: " << e.what() << "\n";
    return kResource;
  } catch (const sim::InvariantViolation& e) {
    std::cerr << "relim: invariant violated: " << e.what() << "\n";
    return kVerdictFail;
  } catch (const ParseError& e) {
    std::cerr << "relim: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "relim: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

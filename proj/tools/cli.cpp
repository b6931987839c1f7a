#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mechflow/mechflow.hpp"

namespace mechflow::cli {

namespace {

using nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw IoError("cannot write " + path);
}

const std::map<std::string, StopMode> kModes{{"single", StopMode::Single},
                                             {"per-row", StopMode::PerRow}};
const std::map<std::string, DescentStrategy> kDescents{{"naive", DescentStrategy::Naive},
                                                       {"a", DescentStrategy::VersionA},
                                                       {"b", DescentStrategy::VersionB}};

std::string mode_name(StopMode m) { return m == StopMode::Single ? "single" : "per-row"; }
std::string descent_name(DescentStrategy d) {
  switch (d) {
    case DescentStrategy::Naive:
      return "naive";
    case DescentStrategy::VersionA:
      return "a";
    case DescentStrategy::VersionB:
      return "b";
  }
  return "?";
}

struct SolverFlags {
  StopMode mode = StopMode::Single;
  DescentStrategy descent = DescentStrategy::Naive;
  std::optional<Weight> c_sup;

  void attach(CLI::App* app) {
    app->add_option("--mode", mode, "stop mode")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    app->add_option("--descent", descent, "descent strategy")
        ->transform(CLI::CheckedTransformer(kDescents, CLI::ignore_case));
    app->add_option("--c-sup", c_sup, "initial row height (default: max c + 1)");
  }

  SolveOptions options() const {
    SolveOptions o;
    o.mode = mode;
    o.descent = descent;
    o.c_sup_override = c_sup;
    return o;
  }
};

json flows_json(const std::vector<FlowTriplet>& flows) {
  json arr = json::array();
  for (const auto& t : flows) arr.push_back({t.row() + 1, t.col() + 1, t.value()});
  return arr;
}

json vector_json(const WeightVector& v) {
  json arr = json::array();
  for (Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

std::string certificate_text(const CertificateReport& c) {
  static const char* names[] = {"row sums", "column sums", "nonnegativity", "dual feasibility",
                                "complementary slackness", "cost identity"};
  std::string s;
  for (const auto& v : c.violations)
    s += std::string(names[static_cast<int>(v.check)]) + " violated at " + v.witness + "\n";
  return s;
}

int cmd_solve(const std::string& path, const SolverFlags& flags, bool verify_each, bool show_flows,
              bool show_duals, bool as_json, std::ostream& out, std::ostream& err) {
  const Instance inst = parse_instance(read_input(path));
  SolveOptions opts = flags.options();
  opts.verify_each_cycle = verify_each;
  const SolveReport r = solve(inst, opts);
  const bool ok = r.certificate.certified();
  if (as_json) {
    json j{{"cost", r.cost},
           {"cycles", r.cycles},
           {"descents", r.descents},
           {"scanned_cells", r.scanned_cells},
           {"elapsed_seconds", r.elapsed.count()},
           {"c_sup", r.c_sup},
           {"mode", mode_name(opts.mode)},
           {"descent", descent_name(opts.descent)},
           {"certified", ok},
           {"flows", flows_json(r.flows)},
           {"alpha", vector_json(r.alpha)},
           {"beta", vector_json(r.beta)}};
    out << j.dump(2) << "\n";
  } else {
    out << "cost " << r.cost << "\n"
        << "cycles " << r.cycles << "\n"
        << "elapsed_ms " << std::fixed << std::setprecision(3) << r.elapsed.count() * 1e3 << "\n"
        << "certified " << (ok ? "yes" : "no") << "\n";
    out.unsetf(std::ios::floatfield);
    if (show_flows)
      for (const auto& t : r.flows)
        out << "flow " << t.row() + 1 << " " << t.col() + 1 << " " << t.value() << "\n";
    if (show_duals) {
      for (Index i = 0; i < r.alpha.size(); ++i) out << "alpha " << i + 1 << " " << r.alpha(i) << "\n";
      for (Index j = 0; j < r.beta.size(); ++j) out << "beta " << j + 1 << " " << r.beta(j) << "\n";
    }
  }
  if (!ok) err << certificate_text(r.certificate);
  return ok ? kOk : kNotCertified;
}

int cmd_trace(const std::string& path, std::optional<Weight> c_sup, std::ostream& out) {
  const Instance inst = parse_instance(read_input(path));
  SolveOptions opts;
  opts.trace = true;
  opts.c_sup_override = c_sup;
  const SolveReport r = solve(inst, opts);
  out << "# cycle\td\ti_c\tj_c\tlambda\tbreak_parent\tbreak_child\tdirection\n";
  for (const auto& e : r.trace) out << format_trace_line(e, opts.mode) << "\n";
  out << "# cost " << r.cost << "\n";
  return r.certificate.certified() ? kOk : kNotCertified;
}

int cmd_verify(const std::string& path, const SolverFlags& flags, Index cap, bool as_json,
               std::ostream& out, std::ostream& err) {
  const Instance inst = parse_instance(read_input(path));
  const SolveReport r = solve(inst, flags.options());
  const OracleResult o = oracle_solve(inst, OracleOptions{cap});
  const bool oracle_ok = verify_optimality(inst, o.flows, o.alpha, o.beta).certified();
  const bool agree = r.cost == o.cost;
  const bool ok = agree && oracle_ok && r.certificate.certified();
  if (as_json) {
    out << json{{"solver_cost", r.cost},
                {"oracle_cost", o.cost},
                {"solver_certified", r.certificate.certified()},
                {"oracle_certified", oracle_ok},
                {"agree", agree}}
               .dump(2)
        << "\n";
  } else {
    out << "solver_cost " << r.cost << "\n"
        << "oracle_cost " << o.cost << "\n"
        << "agree " << (ok ? "yes" : "no") << "\n";
  }
  if (!r.certificate.certified()) err << certificate_text(r.certificate);
  return ok ? kOk : kNotCertified;
}

int cmd_bounds(Index m_lo, Index m_hi, Index n_lo, Index n_hi, bool as_json, std::ostream& out) {
  if (m_lo < 1 || n_lo < 1 || m_lo > m_hi || n_lo > n_hi)
    throw std::invalid_argument("bounds ranges must satisfy 1 <= lo <= hi");
  json rows = json::array();
  if (!as_json) {
    out << "m\\n";
    for (Index n = n_lo; n <= n_hi; ++n) out << "\t" << n;
    out << "\n";
  }
  for (Index m = m_lo; m <= m_hi; ++m) {
    if (!as_json) out << m;
    for (Index n = n_lo; n <= n_hi; ++n) {
      const std::uint64_t zp = z_prime_sup(m, n);
      if (as_json)
        rows.push_back({{"m", m}, {"n", n}, {"z_prime_sup", zp}, {"z_sup", z_sup(m, n)}});
      else
        out << "\t" << zp;
    }
    if (!as_json) out << "\n";
  }
  if (as_json) out << rows.dump(2) << "\n";
  return kOk;
}

int cmd_bench(const BenchConfig& cfg, bool timing, bool as_json, std::ostream& out) {
  const BenchReport rep = run_bench(cfg);
  if (as_json) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
      json row{{"n", r.n},
               {"mode", mode_name(r.mode)},
               {"descent", descent_name(r.descent)},
               {"reps", r.reps},
               {"mean_cycles", r.mean_cycles},
               {"rms_cycles", r.rms_cycles},
               {"mean_scanned_fraction", r.mean_scanned_fraction}};
      if (timing) {
        row["mean_solve_seconds"] = r.mean_solve_seconds;
        row["rms_solve_seconds"] = r.rms_solve_seconds;
        row["mean_setup_seconds"] = r.mean_setup_seconds;
      }
      rows.push_back(row);
    }
    out << json{{"seed", cfg.seed},
                {"reps", cfg.reps},
                {"regime", cfg.regime == Regime::Degenerate ? "degenerate" : "non-degenerate"},
                {"rows", rows}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "n\tmode\tdescent\treps\tmean_cycles\trms_cycles\tscanned_fraction";
  if (timing) out << "\tmean_solve_s\trms_solve_s\tmean_setup_s";
  out << "\n";
  for (const auto& r : rep.rows) {
    out << r.n << "\t" << mode_name(r.mode) << "\t" << descent_name(r.descent) << "\t" << r.reps
        << "\t" << r.mean_cycles << "\t" << r.rms_cycles << "\t" << r.mean_scanned_fraction;
    if (timing)
      out << "\t" << r.mean_solve_seconds << "\t" << r.rms_solve_seconds << "\t"
          << r.mean_setup_seconds;
    out << "\n";
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transportation problem solver (parametric tree method)", "mechflow"};
  app.require_subcommand(1);

  SolverFlags flags;
  bool as_json = false;
  std::string path;

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance file and certify the optimum");
  bool verify_each = false, show_flows = false, show_duals = false;
  solve_cmd->add_option("file", path, "instance file, - for stdin")->required();
  flags.attach(solve_cmd);
  solve_cmd->add_flag("--verify-each-cycle", verify_each, "check all invariants after every cycle");
  solve_cmd->add_flag("--flows", show_flows, "print nonzero flows");
  solve_cmd->add_flag("--duals", show_duals, "print row and column heights");
  solve_cmd->add_flag("--json", as_json, "JSON report");

  auto* gen_cmd = app.add_subcommand("generate", "write an instance in the text format");
  std::string kind, out_path;
  GeneratorConfig gen;
  gen.m = gen.n = 10;
  gen.a_max = gen.b_max = 100;
  gen.c_max = 100;
  bool degenerate = false;
  gen_cmd->add_option("kind", kind, "random | bench | worst-case | assignment")
      ->required()
      ->check(CLI::IsMember({"random", "bench", "worst-case", "assignment"}));
  gen_cmd->add_option("--m", gen.m, "rows (random)");
  gen_cmd->add_option("--n", gen.n, "columns, or size for bench / worst-case / assignment");
  gen_cmd->add_option("--a-max", gen.a_max, "largest supply (random)");
  gen_cmd->add_option("--b-max", gen.b_max, "largest demand (random)");
  gen_cmd->add_option("--c-max", gen.c_max, "largest cost (random, assignment)");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_flag("--degenerate", degenerate, "bench: c_max = 20");
  gen_cmd->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* trace_cmd = app.add_subcommand("trace", "per-cycle event lines (single stop, naive descent)");
  std::optional<Weight> trace_c_sup;
  trace_cmd->add_option("file", path, "instance file, - for stdin")->required();
  trace_cmd->add_option("--c-sup", trace_c_sup, "initial row height (default: max c + 1)");

  auto* verify_cmd = app.add_subcommand("verify", "compare the solver with the reference oracle");
  Index cap = OracleOptions{}.max_cells;
  verify_cmd->add_option("file", path, "instance file, - for stdin")->required();
  flags.attach(verify_cmd);
  verify_cmd->add_option("--max-cells", cap, "oracle size cap on m*n");
  verify_cmd->add_flag("--json", as_json, "JSON report");

  auto* bounds_cmd = app.add_subcommand("bounds", "grid of refined cycle-count upper bounds");
  Index m_lo = 1, m_hi = 10, n_lo = 1, n_hi = 10;
  bounds_cmd->add_option("--m-min", m_lo);
  bounds_cmd->add_option("--m-max", m_hi);
  bounds_cmd->add_option("--n-min", n_lo);
  bounds_cmd->add_option("--n-max", n_hi);
  bounds_cmd->add_flag("--json", as_json, "JSON report");

  auto* bench_cmd = app.add_subcommand("bench", "random-instance cycle and timing statistics");
  BenchConfig bench;
  bench.sizes = {10, 20, 30};
  bool no_timing = false;
  bench_cmd->add_option("--sizes", bench.sizes, "square sizes n")->delimiter(',');
  bench_cmd->add_option("--reps", bench.reps, "repetitions per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--threads", bench.threads, "worker threads");
  bench_cmd->add_flag("--degenerate", degenerate, "c_max = 20 instead of n^2");
  bench_cmd->add_option("--mode", bench.mode, "stop mode")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  bench_cmd->add_option("--descent", bench.descent, "descent strategy")
      ->transform(CLI::CheckedTransformer(kDescents, CLI::ignore_case));
  bench_cmd->add_flag("--no-timing", no_timing, "omit wall times (output is then reproducible)");
  bench_cmd->add_flag("--json", as_json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(path, flags, verify_each, show_flows, show_duals, as_json, out, err);
    if (*trace_cmd) return cmd_trace(path, trace_c_sup, out);
    if (*verify_cmd) return cmd_verify(path, flags, cap, as_json, out, err);
    if (*bounds_cmd) return cmd_bounds(m_lo, m_hi, n_lo, n_hi, as_json, out);
    if (*bench_cmd) {
      bench.regime = degenerate ? Regime::Degenerate : Regime::NonDegenerate;
      return cmd_bench(bench, !no_timing, as_json, out);
    }
    if (*gen_cmd) {
      Instance inst;
      if (kind == "random")
        inst = gen_random(gen);
      else if (kind == "bench")
        inst = gen_random(GeneratorConfig::benchmark(gen.n, degenerate, gen.seed));
      else if (kind == "worst-case")
        inst = gen_worst_case(gen.n);
      else
        inst = gen_assignment(gen.n, gen.c_max, gen.seed);
      write_output(out_path, serialize_instance(inst), out);
      return kOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace mechflow::cli

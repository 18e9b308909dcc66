#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lagro/engine.hpp"
#include "lagro/error.hpp"
#include "lagro/instances.hpp"
#include "lagro/multiplier.hpp"
#include "lagro/oracle.hpp"

namespace fs = std::filesystem;
using namespace lagro;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kInfeasible = 3, kCondition = 4, kLimit = 5 };

enum class LogLevel { Off, Info, Trace };

LogLevel log_level() {
  const char* env = std::getenv("LAGRO_LOG");
  if (env == nullptr) return LogLevel::Off;
  const std::string v = env;
  if (v == "trace" || v == "debug") return LogLevel::Trace;
  if (v == "info" || v == "1") return LogLevel::Info;
  return LogLevel::Off;
}

std::string fmt(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "]";
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const InfeasibleError& e) {
    std::cerr << "robust-infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConditionViolation& e) {
    std::cerr << "condition violation: " << e.what() << '\n';
    return kCondition;
  } catch (const LimitExceeded& e) {
    std::cerr << "limit exceeded: " << e.what() << '\n';
    return kLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

Scalar parse_arg(const std::string& text, const char* flag) {
  try {
    return parse_scalar(text);
  } catch (const std::exception&) {
    throw InputError(std::string(flag) + ": not a rational number: " + text);
  }
}

nlohmann::json trace_json(const TraceEvent& e) {
  return {{"event", e.kind},    {"iteration", e.iteration}, {"restarts", e.restarts}, {"lambda", to_string(e.lambda)},
          {"lb", e.lb.str()},   {"ub", e.ub.str()},         {"d_size", e.d_size},     {"r_size", e.r_size},
          {"cuts", e.cuts}};
}

struct SolveArgs {
  std::string path;
  std::string method = "ccg";
  std::string eps = "0";
  std::optional<std::string> lambda0;
  std::optional<std::string> trace_out;
  EngineOptions caps;
};

EngineOptions engine_options(const SolveArgs& a, std::ostream* trace) {
  EngineOptions o = a.caps;
  if (a.method == "benders") {
    o.method = Method::Benders;
  } else if (a.method != "ccg") {
    throw InputError("--method must be ccg or benders, got " + a.method);
  }
  o.eps = parse_arg(a.eps, "--eps");
  if (o.eps < 0) throw InputError("--eps must be nonnegative");
  if (a.lambda0) o.lambda0 = parse_arg(*a.lambda0, "--lambda0");
  const bool to_stderr = log_level() == LogLevel::Trace;
  if (trace != nullptr || to_stderr) {
    o.trace = [trace, to_stderr](const TraceEvent& e) {
      const std::string line = trace_json(e).dump();
      if (trace != nullptr) *trace << line << '\n';
      if (to_stderr) std::cerr << line << '\n';
    };
  }
  return o;
}

int cmd_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.path);
  std::unique_ptr<std::ofstream> trace;
  if (a.trace_out) {
    trace = std::make_unique<std::ofstream>(*a.trace_out);
    if (!*trace) throw InputError(*a.trace_out + ": cannot open for writing");
  }
  const Report r = solve_with_restarts(inst, engine_options(a, trace.get()));
  std::cout << "value\t" << r.value.str() << '\n';
  if (r.value.is_pos_inf()) {
    std::cout << "witness\t" << fmt(r.witness) << '\n';
  } else {
    std::cout << "x\t" << fmt(r.x) << '\n' << "x_index\t" << r.x_index << '\n';
  }
  std::cout << "iterations\t" << r.iterations << '\n'
            << "inner_iterations\t" << r.inner_iterations << '\n'
            << "restarts\t" << r.n_restarts << '\n'
            << "lambda\t" << to_string(r.lambda) << '\n'
            << "verified\t" << (r.verified ? "true" : "false") << '\n';
  char seconds[32];
  std::snprintf(seconds, sizeof seconds, "%.3f", r.seconds);
  std::cout << "seconds\t" << seconds << '\n';
  if (log_level() != LogLevel::Off) std::cerr << a.path << ": " << r.value.str() << " in " << seconds << " s\n";
  return r.value.is_pos_inf() ? kInfeasible : kOk;
}

// Smallest power of two attaining the worst case, then bisection below it.
template <class Inst>
std::optional<Interval> multiplier_interval(const Inst& inst, const Vec& x, const ExtValue& target) {
  Scalar hi = 1;
  for (int k = 0; k < 64; ++k, hi *= 2) {
    const ExtValue v = [&] {
      if constexpr (std::is_same_v<Inst, GeneralInstance>) return worst_case_L(inst, x, hi).value;
      else return worst_case_LI(inst, x, hi).value;
    }();
    if (v == target) return min_optimal_multiplier(inst, x, hi);
  }
  return std::nullopt;
}

int cmd_oracle(const std::string& path, const std::optional<std::size_t>& x_index) {
  const Instance inst = load_instance(path);
  return std::visit(
      [&](const auto& g) {
        Vec x;
        std::size_t index = 0;
        if (x_index) {
          if (*x_index >= g.X.size()) throw InputError("--x " + std::to_string(*x_index) + " is outside X");
          index = *x_index;
          x = g.X[index];
        } else {
          const TwoStageValue best = solve_two_stage_bruteforce(g);
          index = best.index;
          x = best.x;
        }
        WorstCase w;
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, GeneralInstance>) {
          w = worst_case_Q(g, x);
        } else {
          w = worst_case_QI(g, x);
        }
        std::cout << "value\t" << w.value.str() << '\n'
                  << "x\t" << fmt(x) << '\n'
                  << "x_index\t" << index << '\n'
                  << "worst_xi\t" << fmt(w.xi) << '\n';
        if (!w.value.is_finite()) return w.value.is_pos_inf() ? int(kInfeasible) : int(kOk);
        const std::optional<Interval> iv = multiplier_interval(g, x, w.value);
        std::cout << "multiplier\t"
                  << (iv ? "[" + to_string(iv->lo) + ", " + to_string(iv->hi) + "]" : std::string("none below 2^64"))
                  << '\n';
        return int(kOk);
      },
      inst);
}

void print_report(const ConditionReport& r) {
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    const ConditionResult& c = r.conditions[i];
    std::cout << (c.passed ? "PASS" : "FAIL") << '\t' << i + 1 << '\t' << c.name;
    if (!c.passed) std::cout << '\t' << c.witness;
    std::cout << '\n';
  }
  std::cout << "overall\t" << (r.overall ? "PASS" : "FAIL") << '\n';
}

int cmd_check(const std::string& path) {
  const Instance inst = load_instance(path);
  const ConditionReport r = std::visit(
      [](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, GeneralInstance>) return check_conditions_general(g);
        else return check_conditions_indicator(g);
      },
      inst);
  print_report(r);
  return r.overall ? kOk : kCondition;
}

int cmd_bound(const std::string& path, const std::string& source, bool lift) {
  const Instance inst = load_instance(path);
  const auto* g = std::get_if<GeneralInstance>(&inst);
  if (g == nullptr) throw InputError("bound: the polynomial multiplier bound applies to general instances only");
  UpperBoundSource src = UpperBoundSource::BruteForce;
  if (source == "interval") {
    src = UpperBoundSource::Interval;
  } else if (source != "brute") {
    throw InputError("--source must be brute or interval, got " + source);
  }
  const GeneralInstance& target = *g;
  if (!lift) {
    const ConditionReport r = check_bound_conditions(target);
    if (!r.overall) {
      print_report(r);
      return kCondition;
    }
  }
  const BoundInputs b = polynomial_lambda_bound(target, src, lift);
  std::cout << "source\t" << (src == UpperBoundSource::BruteForce ? "brute" : "interval") << '\n'
            << "lifted\t" << (b.lifted ? "true" : "false") << '\n'
            << "U\t" << to_string(b.U) << '\n'
            << "theta1\t" << to_string(b.theta1) << '\n'
            << "theta2\t" << to_string(b.theta2) << '\n'
            << "theta3\t" << to_string(b.theta3) << '\n'
            << "case1\t" << to_string(b.case1_bound) << '\n'
            << "case2\t" << to_string(b.case2_bound) << '\n'
            << "lambda_bar\t" << to_string(b.lambda_bar) << '\n';
  return kOk;
}

int cmd_bench(const std::string& dir, const std::optional<std::string>& out_path, const std::string& method) {
  if (!fs::is_directory(dir)) throw InputError(dir + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) { return a.stem() < b.stem(); });

  std::ostringstream table;
  table << "instance\tOpt\t#It.\tt(s)\tn_restarts\tvalue\n";
  int status = kOk;
  std::size_t verified = 0;
  for (const fs::path& file : files) {
    SolveArgs a;
    a.path = file.string();
    a.method = method;
    std::optional<Report> rep;
    const int code = guarded([&] {
      const Instance inst = load_instance(file);
      EngineOptions o = engine_options(a, nullptr);
      if (method == "benders" && std::holds_alternative<GeneralInstance>(inst)) o.method = Method::Ccg;
      rep = solve_with_restarts(inst, o);
      return int(kOk);
    });
    table << file.stem().string() << '\t';
    if (!rep) {
      if (status == kOk) status = code;
      table << "0/1\t-\t-\t-\terror\n";
      continue;
    }
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.3f", rep->seconds);
    verified += rep->verified ? 1 : 0;
    table << (rep->verified ? "1/1" : "0/1") << '\t' << rep->iterations << '\t' << seconds << '\t' << rep->n_restarts
          << '\t' << rep->value.str() << '\n';
  }
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw InputError(*out_path + ": cannot open for writing");
    out << table.str();
  } else {
    std::cout << table.str();
  }
  std::cerr << files.size() << " instances, " << verified << " verified optimal\n";
  return status;
}

int cmd_figure1(const std::string& gamma_text, std::size_t grid, const std::optional<std::string>& out_path) {
  if (grid == 0) throw InputError("--grid must be positive");
  const Scalar gamma = parse_arg(gamma_text, "--gamma");
  if (gamma <= 0) throw InputError("--gamma must be positive");
  const GeneralInstance g = gen_counterexample(gamma);
  std::ostringstream data;
  data << "lambda\tworst_case_L\n";
  for (std::size_t k = 0; k <= grid; ++k) {
    const Scalar lambda = Scalar(9 * static_cast<long>(k)) / Scalar(2 * static_cast<long>(grid));
    data << to_string(lambda) << '\t' << worst_case_L(g, {0}, lambda).value.str() << '\n';
  }
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw InputError(*out_path + ": cannot open for writing");
    out << data.str();
  } else {
    std::cout << data.str();
  }
  return kOk;
}

struct GenerateArgs {
  std::string family;
  std::uint64_t seed = 1;
  std::size_t size = 3;
  unsigned k = 1;
  std::string gamma = "1";
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  Instance inst;
  const RandomDims dims;
  if (a.family == "counterexample") {
    inst = gen_counterexample(parse_arg(a.gamma, "--gamma"));
  } else if (a.family == "interdiction") {
    inst = gen_interdiction(a.size, a.seed);
  } else if (a.family == "random-general") {
    inst = gen_random_general(dims, a.seed);
  } else if (a.family == "random-indicator") {
    RandomDims d;
    d.nc2 = 2;
    d.nd2 = 0;
    d.m = 3;
    inst = gen_random_indicator(d, a.seed);
  } else if (a.family == "homogeneous") {
    RandomDims d;
    d.magnitude = 1;
    inst = gen_homogeneous(d, a.seed);
  } else if (a.family == "network") {
    inst = gen_network_design_small(a.size, a.k);
  } else if (a.family == "restart") {
    inst = gen_restart_instance();
  } else {
    throw InputError("unknown family " + a.family);
  }
  save_instance(inst, a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact two-stage robust optimization with binary uncertainty via Lagrangian duality"};
  app.require_subcommand(1);
  int code = kOk;

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance with verification and restarts");
  s->add_option("instance", solve.path, "Instance file")->required();
  s->add_option("--method", solve.method, "ccg or benders (benders: indicator instances only)");
  s->add_option("--eps", solve.eps, "Absolute gap tolerance (rational)");
  s->add_option("--lambda0", solve.lambda0, "Initial multiplier (rational, > 0)");
  s->add_option("--trace-out", solve.trace_out, "Write JSON-lines trace records to this file");
  s->add_option("--max-inner", solve.caps.max_inner, "Inner iteration cap (default 10000)");
  s->add_option("--max-outer", solve.caps.max_outer, "Outer iteration cap (default 1000)");
  s->add_option("--max-restarts", solve.caps.max_restarts, "Restart cap (default 10)");
  s->callback([&] { code = guarded([&] { return cmd_solve(solve); }); });

  std::string oracle_path;
  std::optional<std::size_t> oracle_x;
  auto* o = app.add_subcommand("oracle", "Brute-force optimum, worst case and multiplier interval");
  o->add_option("instance", oracle_path, "Instance file")->required();
  o->add_option("--x", oracle_x, "Index into X (default: the brute-force minimiser)");
  o->callback([&] { code = guarded([&] { return cmd_oracle(oracle_path, oracle_x); }); });

  std::string check_path;
  auto* c = app.add_subcommand("check", "Check the closed-form multiplier conditions");
  c->add_option("instance", check_path, "Instance file")->required();
  c->callback([&] { code = guarded([&] { return cmd_check(check_path); }); });

  std::string bound_path, bound_source = "brute";
  bool bound_lift = false;
  auto* b = app.add_subcommand("bound", "Polynomial multiplier bound");
  b->add_option("instance", bound_path, "Instance file")->required();
  b->add_option("--source", bound_source, "Upper bound U: brute or interval");
  b->add_flag("--lift", bound_lift, "Lift non-homogeneous data first");
  b->callback([&] { code = guarded([&] { return cmd_bound(bound_path, bound_source, bound_lift); }); });

  std::string bench_dir, bench_method = "ccg";
  std::optional<std::string> bench_out;
  auto* be = app.add_subcommand("bench", "Solve every *.json in a directory and print a TSV table");
  be->add_option("suite", bench_dir, "Suite directory")->required();
  be->add_option("--out", bench_out, "Write the table to this file");
  be->add_option("--method", bench_method, "ccg or benders (general instances always use ccg)");
  be->callback([&] { code = guarded([&] { return cmd_bench(bench_dir, bench_out, bench_method); }); });

  std::string fig_gamma = "1";
  std::size_t fig_grid = 18;
  std::optional<std::string> fig_out;
  auto* f = app.add_subcommand("figure1", "Worst-case Lagrangian of the counterexample on a grid over [0, 9/2]");
  f->add_option("--gamma", fig_gamma, "Objective scale (rational, > 0)");
  f->add_option("--grid", fig_grid, "Number of grid intervals");
  f->add_option("--out", fig_out, "Write the data to this file");
  f->callback([&] { code = guarded([&] { return cmd_figure1(fig_gamma, fig_grid, fig_out); }); });

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a generated instance");
  g->add_option("family", gen.family,
                "counterexample, interdiction, random-general, random-indicator, homogeneous, network, restart")
      ->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--size", gen.size, "Follower size (interdiction) or node count (network)");
  g->add_option("--k", gen.k, "Failure budget (network)");
  g->add_option("--gamma", gen.gamma, "Objective scale (counterexample)");
  g->add_option("--out", gen.out, "Output file")->required();
  g->callback([&] { code = guarded([&] { return cmd_generate(gen); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  return code;
}

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halin/halin.hpp"

using namespace halin;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kParse = 2, kInapplicable = 3, kBudget = 4 };

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::MethodInapplicable:
    case ErrorKind::NotCubic: return kInapplicable;
    case ErrorKind::BudgetExceeded: return kBudget;
    default: return kInvalid;
  }
}

int report(const Error& e) {
  std::cerr << e.what() << "\n";
  return exit_code_for(e);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_validate(const std::string& file) {
  try {
    const HalinGraph g = load_instance(file);
    std::cerr << "valid: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, "
              << g.cycle_length() << " leaves\n";
    return kOk;
  } catch (const Error& e) {
    return report(e);
  }
}

int cmd_chi(const std::string& file, const std::string& method_name, const std::string& witness_path) {
  try {
    const HalinGraph g = load_instance(file);
    const Method method = parse_method(method_name);
    SeiOptions opt;
    opt.witness = !witness_path.empty();
    const auto t0 = std::chrono::steady_clock::now();
    const SeiResult r = compute_sei(g, method, opt);
    const double ms = ms_since(t0);
    if (r.witness) {
      const VerifyResult v = verify_strong_coloring(g, *r.witness);
      if (!v.ok || r.witness->distinct_colors() != r.value) {
        std::cerr << "witness failed self-check: " << format_violations(v) << "\n";
        return kInvalid;
      }
      write_file(witness_path, format_coloring(*r.witness));
    }
    nlohmann::ordered_json j;
    j["vertices"] = g.vertex_count();
    j["edges"] = g.edge_count();
    j["cubic"] = g.is_cubic();
    j["max_degree"] = g.max_degree();
    j["method"] = std::string(to_string(r.method));
    j["value"] = r.value;
    j["bounds"] = {{"tree_sei", r.bounds.tree_sei},
                   {"lower_bound", r.bounds.lower_bound},
                   {"upper_eq1", r.bounds.upper_eq1},
                   {"upper_eq2", r.bounds.upper_eq2}};
    j["witness"] = witness_path.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(witness_path);
    j["wall_ms"] = ms;
    std::cout << j.dump() << "\n";
    std::cerr << to_string(r.method) << ": " << r.value << " (tree " << r.bounds.tree_sei << ", " << ms << " ms)\n";
    return kOk;
  } catch (const Error& e) {
    return report(e);
  }
}

int cmd_gen(const std::vector<std::string>& args, std::uint64_t seed, int leaves, bool cubic, const std::string& out) {
  try {
    if (args.empty()) throw Error(ErrorKind::InvalidArgument, "gen needs a kind");
    const std::string& kind = args[0];
    auto param = [&](std::size_t i) {
      if (i >= args.size()) throw Error(ErrorKind::InvalidArgument, kind + " needs " + std::to_string(i) + " parameter(s)");
      try {
        return std::stoi(args[i]);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "bad parameter '" + args[i] + "'");
      }
    };
    HalinGraph g = [&] {
      if (kind == "wheel") return gen_wheel(param(1));
      if (kind == "doublewheel") return gen_double_wheel(param(1), param(2));
      if (kind == "necklace") return gen_necklace(param(1));
      if (kind == "random") return gen_random(seed, leaves, cubic);
      throw Error(ErrorKind::InvalidArgument, "unknown kind '" + kind + "'");
    }();
    const std::string text = format_instance(g);
    if (out.empty() || out == "-") {
      std::cout << text;
    } else {
      write_file(out, text);
    }
    return kOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
}

int cmd_bench(const std::vector<int>& sizes, std::uint64_t seed, int reps, const std::string& kind,
              const std::string& method_name) {
  std::cout << "leaves,edges,method,ms_mean,max_states\n";
  Method method = Method::Auto;
  try {
    method = parse_method(method_name);
  } catch (const Error& e) {
    return report(e);
  }
  SeiOptions opt;
  opt.witness = false;
  for (int leaves : sizes) {
    std::vector<double> times;
    std::size_t max_states = 0;
    std::string used = std::string(to_string(method));
    int edges = 0;
    try {
      for (int r = 0; r < reps; ++r) {
        const HalinGraph g = gen_random(seed + static_cast<std::uint64_t>(r), leaves, kind == "cubic");
        edges = g.edge_count();
        const auto t0 = std::chrono::steady_clock::now();
        const SeiResult res = compute_sei(g, method, opt);
        times.push_back(ms_since(t0));
        max_states = std::max(max_states, res.max_states);
        used = std::string(to_string(res.method));
      }
      const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
      std::printf("%d,%d,%s,%.3f,%zu\n", leaves, edges, used.c_str(), mean, max_states);
    } catch (const Error& e) {
      std::printf("%d,%d,%s,error:%s,\n", leaves, edges, used.c_str(), std::string(to_string(e.kind())).c_str());
    }
    std::fflush(stdout);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong chromatic index of Halin graphs"};
  app.require_subcommand(1);

  std::string file;
  auto* validate_cmd = app.add_subcommand("validate", "Check that a file holds a valid Halin instance");
  validate_cmd->add_option("file", file, "halin-v1 JSON instance")->required();

  std::string method = "auto", witness;
  auto* chi_cmd = app.add_subcommand("chi", "Compute the strong chromatic index");
  chi_cmd->add_option("file", file, "halin-v1 JSON instance")->required();
  chi_cmd->add_option("--method", method, "auto|closed|cubic|general|oracle")
      ->check(CLI::IsMember({"auto", "closed", "cubic", "general", "oracle"}));
  chi_cmd->add_option("--witness", witness, "Write an optimal colouring to this file");

  std::vector<std::string> gen_args;
  std::uint64_t seed = 1;
  int leaves = 10;
  bool cubic = false;
  std::string out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance: wheel n | doublewheel dx dy | necklace h | random");
  gen_cmd->add_option("kind", gen_args, "Kind followed by its parameters")->required();
  gen_cmd->add_option("--seed", seed, "Seed for random instances");
  gen_cmd->add_option("--leaves", leaves, "Leaf count for random instances");
  gen_cmd->add_flag("--cubic", cubic, "Random instance with every internal vertex of degree 3");
  gen_cmd->add_option("-o,--out", out, "Output file (stdout if omitted)");

  std::vector<int> sizes;
  int reps = 1;
  std::string kind = "cubic";
  auto* bench_cmd = app.add_subcommand("bench", "Time the DP on random instances, CSV on stdout");
  bench_cmd->add_option("--sizes", sizes, "Leaf counts, ascending")->delimiter(',');
  bench_cmd->add_option("--seed", seed, "First seed");
  bench_cmd->add_option("--reps", reps, "Instances per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--kind", kind, "cubic|general instances")->check(CLI::IsMember({"cubic", "general"}));
  bench_cmd->add_option("--method", method, "auto|cubic|general")
      ->check(CLI::IsMember({"auto", "cubic", "general"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    // Bad arguments to gen are a generator error (exit 1); elsewhere a usage error.
    return app.got_subcommand(gen_cmd) ? kInvalid : kParse;
  }

  if (*validate_cmd) return cmd_validate(file);
  if (*chi_cmd) return cmd_chi(file, method, witness);
  if (*gen_cmd) return cmd_gen(gen_args, seed, leaves, cubic, out);
  if (*bench_cmd) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) {
      std::cerr << "sizes must be ascending\n";
      return kParse;
    }
    return cmd_bench(sizes, seed, reps, kind, method);
  }
  return kOk;
}

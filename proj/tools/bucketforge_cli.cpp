// Command-line front end: generate models, solve a single instance,
// sweep benchmarks, report induced widths.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bucketforge/bench.hpp"
#include "bucketforge/errors.hpp"
#include "bucketforge/gbr.hpp"
#include "bucketforge/uai.hpp"

namespace {

using namespace bucketforge;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitResourceCap = 4;

struct ModelOptions {
  std::string grid;      // "HxW"
  int complete_n = 0;
  double delta = 1.0;
  double field_range = 0.1;
  std::string uai_path;
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
  cmd->add_option("--grid", opts.grid, "grid Ising model, HxW");
  cmd->add_option("--complete", opts.complete_n, "complete-graph Ising model, N");
  cmd->add_option("--delta", opts.delta, "pairwise interaction strength")
      ->capture_default_str();
  cmd->add_option("--field-range", opts.field_range,
                  "singleton field range")
      ->capture_default_str();
  cmd->add_option("--uai", opts.uai_path, "UAI MARKOV model file");
}

IsingSpec parse_ising_spec(const ModelOptions& opts) {
  if (!opts.grid.empty()) {
    const auto x = opts.grid.find('x');
    if (x == std::string::npos)
      throw ConfigError("--grid expects HxW, e.g. 8x8");
    int h = 0, w = 0;
    try {
      h = std::stoi(opts.grid.substr(0, x));
      w = std::stoi(opts.grid.substr(x + 1));
    } catch (const std::exception&) {
      throw ConfigError("--grid expects HxW, e.g. 8x8");
    }
    return IsingSpec::grid(h, w, opts.delta, 0, opts.field_range);
  }
  if (opts.complete_n > 0)
    return IsingSpec::complete(opts.complete_n, opts.delta, 0,
                               opts.field_range);
  throw ConfigError("no model source: use --grid, --complete or --uai");
}

void fill_model_source(const ModelOptions& opts, RunConfig& cfg) {
  int sources = (!opts.grid.empty() ? 1 : 0) + (opts.complete_n > 0 ? 1 : 0) +
                (!opts.uai_path.empty() ? 1 : 0);
  if (sources != 1)
    throw ConfigError("exactly one of --grid, --complete, --uai is required");
  if (!opts.uai_path.empty())
    cfg.uai_path = opts.uai_path;
  else
    cfg.ising = parse_ising_spec(opts);
}

int width_cap_from_env() {
  if (const char* cap = std::getenv("BUCKETFORGE_WIDTH_CAP")) {
    try {
      return std::stoi(cap);
    } catch (const std::exception&) {
      throw ConfigError("BUCKETFORGE_WIDTH_CAP must be an integer");
    }
  }
  return kDefaultWidthCap;
}

void emit_records(const std::vector<ResultRecord>& records,
                  const std::string& out_path, const std::string& format) {
  if (format != "json" && format != "csv")
    throw ConfigError("--format must be json or csv");
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw ConfigError("cannot open output file: " + out_path);
    out = &file;
  }
  if (format == "json")
    write_records_json(*out, records);
  else
    write_records_csv(*out, records);
}

FactorGraph load_model(const ModelOptions& opts, std::uint64_t seed) {
  if (!opts.uai_path.empty()) return parse_uai_file(opts.uai_path);
  IsingSpec spec = parse_ising_spec(opts);
  spec.seed = seed;
  return gen_ising(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partition-function estimation with bucket elimination, "
               "mini-bucket bounds and renormalization"};
  app.require_subcommand(1);

  ModelOptions gen_model;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a model and write UAI");
  add_model_options(gen, gen_model);
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output path (default stdout)");

  ModelOptions solve_model;
  RunConfig solve_cfg;
  std::string solve_alg;
  std::uint64_t solve_seed = 0;
  int solve_ibound = 10;
  std::string solve_out, solve_format = "json", solve_order = "minfill";
  auto* solve = app.add_subcommand("solve", "run one algorithm on one model");
  add_model_options(solve, solve_model);
  solve->add_option("--algorithm", solve_alg,
                    "exact-be | brute-force | mbe-upper | mbe-lower | mbr | gbr")
      ->required();
  solve->add_option("--ibound", solve_ibound, "mini-bucket scope bound")
      ->capture_default_str();
  solve->add_option("--seed", solve_seed, "generator seed")
      ->capture_default_str();
  solve->add_option("--order", solve_order, "elimination order heuristic")
      ->capture_default_str();
  solve->add_option("--oracle", solve_cfg.oracle, "auto | off")
      ->capture_default_str();
  solve->add_option("--sweeps", solve_cfg.sweeps, "gbr refit sweeps")
      ->capture_default_str();
  solve->add_option("--out", solve_out, "record output path");
  solve->add_option("--format", solve_format, "json | csv")
      ->capture_default_str();

  ModelOptions bench_model;
  RunConfig bench_cfg;
  std::vector<std::uint64_t> bench_seeds;
  std::string bench_out, bench_format = "json", bench_order = "minfill";
  auto* bench = app.add_subcommand("bench", "sweep algorithms over seeds");
  add_model_options(bench, bench_model);
  bench->add_option("--algorithm", bench_cfg.algorithms,
                    "algorithms to run (repeatable)")
      ->required();
  bench->add_option("--ibound", bench_cfg.ibounds,
                    "ibound values to sweep (repeatable)");
  bench->add_option("--seeds", bench_seeds, "seeds (repeatable)");
  bench->add_option("--seed", bench_seeds, "alias for --seeds");
  bench->add_option("--order", bench_order, "elimination order heuristic")
      ->capture_default_str();
  bench->add_option("--oracle", bench_cfg.oracle, "auto | off")
      ->capture_default_str();
  bench->add_option("--sweeps", bench_cfg.sweeps, "gbr refit sweeps")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "record output path");
  bench->add_option("--format", bench_format, "json | csv")
      ->capture_default_str();

  ModelOptions width_model;
  std::uint64_t width_seed = 0;
  auto* width = app.add_subcommand("width",
                                   "report induced width under min-fill");
  add_model_options(width, width_model);
  width->add_option("--seed", width_seed, "generator seed")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const int width_cap = width_cap_from_env();

    if (gen->parsed()) {
      IsingSpec spec = parse_ising_spec(gen_model);
      spec.seed = gen_seed;
      const std::string text = write_uai(gen_ising(spec));
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        if (!out) throw ConfigError("cannot open output file: " + gen_out);
        out << text;
      }
      return kExitOk;
    }

    if (solve->parsed()) {
      if (solve_order != "minfill")
        throw ConfigError("unsupported order heuristic: " + solve_order);
      solve_cfg.algorithms = {solve_alg};
      solve_cfg.ibounds = {solve_ibound};
      solve_cfg.seeds = {solve_seed};
      solve_cfg.width_cap = width_cap;
      fill_model_source(solve_model, solve_cfg);
      auto records = run_benchmark(solve_cfg);
      for (const auto& r : records) {
        if (r.status != "ok") {
          std::cerr << r.model_id << " " << r.algorithm << ": " << r.status
                    << "\n";
          if (r.status.find("too wide") != std::string::npos ||
              r.status.find("state space") != std::string::npos)
            return kExitResourceCap;
          return kExitModel;
        }
        std::cout << r.algorithm << " log10(Z) = " << r.log10_z;
        if (r.error) std::cout << "  |error| = " << *r.error;
        std::cout << "  (" << r.wall_time_seconds << " s)\n";
      }
      if (!solve_out.empty()) emit_records(records, solve_out, solve_format);
      return kExitOk;
    }

    if (bench->parsed()) {
      if (bench_order != "minfill")
        throw ConfigError("unsupported order heuristic: " + bench_order);
      if (!bench_seeds.empty()) bench_cfg.seeds = bench_seeds;
      bench_cfg.width_cap = width_cap;
      fill_model_source(bench_model, bench_cfg);
      auto records = run_benchmark(bench_cfg);
      emit_records(records, bench_out, bench_format);
      return kExitOk;
    }

    if (width->parsed()) {
      FactorGraph g = load_model(width_model, width_seed);
      const EliminationOrder order = minfill_order(g);
      std::cout << "variables " << g.num_variables() << " factors "
                << g.factors.size() << " induced-width "
                << induced_width(g, order) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModel;
  }
  return kExitOk;
}

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bucketforge/elimination.hpp"
#include "bucketforge/factor.hpp"
#include "bucketforge/ising.hpp"
#include "bucketforge/mbr.hpp"

namespace bucketforge {

inline constexpr int kBruteForceBitCap = 24;  // max log2 of the state space

// Exact log10 Z by enumerating every configuration. Kahan-compensated
// accumulation in a max-rescaled decimal frame keeps strongly coupled
// models inside double range. Refuses state spaces above 2^24.
LogPartition brute_force_logZ(const FactorGraph& g);

// Pairwise table between replicate_var (rows) and base_var (columns)
// obtained by enumerating every configuration of g, skipping the factors
// in excluded (the compensating pair). Result is rescaled to unit max.
// Test oracle for the elimination-based skewed marginal; refuses state
// spaces above 2^20.
Matrix brute_force_skewed_factor(const FactorGraph& g,
                                 VariableId replicate_var, VariableId base_var,
                                 std::span<const std::size_t> excluded);

struct RunConfig {
  std::vector<std::string> algorithms;  // exact-be, brute-force, mbe-upper,
                                        // mbe-lower, mbr, gbr
  std::vector<int> ibounds{10};
  std::vector<std::uint64_t> seeds{0};
  std::optional<IsingSpec> ising;   // per-seed: spec with seed replaced
  std::optional<std::string> uai_path;
  std::string oracle = "auto";      // auto | off
  int sweeps = 1;                   // reverse refit sweeps for gbr
  int width_cap = kDefaultWidthCap;

  void validate() const;
};

struct ResultRecord {
  std::string model_id;
  std::string algorithm;
  int ibound = 0;  // 0 when the algorithm takes none
  std::uint64_t seed = 0;
  double log10_z = 0.0;
  double wall_time_seconds = 0.0;
  std::optional<double> error;  // |log10 Z - log10 Zhat| when oracle present
  std::string oracle = "none";  // exact-be | brute-force | none
  std::string order_hash;       // shared across algorithms of one instance
  std::string status = "ok";
};

// One record per (seed, algorithm, applicable ibound). The min-fill order
// is computed once per instance and shared by every algorithm on it.
// Per-instance failures are recorded, not fatal.
std::vector<ResultRecord> run_benchmark(const RunConfig& cfg);

void write_records_json(std::ostream& out, std::span<const ResultRecord> recs);
void write_records_csv(std::ostream& out, std::span<const ResultRecord> recs);

}  // namespace bucketforge

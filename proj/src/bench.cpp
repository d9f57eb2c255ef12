#include "bucketforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bucketforge/errors.hpp"
#include "bucketforge/gbr.hpp"
#include "bucketforge/uai.hpp"

namespace bucketforge {

namespace {

// Streaming sum of values p * 10^e in the frame of the largest exponent
// seen so far, with Kahan compensation.
struct ScaledSum {
  double sum = 0.0;
  double comp = 0.0;
  double frame = -std::numeric_limits<double>::infinity();

  void add(double p, double e) {
    if (p == 0.0) return;
    if (e > frame) {
      if (std::isfinite(frame)) {
        const double shrink = std::pow(10.0, frame - e);
        sum *= shrink;
        comp *= shrink;
      }
      frame = e;
    }
    const double v = p * std::pow(10.0, e - frame);
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  double log10_total() const {
    if (!(sum > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log10(sum) + frame;
  }
};

// Odometer over all configurations that keeps per-factor table positions
// updated incrementally.
struct ConfigWalker {
  const FactorGraph& g;
  std::vector<std::int32_t> assign;
  std::vector<std::size_t> pos;                       // per factor
  std::vector<std::vector<std::size_t>> var_strides;  // per factor, per var

  explicit ConfigWalker(const FactorGraph& graph) : g(graph) {
    assign.assign(g.num_variables(), 0);
    pos.assign(g.factors.size(), 0);
    var_strides.resize(g.factors.size());
    for (std::size_t k = 0; k < g.factors.size(); ++k) {
      const auto strides = scope_strides(g.factors[k].scope, g.domains);
      var_strides[k].assign(g.num_variables(), 0);
      for (std::size_t j = 0; j < g.factors[k].scope.size(); ++j)
        var_strides[k][g.factors[k].scope[j]] = strides[j];
    }
  }

  bool advance() {
    std::size_t v = g.num_variables();
    while (v-- > 0) {
      ++assign[v];
      for (std::size_t k = 0; k < pos.size(); ++k) pos[k] += var_strides[k][v];
      if (assign[v] < g.domains.cardinality(static_cast<VariableId>(v)))
        return true;
      for (std::size_t k = 0; k < pos.size(); ++k)
        pos[k] -= var_strides[k][v] * static_cast<std::size_t>(assign[v]);
      assign[v] = 0;
    }
    return false;
  }

  // Product of the current entries of the non-excluded factors, returned
  // as (mantissa, base-10 exponent) to survive deep underflow.
  std::pair<double, double> product(std::span<const char> excluded) const {
    double p = 1.0;
    double e = 0.0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (!excluded.empty() && excluded[k]) continue;
      p *= g.factors[k].table[pos[k]];
      if (p == 0.0) return {0.0, 0.0};
      while (p < 1e-150) {
        p *= 1e150;
        e -= 150.0;
      }
      while (p > 1e150) {
        p *= 1e-150;
        e += 150.0;
      }
    }
    return {p, e};
  }
};

double total_log2_states(const FactorGraph& g) {
  double bits = 0.0;
  for (auto d : g.domains.cardinalities) bits += std::log2(double(d));
  return bits;
}

}  // namespace

LogPartition brute_force_logZ(const FactorGraph& g) {
  g.validate();
  if (total_log2_states(g) > kBruteForceBitCap + 1e-9)
    throw StateSpaceCapError("state space exceeds 2^" +
                             std::to_string(kBruteForceBitCap) +
                             " configurations");

  double log_scales = 0.0;
  for (const Factor& f : g.factors) log_scales += f.log_scale;

  ConfigWalker walker(g);
  ScaledSum z;
  do {
    auto [p, e] = walker.product({});
    z.add(p, e);
  } while (walker.advance());

  const double total = z.log10_total();
  if (!std::isfinite(total))
    return LogPartition{-std::numeric_limits<double>::infinity()};
  return LogPartition{total + log_scales};
}

Matrix brute_force_skewed_factor(const FactorGraph& g,
                                 VariableId replicate_var, VariableId base_var,
                                 std::span<const std::size_t> excluded) {
  g.validate();
  if (total_log2_states(g) > 20.0 + 1e-9)
    throw StateSpaceCapError("state space exceeds 2^20 configurations");
  const std::size_t d =
      static_cast<std::size_t>(g.domains.cardinality(base_var));
  if (g.domains.cardinality(replicate_var) != static_cast<std::int32_t>(d))
    throw ModelError("split variables must share one cardinality");

  std::vector<char> skip(g.factors.size(), 0);
  for (std::size_t k : excluded) skip[k] = 1;

  ConfigWalker walker(g);
  std::vector<ScaledSum> cells(d * d);
  do {
    auto [p, e] = walker.product(skip);
    const std::size_t row = static_cast<std::size_t>(walker.assign[replicate_var]);
    const std::size_t col = static_cast<std::size_t>(walker.assign[base_var]);
    cells[row * d + col].add(p, e);
  } while (walker.advance());

  double max_log = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) max_log = std::max(max_log, c.log10_total());
  Matrix out(d, d);
  if (std::isfinite(max_log))
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double lt = cells[k].log10_total();
      out.data[k] = std::isfinite(lt) ? std::pow(10.0, lt - max_log) : 0.0;
    }
  return out;
}

void RunConfig::validate() const {
  static const std::set<std::string> known{"exact-be",  "brute-force",
                                           "mbe-upper", "mbe-lower",
                                           "mbr",       "gbr"};
  if (algorithms.empty()) throw ConfigError("no algorithm selected");
  for (const auto& a : algorithms)
    if (!known.count(a)) throw ConfigError("unknown algorithm: " + a);
  const bool needs_ibound =
      std::any_of(algorithms.begin(), algorithms.end(), [](const auto& a) {
        return a == "mbe-upper" || a == "mbe-lower" || a == "mbr" ||
               a == "gbr";
      });
  if (needs_ibound) {
    if (ibounds.empty())
      throw ConfigError("ibound required for mini-bucket algorithms");
    for (int ib : ibounds)
      if (ib < 1) throw ConfigError("ibound must be >= 1");
  }
  if (!ising && !uai_path) throw ConfigError("no model source configured");
  if (ising && uai_path)
    throw ConfigError("choose either a generator spec or a UAI file");
  if (seeds.empty()) throw ConfigError("no seeds configured");
  if (oracle != "auto" && oracle != "off")
    throw ConfigError("oracle must be auto or off");
  if (sweeps < 1) throw ConfigError("sweeps must be >= 1");
}

namespace {

std::string order_hash_hex(const EliminationOrder& o) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (VariableId v : o.order) {
    std::uint64_t x = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string model_identifier(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.uai_path) return *cfg.uai_path;
  const IsingSpec& s = *cfg.ising;
  std::ostringstream id;
  if (s.topology == IsingSpec::Topology::Grid)
    id << "ising-grid-" << s.rows << "x" << s.cols;
  else
    id << "ising-complete-" << s.n;
  id << "-delta" << format_double(s.delta) << "-seed" << seed;
  return id.str();
}

bool algorithm_uses_ibound(const std::string& a) {
  return a == "mbe-upper" || a == "mbe-lower" || a == "mbr" || a == "gbr";
}

double run_algorithm(const std::string& alg, const FactorGraph& g,
                     const EliminationOrder& o, int ibound,
                     const RunConfig& cfg) {
  if (alg == "exact-be") return bucket_elimination(g, o, cfg.width_cap).log10_z;
  if (alg == "brute-force") return brute_force_logZ(g).log10_z;
  if (alg == "mbe-upper")
    return mini_bucket_elimination(g, o, ibound, BoundMode::Upper).log10_z;
  if (alg == "mbe-lower")
    return mini_bucket_elimination(g, o, ibound, BoundMode::Lower).log10_z;
  if (alg == "mbr") return mbr_partition_function(g, o, ibound).log_z.log10_z;
  if (alg == "gbr")
    return gbr_partition_function(g, o, ibound, cfg.sweeps, cfg.width_cap)
        .log10_z;
  throw ConfigError("unknown algorithm: " + alg);
}

}  // namespace

std::vector<ResultRecord> run_benchmark(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ResultRecord> records;

  for (std::uint64_t seed : cfg.seeds) {
    FactorGraph g;
    std::string model_id = model_identifier(cfg, seed);
    try {
      if (cfg.ising) {
        IsingSpec spec = *cfg.ising;
        spec.seed = seed;
        g = gen_ising(spec);
      } else {
        g = parse_uai_file(*cfg.uai_path);
      }
    } catch (const std::exception& e) {
      ResultRecord rec;
      rec.model_id = model_id;
      rec.seed = seed;
      rec.algorithm = "-";
      rec.log10_z = std::numeric_limits<double>::quiet_NaN();
      rec.status = std::string("model error: ") + e.what();
      records.push_back(std::move(rec));
      continue;
    }

    // one order per instance, shared by every algorithm
    const EliminationOrder order = minfill_order(g);
    const std::string ohash = order_hash_hex(order);

    // oracle value, when feasible
    std::optional<double> oracle_value;
    std::string oracle_name = "none";
    if (cfg.oracle == "auto") {
      if (total_log2_states(g) <= kBruteForceBitCap) {
        oracle_value = brute_force_logZ(g).log10_z;
        oracle_name = "brute-force";
      } else if (induced_width(g, order) <= cfg.width_cap) {
        oracle_value = bucket_elimination(g, order, cfg.width_cap).log10_z;
        oracle_name = "exact-be";
      }
    }

    for (const std::string& alg : cfg.algorithms) {
      const std::vector<int> ibounds =
          algorithm_uses_ibound(alg) ? cfg.ibounds : std::vector<int>{0};
      for (int ibound : ibounds) {
        ResultRecord rec;
        rec.model_id = model_id;
        rec.algorithm = alg;
        rec.ibound = ibound;
        rec.seed = seed;
        rec.oracle = oracle_name;
        rec.order_hash = ohash;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          rec.log10_z = run_algorithm(alg, g, order, ibound, cfg);
          if (oracle_value) rec.error = std::abs(rec.log10_z - *oracle_value);
        } catch (const std::exception& e) {
          rec.log10_z = std::numeric_limits<double>::quiet_NaN();
          rec.status = std::string("failed: ") + e.what();
        }
        rec.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

namespace {

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_records_json(std::ostream& out,
                        std::span<const ResultRecord> recs) {
  for (const ResultRecord& r : recs) {
    nlohmann::json j{{"model_id", r.model_id},
                     {"algorithm", r.algorithm},
                     {"ibound", r.ibound},
                     {"seed", r.seed},
                     {"log10_z", number_or_string(r.log10_z)},
                     {"wall_time_seconds", r.wall_time_seconds},
                     {"error", r.error ? nlohmann::json(number_or_string(*r.error))
                                       : nlohmann::json(nullptr)},
                     {"oracle", r.oracle},
                     {"order_hash", r.order_hash},
                     {"status", r.status}};
    out << j.dump() << "\n";
  }
}

void write_records_csv(std::ostream& out, std::span<const ResultRecord> recs) {
  out << "model_id,algorithm,ibound,seed,log10_z,wall_time_seconds,error,"
         "oracle,order_hash,status\n";
  for (const ResultRecord& r : recs) {
    out << r.model_id << ',' << r.algorithm << ',' << r.ibound << ','
        << r.seed << ',' << format_double(r.log10_z) << ','
        << format_double(r.wall_time_seconds) << ','
        << (r.error ? format_double(*r.error) : std::string()) << ','
        << r.oracle << ',' << r.order_hash << ',' << r.status << '\n';
  }
}

}  // namespace bucketforge

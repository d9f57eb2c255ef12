#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "bucketforge/bench.hpp"
#include "bucketforge/mbr.hpp"
#include "test_support.hpp"

using namespace bucketforge;
using namespace testsupport;

namespace {

EliminationOrder identity_order(std::size_t n) {
  EliminationOrder o;
  o.order.resize(n);
  std::iota(o.order.begin(), o.order.end(), 0);
  return o;
}

// Star-shaped model whose bucket products are all rank-1 in the hub:
// f(x0, xj) = a(x0) * b(xj).
FactorGraph rank1_star(int leaves) {
  FactorGraph g;
  g.domains.cardinalities.assign(leaves + 1, 2);
  const double a[2] = {2.0, 3.0};
  for (int j = 1; j <= leaves; ++j) {
    const double b[2] = {1.0, 0.5 + 0.25 * j};
    g.factors.emplace_back(
        std::vector<VariableId>{0, j},
        std::vector<double>{a[0] * b[0], a[0] * b[1], a[1] * b[0],
                            a[1] * b[1]});
  }
  return g;
}

}  // namespace

TEST_CASE("compensating a rank-1 group is exact") {
  DomainSpec d;
  d.cardinalities = {2, 2, 2};  // variable 2 is the replicate slot
  Factor f({0, 1}, {2 * 1.0, 2 * 0.5, 3 * 1.0, 3 * 0.5});  // a(x0) b(x1)
  std::vector<Factor> group{f};
  auto [renormalized, pair] = compensate_minibucket(group, 0, 2, 1, d);
  REQUIRE(renormalized.size() == 3);

  // contract the replicate out of the renormalized group and compare with
  // the original on every configuration
  Factor prod = factor_product(renormalized, d);
  Factor contracted = factor_marginalize(prod, 2, MarginalMode::Sum, d);
  REQUIRE(contracted.scope == f.scope);
  for (std::size_t k = 0; k < f.table.size(); ++k)
    CHECK(contracted.linear(k) ==
          doctest::Approx(f.linear(k)).epsilon(1e-10));

  CHECK(pair.bucket_variable == 0);
  CHECK(pair.replicate_index == 1);
}

TEST_CASE("identity-table group reproduces the oracle residual") {
  DomainSpec d;
  d.cardinalities = {2, 2, 2};
  Factor f({0, 1}, {1, 0, 0, 1});
  std::vector<Factor> group{f};
  auto [renormalized, pair] = compensate_minibucket(group, 0, 2, 1, d);
  CHECK(pair.values[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(pair.values[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-10));

  Matrix m = factor_matricize(f, 0, d);
  const double residual = rank1_residual(m, pair.values);
  const auto oracle_r = svd_oracle_left(m);
  CHECK(residual == doctest::Approx(rank1_residual(m, oracle_r)).epsilon(1e-10));
}

TEST_CASE("all-zero group propagates zeros") {
  DomainSpec d;
  d.cardinalities = {2, 2, 2};
  Factor f({0, 1}, {0, 0, 0, 0});
  std::vector<Factor> group{f};
  auto [renormalized, pair] = compensate_minibucket(group, 0, 2, 1, d);
  CHECK(pair.values == std::vector<double>{1, 0});
  Factor prod = factor_product(renormalized, d);
  for (double v : prod.table) CHECK(v == 0.0);
}

TEST_CASE("wide ibound degenerates to exact elimination") {
  FactorGraph g = gen_ising(IsingSpec::grid(3, 3, 1.0, 2));
  EliminationOrder o = minfill_order(g);
  const int width = induced_width(g, o);
  MbrResult res = mbr_partition_function(g, o, width - 1);
  CHECK(res.trace.steps.empty());
  CHECK(res.log_z.log10_z ==
        doctest::Approx(bucket_elimination(g, o).log10_z).epsilon(1e-9));
}

TEST_CASE("rank-1 buckets make the estimate exact despite splitting") {
  FactorGraph g = rank1_star(5);
  EliminationOrder o = identity_order(6);
  MbrResult res = mbr_partition_function(g, o, 1);
  CHECK(res.trace.steps.size() >= 1);  // the hub bucket must split
  const double exact = brute_force_logZ(g).log10_z;
  CHECK(res.log_z.log10_z == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("estimate improves on the mini-bucket upper bound") {
  double mbr_total = 0.0, mbe_total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FactorGraph g = gen_ising(IsingSpec::grid(4, 4, 1.0, seed));
    EliminationOrder o = minfill_order(g);
    const double exact = brute_force_logZ(g).log10_z;
    mbr_total +=
        std::abs(mbr_partition_function(g, o, 2).log_z.log10_z - exact);
    mbe_total += std::abs(
        mini_bucket_elimination(g, o, 2, BoundMode::Upper).log10_z - exact);
  }
  CHECK(mbr_total / 50 < mbe_total / 50);
}

TEST_CASE("trace replays to the estimate") {
  SUBCASE("without splitting the replay is exact elimination") {
    FactorGraph g = gen_ising(IsingSpec::grid(2, 3, 1.0, 8));
    EliminationOrder o = minfill_order(g);
    MbrResult res = mbr_partition_function(g, o, 10);
    REQUIRE(res.trace.steps.empty());
    CHECK(verify_trace(res.trace).log10_z ==
          doctest::Approx(bucket_elimination(g, o).log10_z).epsilon(1e-12));
  }

  SUBCASE("grid with splits") {
    FactorGraph g = gen_ising(IsingSpec::grid(4, 4, 1.0, 3));
    EliminationOrder o = minfill_order(g);
    MbrResult res = mbr_partition_function(g, o, 2);
    REQUIRE(!res.trace.steps.empty());
    CHECK(verify_trace(res.trace).log10_z ==
          doctest::Approx(res.log_z.log10_z).epsilon(1e-9));
  }

  SUBCASE("seeded sweep with width bound") {
    for (int which = 0; which < 12; ++which) {
      FactorGraph g = mixed_small_model(which, 4000 + which);
      if (g.num_variables() > 16) continue;
      EliminationOrder o = minfill_order(g);
      for (int ibound : {2, 3}) {
        MbrResult res = mbr_partition_function(g, o, ibound);
        CHECK(verify_trace(res.trace).log10_z ==
              doctest::Approx(res.log_z.log10_z).epsilon(1e-9));
        CHECK(induced_width(res.trace.final_graph, res.trace.renorm_order) <=
              ibound + 1);
      }
    }
  }
}

TEST_CASE("renormalized order interleaves replicates before their base") {
  // complete graph on six vertices, natural order, ibound 2: the first
  // bucket splits into three groups, the next two into two, rest whole
  FactorGraph g = gen_ising(IsingSpec::complete(6, 1.0, 77));
  // strip the singleton fields so only pairwise factors remain
  FactorGraph pairwise;
  pairwise.domains = g.domains;
  for (const Factor& f : g.factors)
    if (f.scope.size() == 2) pairwise.factors.push_back(f);

  EliminationOrder o = identity_order(6);
  MbrResult res = mbr_partition_function(pairwise, o, 2);

  CHECK(res.trace.group_counts == std::vector<int>{3, 2, 2, 1, 1, 1});
  CHECK(res.trace.steps.size() == 4);

  // renormalized order shape: [0a, 0b, 0, 1a, 1, 2a, 2, 3, 4, 5]
  const auto& ro = res.trace.renorm_order.order;
  REQUIRE(ro.size() == 10);
  CHECK(ro[2] == 0);
  CHECK(ro[4] == 1);
  CHECK(ro[6] == 2);
  CHECK(ro[7] == 3);
  CHECK(ro[8] == 4);
  CHECK(ro[9] == 5);
  CHECK(ro[0] == res.trace.steps[0].replicate_var);
  CHECK(ro[1] == res.trace.steps[1].replicate_var);
  CHECK(res.trace.steps[0].replicate.base == 0);
  CHECK(res.trace.steps[1].replicate.base == 0);
  CHECK(res.trace.steps[2].replicate.base == 1);
  CHECK(res.trace.steps[3].replicate.base == 2);

  CHECK(verify_trace(res.trace).log10_z ==
        doctest::Approx(res.log_z.log10_z).epsilon(1e-9));
  CHECK(induced_width(res.trace.final_graph, res.trace.renorm_order) <= 3);
}

TEST_CASE("trace structure invariants") {
  FactorGraph g = gen_ising(IsingSpec::grid(4, 4, 1.0, 21));
  EliminationOrder o = minfill_order(g);
  MbrResult res = mbr_partition_function(g, o, 2);
  const auto& trace = res.trace;

  // T = sum of (m_i - 1)
  int t_expected = 0;
  for (int m : trace.group_counts) t_expected += m - 1;
  CHECK(trace.steps.size() == static_cast<std::size_t>(t_expected));

  // each pair's two singletons share one value vector
  for (const TraceStep& step : trace.steps) {
    const Factor& on_base = trace.final_graph.factors[step.base_singleton];
    const Factor& on_rep = trace.final_graph.factors[step.replicate_singleton];
    CHECK(on_base.scope == std::vector<VariableId>{step.replicate.base});
    CHECK(on_rep.scope == std::vector<VariableId>{step.replicate_var});
    CHECK(on_base.table == step.compensation.values);
    CHECK(on_rep.table == step.compensation.values);
    double norm = 0.0;
    for (double x : step.compensation.values) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // replicates extend the domain with the base cardinality
  CHECK(trace.final_graph.num_variables() ==
        g.num_variables() + trace.steps.size());
  for (const TraceStep& step : trace.steps)
    CHECK(trace.final_graph.domains.cardinality(step.replicate_var) ==
          g.domains.cardinality(step.replicate.base));

  // scope records reference valid graph factors
  for (const TraceStep& step : trace.steps) {
    for (std::size_t k : step.renormalized_group.graph_factors)
      CHECK(k < trace.final_graph.factors.size());
    CHECK(!step.renormalized_group.vertices.empty());
  }
}

TEST_CASE("unreferenced variable contributes its cardinality") {
  FactorGraph g;
  g.domains.cardinalities = {2, 3};
  g.factors.emplace_back(std::vector<VariableId>{0},
                         std::vector<double>{1, 2});
  MbrResult res = mbr_partition_function(g, identity_order(2), 2);
  CHECK(res.log_z.log10_z == doctest::Approx(std::log10(9)).epsilon(1e-12));
  CHECK(verify_trace(res.trace).log10_z ==
        doctest::Approx(std::log10(9)).epsilon(1e-12));
}

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "bucketforge/ising.hpp"
#include "bucketforge/ordering.hpp"
#include "test_support.hpp"

using namespace bucketforge;
using namespace testsupport;

namespace {

FactorGraph pairwise_skeleton(int n,
                              std::vector<std::pair<int, int>> edges) {
  FactorGraph g;
  g.domains.cardinalities.assign(n, 2);
  for (auto [i, j] : edges)
    g.factors.emplace_back(std::vector<VariableId>{i, j},
                           std::vector<double>{1, 1, 1, 1});
  return g;
}

FactorGraph complete_skeleton(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return pairwise_skeleton(n, std::move(edges));
}

}  // namespace

TEST_CASE("path graph eliminates at width two") {
  FactorGraph g = pairwise_skeleton(3, {{0, 1}, {1, 2}});
  EliminationOrder o = minfill_order(g);
  CHECK(induced_width(g, o) == 2);
}

TEST_CASE("complete graphs have full width under any order") {
  FactorGraph g = complete_skeleton(4);
  std::vector<VariableId> perm{0, 1, 2, 3};
  do {
    CHECK(induced_width(g, EliminationOrder{perm}) == 4);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(induced_width(g, minfill_order(g)) == 4);
}

TEST_CASE("min-fill matches the exhaustive optimum on the 3x3 grid") {
  FactorGraph g = gen_ising(IsingSpec::grid(3, 3, 1.0, 0));
  const int minfill_width = induced_width(g, minfill_order(g));

  std::vector<VariableId> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 99;
  do {
    best = std::min(best, induced_width(g, EliminationOrder{perm}));
  } while (std::next_permutation(perm.begin(), perm.end()));

  CHECK(best == 4);
  CHECK(minfill_width == best);
}

TEST_CASE("paper-scale widths: complete 15 and grid 15x15") {
  FactorGraph k15 = gen_ising(IsingSpec::complete(15, 1.0, 3));
  CHECK(induced_width(k15, minfill_order(k15)) == 15);

  FactorGraph grid = gen_ising(IsingSpec::grid(15, 15, 1.0, 3));
  CHECK(induced_width(grid, minfill_order(grid)) == 16);
}

TEST_CASE("isolated variable has width one") {
  FactorGraph g;
  g.domains.cardinalities = {2};
  g.factors.emplace_back(std::vector<VariableId>{0}, std::vector<double>{1, 1});
  CHECK(induced_width(g, minfill_order(g)) == 1);

  // and with no factor at all touching it
  FactorGraph h;
  h.domains.cardinalities = {2, 2};
  h.factors.emplace_back(std::vector<VariableId>{0}, std::vector<double>{1, 1});
  CHECK(induced_width(h, minfill_order(h)) == 1);
}

TEST_CASE("trees eliminate at width two, cliques at n") {
  FactorGraph star = pairwise_skeleton(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  CHECK(induced_width(star, minfill_order(star)) == 2);
  for (int n : {3, 5, 8})
    CHECK(induced_width(complete_skeleton(n), minfill_order(complete_skeleton(n))) == n);
}

TEST_CASE("min-fill is deterministic") {
  FactorGraph g = gen_ising(IsingSpec::grid(5, 5, 1.0, 17));
  EliminationOrder a = minfill_order(g);
  EliminationOrder b = minfill_order(g);
  CHECK(a.order == b.order);
}

TEST_CASE("induced width rejects non-permutations") {
  FactorGraph g = pairwise_skeleton(3, {{0, 1}, {1, 2}});
  CHECK_THROWS(induced_width(g, EliminationOrder{{0, 1}}));
  CHECK_THROWS(induced_width(g, EliminationOrder{{0, 1, 1}}));
}

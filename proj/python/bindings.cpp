#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bucketforge/bench.hpp"
#include "bucketforge/errors.hpp"
#include "bucketforge/gbr.hpp"
#include "bucketforge/uai.hpp"

namespace py = pybind11;
using namespace bucketforge;

namespace {

EliminationOrder as_order(const std::vector<VariableId>& order) {
  return EliminationOrder{order};
}

FactorGraph make_graph(
    std::vector<std::int32_t> cardinalities,
    const std::vector<std::pair<std::vector<VariableId>, std::vector<double>>>&
        factors) {
  FactorGraph g;
  g.domains.cardinalities = std::move(cardinalities);
  for (const auto& [scope, table] : factors)
    g.factors.emplace_back(scope, table);
  g.validate();
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "partition-function estimation: bucket elimination, mini-bucket "
            "bounds, mini-bucket and global-bucket renormalization";

  py::class_<FactorGraph>(m, "FactorGraph")
      .def_property_readonly("num_variables", &FactorGraph::num_variables)
      .def_property_readonly(
          "num_factors",
          [](const FactorGraph& g) { return g.factors.size(); })
      .def_property_readonly(
          "cardinalities",
          [](const FactorGraph& g) { return g.domains.cardinalities; })
      .def("factor_scopes",
           [](const FactorGraph& g) {
             std::vector<std::vector<VariableId>> scopes;
             scopes.reserve(g.factors.size());
             for (const auto& f : g.factors) scopes.push_back(f.scope);
             return scopes;
           })
      .def("factor_table", [](const FactorGraph& g, std::size_t k) {
        const Factor& f = g.factors.at(k);
        std::vector<double> values(f.table.size());
        for (std::size_t j = 0; j < values.size(); ++j)
          values[j] = f.linear(j);
        return values;
      });

  m.def("factor_graph", &make_graph, py::arg("cardinalities"),
        py::arg("factors"),
        "Build a model from cardinalities and (scope, table) pairs; scopes "
        "must be sorted and tables row-major.");

  m.def(
      "ising_grid",
      [](int rows, int cols, double delta, std::uint64_t seed,
         double field_range) {
        return gen_ising(IsingSpec::grid(rows, cols, delta, seed, field_range));
      },
      py::arg("rows"), py::arg("cols"), py::arg("delta"), py::arg("seed"),
      py::arg("field_range") = 0.1);
  m.def(
      "ising_complete",
      [](int n, double delta, std::uint64_t seed, double field_range) {
        return gen_ising(IsingSpec::complete(n, delta, seed, field_range));
      },
      py::arg("n"), py::arg("delta"), py::arg("seed"),
      py::arg("field_range") = 0.1);

  m.def("parse_uai",
        [](const std::string& text) { return parse_uai(text); },
        py::arg("text"));
  m.def("load_uai", &parse_uai_file, py::arg("path"));
  m.def("write_uai", &write_uai, py::arg("graph"));

  m.def(
      "minfill_order",
      [](const FactorGraph& g) { return minfill_order(g).order; },
      py::arg("graph"));
  m.def(
      "induced_width",
      [](const FactorGraph& g, const std::vector<VariableId>& order) {
        return induced_width(g, as_order(order));
      },
      py::arg("graph"), py::arg("order"));

  m.def(
      "bucket_elimination",
      [](const FactorGraph& g, const std::vector<VariableId>& order,
         int width_cap) {
        return bucket_elimination(g, as_order(order), width_cap).log10_z;
      },
      py::arg("graph"), py::arg("order"),
      py::arg("width_cap") = kDefaultWidthCap);
  m.def(
      "mini_bucket_elimination",
      [](const FactorGraph& g, const std::vector<VariableId>& order,
         int ibound, const std::string& mode) {
        if (mode != "upper" && mode != "lower")
          throw ConfigError("mode must be 'upper' or 'lower'");
        return mini_bucket_elimination(
                   g, as_order(order), ibound,
                   mode == "upper" ? BoundMode::Upper : BoundMode::Lower)
            .log10_z;
      },
      py::arg("graph"), py::arg("order"), py::arg("ibound"), py::arg("mode"));
  m.def(
      "mbr",
      [](const FactorGraph& g, const std::vector<VariableId>& order,
         int ibound) {
        return mbr_partition_function(g, as_order(order), ibound)
            .log_z.log10_z;
      },
      py::arg("graph"), py::arg("order"), py::arg("ibound"));
  m.def(
      "mbr_verify",
      [](const FactorGraph& g, const std::vector<VariableId>& order,
         int ibound) {
        MbrResult res = mbr_partition_function(g, as_order(order), ibound);
        double replay = verify_trace(res.trace).log10_z;
        return std::make_pair(res.log_z.log10_z, replay);
      },
      py::arg("graph"), py::arg("order"), py::arg("ibound"),
      "Returns (estimate, exact log10 Z of the final renormalized graph).");
  m.def(
      "gbr",
      [](const FactorGraph& g, const std::vector<VariableId>& order,
         int ibound, int sweeps, int width_cap) {
        return gbr_partition_function(g, as_order(order), ibound, sweeps,
                                      width_cap)
            .log10_z;
      },
      py::arg("graph"), py::arg("order"), py::arg("ibound"),
      py::arg("sweeps") = 1, py::arg("width_cap") = kDefaultWidthCap);
  m.def(
      "brute_force_log10z",
      [](const FactorGraph& g) { return brute_force_logZ(g).log10_z; },
      py::arg("graph"));

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<ResourceCapError>(m, "ResourceCapError",
                                           PyExc_RuntimeError);
}

#include "bucketforge/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bucketforge/errors.hpp"

namespace bucketforge {

std::int32_t DomainSpec::cardinality(VariableId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= cardinalities.size())
    throw ModelError("variable id " + std::to_string(v) + " out of range");
  return cardinalities[v];
}

void DomainSpec::validate() const {
  if (cardinalities.empty()) throw ModelError("model has no variables");
  for (auto d : cardinalities)
    if (d < 1) throw ModelError("variable cardinality must be >= 1");
}

Factor::Factor(std::vector<VariableId> scope_in, std::vector<double> table_in,
               double log_scale_in)
    : scope(std::move(scope_in)),
      table(std::move(table_in)),
      log_scale(log_scale_in) {
  for (std::size_t k = 1; k < scope.size(); ++k)
    if (scope[k - 1] >= scope[k])
      throw ModelError("factor scope must be sorted and duplicate-free");
  for (double v : table)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ModelError("factor entries must be finite and non-negative");
  if (!std::isfinite(log_scale)) throw ModelError("non-finite log_scale");
}

Factor Factor::scalar(double value, double log_scale_in) {
  return Factor({}, {value}, log_scale_in);
}

bool Factor::contains(VariableId v) const {
  return std::binary_search(scope.begin(), scope.end(), v);
}

double Factor::linear(std::size_t idx) const {
  return table[idx] * std::pow(10.0, log_scale);
}

void validate_factor(const Factor& f, const DomainSpec& domains) {
  for (VariableId v : f.scope) domains.cardinality(v);
  if (f.table.size() != scope_table_size(f.scope, domains))
    throw ModelError("factor table length does not match scope cardinalities");
}

std::vector<std::size_t> scope_strides(std::span<const VariableId> scope,
                                       const DomainSpec& domains) {
  std::vector<std::size_t> strides(scope.size());
  std::size_t acc = 1;
  for (std::size_t k = scope.size(); k-- > 0;) {
    strides[k] = acc;
    acc *= static_cast<std::size_t>(domains.cardinality(scope[k]));
  }
  return strides;
}

std::size_t scope_table_size(std::span<const VariableId> scope,
                             const DomainSpec& domains) {
  std::size_t acc = 1;
  for (VariableId v : scope)
    acc *= static_cast<std::size_t>(domains.cardinality(v));
  return acc;
}

namespace {

// Fold the max entry into log_scale so the table's max becomes 1.
void rescale_to_unit_max(Factor& f) {
  double mx = 0.0;
  for (double v : f.table) mx = std::max(mx, v);
  if (mx > 0.0 && mx != 1.0) {
    for (double& v : f.table) v /= mx;
    f.log_scale += std::log10(mx);
  }
}

std::vector<VariableId> scope_union(std::span<const Factor> factors) {
  std::vector<VariableId> u;
  for (const Factor& f : factors) {
    std::vector<VariableId> merged;
    merged.reserve(u.size() + f.scope.size());
    std::set_union(u.begin(), u.end(), f.scope.begin(), f.scope.end(),
                   std::back_inserter(merged));
    u = std::move(merged);
  }
  return u;
}

}  // namespace

Factor factor_product(std::span<const Factor> factors,
                      const DomainSpec& domains) {
  if (factors.empty()) return Factor::scalar(1.0);
  for (const Factor& f : factors) validate_factor(f, domains);

  std::vector<VariableId> uscope = scope_union(factors);
  const std::size_t usize = scope_table_size(uscope, domains);
  const std::vector<std::size_t> ustrides = scope_strides(uscope, domains);

  // Per input factor, the stride of each union variable inside that
  // factor's table (0 when absent), so one odometer walk drives all
  // input positions at once.
  const std::size_t nf = factors.size();
  std::vector<std::vector<std::size_t>> strides_in(nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    const Factor& f = factors[fi];
    const auto fstrides = scope_strides(f.scope, domains);
    strides_in[fi].assign(uscope.size(), 0);
    for (std::size_t k = 0; k < uscope.size(); ++k) {
      auto it = std::lower_bound(f.scope.begin(), f.scope.end(), uscope[k]);
      if (it != f.scope.end() && *it == uscope[k])
        strides_in[fi][k] =
            fstrides[static_cast<std::size_t>(it - f.scope.begin())];
    }
  }

  double out_log_scale = 0.0;
  for (const Factor& f : factors) out_log_scale += f.log_scale;

  std::vector<double> out(usize, 1.0);
  std::vector<std::int32_t> assign(uscope.size(), 0);
  std::vector<std::size_t> pos(nf, 0);
  for (std::size_t idx = 0;; ++idx) {
    double p = 1.0;
    for (std::size_t fi = 0; fi < nf; ++fi) p *= factors[fi].table[pos[fi]];
    out[idx] = p;
    // advance odometer, last scope variable fastest
    std::size_t k = uscope.size();
    while (k-- > 0) {
      ++assign[k];
      for (std::size_t fi = 0; fi < nf; ++fi) pos[fi] += strides_in[fi][k];
      if (assign[k] < domains.cardinality(uscope[k])) break;
      for (std::size_t fi = 0; fi < nf; ++fi)
        pos[fi] -= strides_in[fi][k] * static_cast<std::size_t>(assign[k]);
      assign[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }

  Factor result(std::move(uscope), std::move(out), out_log_scale);
  rescale_to_unit_max(result);
  return result;
}

Factor factor_marginalize(const Factor& f, VariableId i, MarginalMode mode,
                          const DomainSpec& domains) {
  validate_factor(f, domains);
  auto it = std::lower_bound(f.scope.begin(), f.scope.end(), i);
  if (it == f.scope.end() || *it != i)
    throw ModelError("marginalized variable not in factor scope");
  const std::size_t axis = static_cast<std::size_t>(it - f.scope.begin());
  const auto strides = scope_strides(f.scope, domains);
  const std::size_t di = static_cast<std::size_t>(domains.cardinality(i));
  const std::size_t stride_i = strides[axis];

  std::vector<VariableId> out_scope(f.scope);
  out_scope.erase(out_scope.begin() + static_cast<std::ptrdiff_t>(axis));
  const std::size_t out_size = f.table.size() / di;
  std::vector<double> out(out_size, 0.0);

  // outer = index over scope vars before axis, inner = after axis
  const std::size_t inner = stride_i;
  const std::size_t outer = out_size / inner;
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t src_base = o * inner * di;
    const std::size_t dst_base = o * inner;
    for (std::size_t in = 0; in < inner; ++in) {
      double acc;
      switch (mode) {
        case MarginalMode::Sum: {
          acc = 0.0;
          for (std::size_t x = 0; x < di; ++x)
            acc += f.table[src_base + x * stride_i + in];
          break;
        }
        case MarginalMode::Max: {
          acc = f.table[src_base + in];
          for (std::size_t x = 1; x < di; ++x)
            acc = std::max(acc, f.table[src_base + x * stride_i + in]);
          break;
        }
        case MarginalMode::Min: {
          acc = f.table[src_base + in];
          for (std::size_t x = 1; x < di; ++x)
            acc = std::min(acc, f.table[src_base + x * stride_i + in]);
          break;
        }
      }
      out[dst_base + in] = acc;
    }
  }

  Factor result(std::move(out_scope), std::move(out), f.log_scale);
  rescale_to_unit_max(result);
  return result;
}

Matrix factor_matricize(const Factor& f, VariableId i,
                        const DomainSpec& domains) {
  validate_factor(f, domains);
  auto it = std::lower_bound(f.scope.begin(), f.scope.end(), i);
  if (it == f.scope.end() || *it != i)
    throw ModelError("matricized variable not in factor scope");
  const std::size_t axis = static_cast<std::size_t>(it - f.scope.begin());
  const auto strides = scope_strides(f.scope, domains);
  const std::size_t di = static_cast<std::size_t>(domains.cardinality(i));
  const std::size_t stride_i = strides[axis];
  const std::size_t cols = f.table.size() / di;

  Matrix m(di, cols);
  const std::size_t inner = stride_i;
  const std::size_t outer = cols / inner;
  for (std::size_t x = 0; x < di; ++x)
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < inner; ++in)
        m.at(x, o * inner + in) = f.table[o * inner * di + x * stride_i + in];
  return m;
}

Factor rename_variable(const Factor& f, VariableId from, VariableId to,
                       const DomainSpec& domains) {
  if (!f.contains(from)) return f;
  if (f.contains(to))
    throw ModelError("rename target already present in factor scope");
  if (domains.cardinality(from) != domains.cardinality(to))
    throw ModelError("rename between variables of different cardinality");

  std::vector<VariableId> new_scope;
  new_scope.reserve(f.scope.size());
  for (VariableId v : f.scope)
    if (v != from) new_scope.push_back(v);
  auto ins = std::lower_bound(new_scope.begin(), new_scope.end(), to);
  new_scope.insert(ins, to);

  const auto old_strides = scope_strides(f.scope, domains);
  const auto new_strides = scope_strides(new_scope, domains);
  // stride of each old-scope variable inside the new table
  std::vector<std::size_t> map_strides(f.scope.size());
  for (std::size_t k = 0; k < f.scope.size(); ++k) {
    VariableId v = f.scope[k] == from ? to : f.scope[k];
    auto pos = std::lower_bound(new_scope.begin(), new_scope.end(), v);
    map_strides[k] = new_strides[static_cast<std::size_t>(pos - new_scope.begin())];
  }

  std::vector<double> out(f.table.size());
  std::vector<std::int32_t> assign(f.scope.size(), 0);
  std::size_t dst = 0;
  for (std::size_t src = 0;; ++src) {
    out[dst] = f.table[src];
    std::size_t k = f.scope.size();
    while (k-- > 0) {
      ++assign[k];
      dst += map_strides[k];
      if (assign[k] < domains.cardinality(f.scope[k])) break;
      dst -= map_strides[k] * static_cast<std::size_t>(assign[k]);
      assign[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return Factor(std::move(new_scope), std::move(out), f.log_scale);
}

void FactorGraph::validate() const {
  domains.validate();
  for (const Factor& f : factors) validate_factor(f, domains);
}

}  // namespace bucketforge

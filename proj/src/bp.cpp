#include "cpcdec/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cpcdec {

namespace {

struct Graph {
  int num_vars = 0;
  std::vector<std::uint64_t> scopes;
  std::vector<double> coeffs;
};

/// True when the variable-factor incidence graph (multi-variable factors
/// only) contains a cycle; union-find over variables.
bool has_cycle(const Graph& g) {
  std::vector<int> parent(g.num_vars);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::uint64_t scope : g.scopes) {
    int prev = -1;
    for (int v = 0; v < g.num_vars; ++v) {
      if (!((scope >> v) & 1)) continue;
      if (prev >= 0) {
        const int a = find(prev);
        const int b = find(v);
        if (a == b) return true;
        parent[a] = b;
      }
      prev = v;
    }
  }
  return false;
}

std::vector<int> greedy_cutset(Graph g, int cap) {
  std::vector<int> cut;
  std::uint64_t clamped = 0;
  while (static_cast<int>(cut.size()) < cap) {
    Graph reduced;
    reduced.num_vars = g.num_vars;
    for (std::uint64_t scope : g.scopes) {
      const std::uint64_t s = scope & ~clamped;
      if (std::popcount(s) >= 2) reduced.scopes.push_back(s);
    }
    if (!has_cycle(reduced)) break;
    // Clamp the variable appearing in the most multi-variable factors.
    std::vector<int> degree(g.num_vars, 0);
    for (std::uint64_t s : reduced.scopes) {
      for (int v = 0; v < g.num_vars; ++v)
        if ((s >> v) & 1) ++degree[v];
    }
    const int pick =
        static_cast<int>(std::max_element(degree.begin(), degree.end()) - degree.begin());
    cut.push_back(pick);
    clamped |= std::uint64_t{1} << pick;
  }
  std::sort(cut.begin(), cut.end());
  return cut;
}

struct SumProductResult {
  std::vector<double> mean;  // E[sigma_v] per unclamped variable (0 elsewhere)
  double bethe_log_z = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped sum-product over product-form factors exp(c * prod sigma / T).
/// Messages are parameterized by their mean d = m(+1) - m(-1); the
/// factor-to-variable update for a parity-product factor is
/// d = tanh(c/T) * prod(incoming d). Exact on trees.
SumProductResult sum_product(const Graph& g, double temperature, double damping, int max_iters,
                             double tolerance) {
  const int num_factors = static_cast<int>(g.scopes.size());
  std::vector<std::vector<int>> factor_vars(num_factors);
  std::vector<std::vector<int>> var_factors(g.num_vars);
  for (int f = 0; f < num_factors; ++f) {
    for (int v = 0; v < g.num_vars; ++v) {
      if ((g.scopes[f] >> v) & 1) {
        factor_vars[f].push_back(v);
        var_factors[v].push_back(f);
      }
    }
  }
  // message storage indexed by (factor, position-in-scope)
  std::vector<std::vector<double>> f2v(num_factors);
  std::vector<std::vector<double>> v2f(num_factors);
  for (int f = 0; f < num_factors; ++f) {
    f2v[f].assign(factor_vars[f].size(), 0.0);
    v2f[f].assign(factor_vars[f].size(), 0.0);
  }
  auto position = [&](int f, int v) {
    const auto& vars = factor_vars[f];
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };

  SumProductResult out;
  double residual = 0.0;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    residual = 0.0;
    for (int f = 0; f < num_factors; ++f) {
      const double th = std::tanh(g.coeffs[f] / temperature);
      const auto& vars = factor_vars[f];
      for (size_t i = 0; i < vars.size(); ++i) {
        double prod = 1.0;
        for (size_t jj = 0; jj < vars.size(); ++jj) {
          if (jj != i) prod *= v2f[f][jj];
        }
        const double d = damping * f2v[f][i] + (1.0 - damping) * th * prod;
        residual = std::max(residual, std::abs(d - f2v[f][i]));
        f2v[f][i] = d;
      }
    }
    for (int v = 0; v < g.num_vars; ++v) {
      for (int f : var_factors[v]) {
        double plus = 1.0, minus = 1.0;
        for (int f2 : var_factors[v]) {
          if (f2 == f) continue;
          const double d = f2v[f2][position(f2, v)];
          plus *= (1.0 + d) / 2.0;
          minus *= (1.0 - d) / 2.0;
        }
        const double total = plus + minus;
        v2f[f][position(f, v)] = total > 0.0 ? (plus - minus) / total : 0.0;
      }
    }
    if (residual < tolerance) {
      ++iter;
      out.converged = true;
      break;
    }
  }
  out.iterations = iter;
  out.residual = residual;

  out.mean.assign(g.num_vars, 0.0);
  std::vector<int> degree(g.num_vars, 0);
  for (int v = 0; v < g.num_vars; ++v) {
    degree[v] = static_cast<int>(var_factors[v].size());
    double plus = 1.0, minus = 1.0;
    for (int f : var_factors[v]) {
      const double d = f2v[f][position(f, v)];
      plus *= (1.0 + d) / 2.0;
      minus *= (1.0 - d) / 2.0;
    }
    const double total = plus + minus;
    out.mean[v] = total > 0.0 ? (plus - minus) / total : 0.0;
  }

  // Bethe free energy; equals the exact log partition function on trees.
  double log_z = 0.0;
  for (int f = 0; f < num_factors; ++f) {
    const auto& vars = factor_vars[f];
    const size_t size = vars.size();
    std::vector<double> belief(std::size_t{1} << size);
    double zf = 0.0;
    for (std::uint64_t bits = 0; bits < belief.size(); ++bits) {
      const int sign = (std::popcount(bits) & 1) ? -1 : +1;
      double w = std::exp(g.coeffs[f] * sign / temperature);
      for (size_t i = 0; i < size; ++i) {
        const double d = v2f[f][i];
        w *= ((bits >> i) & 1) ? (1.0 - d) / 2.0 : (1.0 + d) / 2.0;
      }
      belief[bits] = w;
      zf += w;
    }
    for (std::uint64_t bits = 0; bits < belief.size(); ++bits) {
      if (belief[bits] <= 0.0) continue;
      const double b = belief[bits] / zf;
      const int sign = (std::popcount(bits) & 1) ? -1 : +1;
      log_z += b * (g.coeffs[f] * sign / temperature - std::log(b));
    }
  }
  for (int v = 0; v < g.num_vars; ++v) {
    if (degree[v] == 0) {
      log_z += std::log(2.0);  // free variable
      continue;
    }
    const double p = (1.0 + out.mean[v]) / 2.0;
    double entropy = 0.0;
    if (p > 0.0) entropy -= p * std::log(p);
    if (p < 1.0) entropy -= (1.0 - p) * std::log(1.0 - p);
    log_z -= (degree[v] - 1) * entropy;
  }
  out.bethe_log_z = log_z;
  return out;
}

struct ConditionedRun {
  std::uint64_t clamp_minus = 0;  // minus-assignment over the cutset bits
  SumProductResult sp;
  double log_weight = 0.0;
};

}  // namespace

BpMarginals bp_marginals(const FactorGraph& graph, const BpOptions& options) {
  Graph g;
  g.num_vars = graph.num_variables;
  for (const Factor& f : graph.factors) {
    g.scopes.push_back(f.vars);
    g.coeffs.push_back(f.weight);
  }
  const SumProductResult r =
      sum_product(g, options.temperature, options.damping, options.max_iters, options.tolerance);
  BpMarginals out;
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.marginals.resize(g.num_vars);
  for (int v = 0; v < g.num_vars; ++v) out.marginals[v] = (1.0 + r.mean[v]) / 2.0;
  return out;
}

BpResult bp_decode(const FactorGraph& graph, const PropagationModel& prop,
                   const CheckSets& checks, const Syndrome& syndrome,
                   const BpOptions& options) {
  const int nv = graph.num_variables;
  const int k = checks.k;

  Graph base;
  base.num_vars = nv;
  for (const Factor& f : graph.factors) {
    base.scopes.push_back(f.vars);
    base.coeffs.push_back(f.weight);
  }
  const std::vector<int> cutset = greedy_cutset(base, options.max_cutset);
  std::uint64_t cut_mask = 0;
  for (int v : cutset) cut_mask |= std::uint64_t{1} << v;

  std::vector<ConditionedRun> runs;
  runs.reserve(std::size_t{1} << cutset.size());
  bool all_converged = true;
  int max_iters_seen = 0;
  double max_residual = 0.0;
  for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << cutset.size()); ++assign) {
    std::uint64_t clamp_minus = 0;
    for (size_t i = 0; i < cutset.size(); ++i) {
      if ((assign >> i) & 1) clamp_minus |= std::uint64_t{1} << cutset[i];
    }
    Graph g;
    g.num_vars = nv;
    double clamped_log_w = 0.0;
    for (size_t f = 0; f < base.scopes.size(); ++f) {
      const std::uint64_t scope = base.scopes[f];
      const double c = base.coeffs[f] * parity_sign(scope & clamp_minus);
      const std::uint64_t reduced = scope & ~cut_mask;
      if (reduced == 0) {
        clamped_log_w += c / options.temperature;  // fully clamped factor
      } else {
        g.scopes.push_back(reduced);
        g.coeffs.push_back(c);
      }
    }
    ConditionedRun run;
    run.clamp_minus = clamp_minus;
    run.sp = sum_product(g, options.temperature, options.damping, options.max_iters,
                         options.tolerance);
    // Cutset variables are fixed inside this run; zero their means so the
    // per-run independence product skips them.
    for (int v : cutset) run.sp.mean[v] = 0.0;
    run.log_weight = run.sp.bethe_log_z + clamped_log_w;
    // The Bethe sum already counts clamped variables as free when they end
    // up isolated; they are not part of the conditioned graph at all, and
    // sum_product only adds log 2 for unclamped isolated variables, so the
    // weight is consistent across assignments.
    all_converged = all_converged && run.sp.converged;
    max_iters_seen = std::max(max_iters_seen, run.sp.iterations);
    max_residual = std::max(max_residual, run.sp.residual);
    runs.push_back(std::move(run));
  }

  // Mixture weights over cutset assignments.
  double max_lw = runs.front().log_weight;
  for (const auto& r : runs) max_lw = std::max(max_lw, r.log_weight);
  double z = 0.0;
  std::vector<double> weight(runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    weight[i] = std::exp(runs[i].log_weight - max_lw);
    z += weight[i];
  }
  for (double& w : weight) w /= z;

  BpResult result;
  result.converged = all_converged;
  result.iterations = max_iters_seen;
  result.residual = max_residual;
  result.cutset = cutset;
  result.marginals.assign(nv, 0.0);
  for (size_t i = 0; i < runs.size(); ++i) {
    for (int v = 0; v < nv; ++v) {
      double p_plus;
      if ((cut_mask >> v) & 1) {
        p_plus = ((runs[i].clamp_minus >> v) & 1) ? 0.0 : 1.0;
      } else {
        p_plus = (1.0 + runs[i].sp.mean[v]) / 2.0;
      }
      result.marginals[v] += weight[i] * p_plus;
    }
  }

  // Class vote: the residual logical X (Z) component on qubit q is a
  // parity over a fixed set of explicit variables plus the syndrome sign;
  // estimate its expectation per conditioned run treating unclamped
  // variables as independent, then mix.
  std::vector<std::uint64_t> x_masks(k, 0), z_masks(k, 0);
  std::vector<int> x_signs(k, 1), z_signs(k, 1);
  for (int v = 0; v < checks.num_explicit(); ++v) {
    const PauliEffect& col = prop.columns[explicit_var_column(prop, v)];
    for (int q = 0; q < k; ++q) {
      if ((col.logical_x >> q) & 1) x_masks[q] ^= std::uint64_t{1} << v;
      if ((col.logical_z >> q) & 1) z_masks[q] ^= std::uint64_t{1} << v;
    }
  }
  // Implied parity-qubit bit errors contribute nothing to the logical
  // action (INV-X), so the masks above are complete.

  Correction corr;
  corr.strategy = "bp";
  corr.votes.assign(static_cast<size_t>(k), {0.0, 0.0, 0.0, 0.0});
  for (size_t i = 0; i < runs.size(); ++i) {
    auto mean_product = [&](std::uint64_t mask) {
      double prod = 1.0;
      for (int v = 0; v < nv; ++v) {
        if (!((mask >> v) & 1)) continue;
        if ((cut_mask >> v) & 1) {
          prod *= ((runs[i].clamp_minus >> v) & 1) ? -1.0 : 1.0;
        } else {
          prod *= runs[i].sp.mean[v];
        }
      }
      return prod;
    };
    for (int q = 0; q < k; ++q) {
      const double ex = mean_product(x_masks[q]);
      const double ez = mean_product(z_masks[q]);
      const double exz = mean_product(x_masks[q] ^ z_masks[q]);
      for (int xb = 0; xb < 2; ++xb) {
        for (int zb = 0; zb < 2; ++zb) {
          const double sx = xb ? -1.0 : 1.0;
          const double sz = zb ? -1.0 : 1.0;
          const double p = (1.0 + sx * ex + sz * ez + sx * sz * exz) / 4.0;
          corr.votes[q][xb | (zb << 1)] += weight[i] * std::max(p, 0.0);
        }
      }
    }
  }
  corr.classes.resize(k);
  for (int q = 0; q < k; ++q) {
    int best = 0;
    for (int c = 1; c < 4; ++c) {
      if (corr.votes[q][c] > corr.votes[q][best] + 1e-12) best = c;
    }
    corr.classes[q] = static_cast<PauliClass>(best);
  }
  (void)syndrome;
  result.correction = std::move(corr);
  return result;
}

}  // namespace cpcdec

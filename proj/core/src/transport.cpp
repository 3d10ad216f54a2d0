#include "mixbound/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixbound/error.hpp"

namespace mixbound {

namespace {

std::vector<std::size_t> canonical_order(const DiscreteMeasure& p) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = p.atom(a);
    const auto& y = p.atom(b);
    if (x != y) return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    return p.weight(a) < p.weight(b);
  });
  return idx;
}

struct Cell {
  std::size_t i;
  std::size_t j;
  double flow;
};

/// Transportation simplex on dense costs. Supplies and demands are positive and
/// sum to (nearly) the same total.
class TransportSolver {
 public:
  TransportSolver(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
      : m_(supply.size()), n_(demand.size()), a_(std::move(supply)), b_(std::move(demand)), c_(std::move(cost)) {}

  void solve() {
    north_west_corner();
    double cmax = 0.0;
    for (double x : c_) cmax = std::max(cmax, x);
    const double eps = 1e-12 * (1.0 + cmax);
    in_basis_.assign(m_ * n_, false);
    for (const auto& cell : basis_) in_basis_[cell.i * n_ + cell.j] = true;
    while (true) {
      compute_potentials();
      std::size_t enter = m_ * n_;
      for (std::size_t k = 0; k < m_ * n_ && enter == m_ * n_; ++k) {
        if (in_basis_[k]) continue;
        const std::size_t i = k / n_;
        const std::size_t j = k % n_;
        if (c_[k] - u_[i] - v_[j] < -eps) enter = k;
      }
      if (enter == m_ * n_) break;
      pivot(enter / n_, enter % n_);
    }
  }

  const std::vector<Cell>& basis() const { return basis_; }
  const Vector& u() const { return u_; }
  const Vector& v() const { return v_; }

 private:
  void north_west_corner() {
    std::size_t i = 0;
    std::size_t j = 0;
    double s = a_[0];
    double d = b_[0];
    while (true) {
      const double f = std::min(s, d);
      basis_.push_back({i, j, f});
      s -= f;
      d -= f;
      if (i == m_ - 1 && j == n_ - 1) break;
      if ((s <= d && i < m_ - 1) || j == n_ - 1) {
        s = a_[++i];
      } else {
        d = b_[++j];
      }
    }
  }

  void build_adjacency() {
    adj_.assign(m_ + n_, {});
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj_[basis_[e].i].push_back(e);
      adj_[m_ + basis_[e].j].push_back(e);
    }
  }

  std::size_t other_end(std::size_t node, std::size_t e) const {
    return node < m_ ? m_ + basis_[e].j : basis_[e].i;
  }

  void compute_potentials() {
    build_adjacency();
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t e : adj_[node]) {
        const std::size_t next = other_end(node, e);
        if (seen[next]) continue;
        seen[next] = true;
        const double c = c_[basis_[e].i * n_ + basis_[e].j];
        if (next < m_) u_[next] = c - v_[basis_[e].j];
        else v_[next - m_] = c - u_[basis_[e].i];
        stack.push_back(next);
      }
    }
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Tree path from row ei to column ej; the cycle closes through the entering cell.
    std::vector<std::size_t> parent_edge(m_ + n_, basis_.size());
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> queue{ei};
    seen[ei] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::size_t node = queue[h];
      if (node == m_ + ej) break;
      for (std::size_t e : adj_[node]) {
        const std::size_t next = other_end(node, e);
        if (seen[next]) continue;
        seen[next] = true;
        parent_edge[next] = e;
        queue.push_back(next);
      }
    }
    std::vector<std::size_t> path;  // edges from the column end back to the row
    for (std::size_t node = m_ + ej; node != ei;) {
      const std::size_t e = parent_edge[node];
      path.push_back(e);
      node = other_end(node, e);
    }
    // Edges at even positions lose flow.
    std::size_t leave = basis_.size();
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& cell = basis_[path[k]];
      const std::size_t key = cell.i * n_ + cell.j;
      if (cell.flow < theta ||
          (cell.flow == theta && key < basis_[leave].i * n_ + basis_[leave].j)) {
        theta = cell.flow;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      Cell& cell = basis_[path[k]];
      cell.flow = k % 2 == 0 ? cell.flow - theta : cell.flow + theta;
    }
    in_basis_[basis_[leave].i * n_ + basis_[leave].j] = false;
    basis_[leave] = {ei, ej, theta};
    in_basis_[ei * n_ + ej] = true;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<Cell> basis_;
  std::vector<bool> in_basis_;
  std::vector<std::vector<std::size_t>> adj_;
  Vector u_;
  Vector v_;
};

}  // namespace

double w1_1d(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require(p.dim() == 1 && q.dim() == 1, ErrorKind::unsupported_dimension, "w1_1d needs univariate measures");
  struct Jump {
    double x;
    double dw;
  };
  std::vector<Jump> jumps;
  for (std::size_t i = 0; i < p.size(); ++i) jumps.push_back({p.atom(i)[0], p.weight(i)});
  for (std::size_t j = 0; j < q.size(); ++j) jumps.push_back({q.atom(j)[0], -q.weight(j)});
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) {
    return a.x < b.x || (a.x == b.x && a.dw < b.dw);
  });
  double total = 0.0;
  double cdf_gap = 0.0;
  for (std::size_t k = 0; k + 1 < jumps.size(); ++k) {
    cdf_gap += jumps[k].dw;
    total += std::abs(cdf_gap) * (jumps[k + 1].x - jumps[k].x);
  }
  return total;
}

TransportPlan w1_exact(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  require(p.dim() == q.dim(), ErrorKind::shape, "measures have different dimensions");
  const std::size_t m = p.size();
  const std::size_t n = q.size();
  require(m * n <= kMaxTransportCells, ErrorKind::size,
          "transport problem " + std::to_string(m) + "x" + std::to_string(n) + " exceeds the cell limit");

  const auto rows = canonical_order(p);
  const auto cols = canonical_order(q);
  std::vector<std::size_t> kept_rows;
  std::vector<std::size_t> kept_cols;
  for (std::size_t r : rows)
    if (p.weight(r) > 0.0) kept_rows.push_back(r);
  for (std::size_t c : cols)
    if (q.weight(c) > 0.0) kept_cols.push_back(c);

  auto cost_of = [&](std::size_t i, std::size_t j) { return distance(p.atom(i), q.atom(j)); };

  const std::size_t mk = kept_rows.size();
  const std::size_t nk = kept_cols.size();
  std::vector<double> supply(mk);
  std::vector<double> demand(nk);
  std::vector<double> cost(mk * nk);
  for (std::size_t a = 0; a < mk; ++a) supply[a] = p.weight(kept_rows[a]);
  for (std::size_t b = 0; b < nk; ++b) demand[b] = q.weight(kept_cols[b]);
  for (std::size_t a = 0; a < mk; ++a)
    for (std::size_t b = 0; b < nk; ++b) cost[a * nk + b] = cost_of(kept_rows[a], kept_cols[b]);

  TransportSolver solver(supply, demand, cost);
  solver.solve();

  TransportPlan plan;
  plan.rows = m;
  plan.cols = n;
  plan.flow.assign(m * n, 0.0);
  plan.u.assign(m, 0.0);
  plan.v.assign(n, 0.0);

  // Canonical-order accumulation keeps the cost bit-stable under relabelling.
  std::vector<double> canon_flow(mk * nk, 0.0);
  for (const auto& cell : solver.basis()) canon_flow[cell.i * nk + cell.j] = std::max(0.0, cell.flow);
  for (std::size_t a = 0; a < mk; ++a)
    for (std::size_t b = 0; b < nk; ++b) {
      const double f = canon_flow[a * nk + b];
      plan.flow[kept_rows[a] * n + kept_cols[b]] = f;
      plan.cost += f * cost[a * nk + b];
    }

  const double shift = solver.u()[0];
  std::vector<bool> row_set(m, false);
  std::vector<bool> col_set(n, false);
  for (std::size_t a = 0; a < mk; ++a) {
    plan.u[kept_rows[a]] = solver.u()[a] - shift;
    row_set[kept_rows[a]] = true;
  }
  for (std::size_t b = 0; b < nk; ++b) {
    plan.v[kept_cols[b]] = solver.v()[b] + shift;
    col_set[kept_cols[b]] = true;
  }
  // Zero-weight atoms get c-transform potentials, which keeps feasibility.
  for (std::size_t c : cols) {
    if (col_set[c]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r : kept_rows) best = std::min(best, cost_of(r, c) - plan.u[r]);
    plan.v[c] = best;
  }
  for (std::size_t r : rows) {
    if (row_set[r]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c : cols) best = std::min(best, cost_of(r, c) - plan.v[c]);
    plan.u[r] = best;
  }
  return plan;
}

double product_w1(const MixtureConfig& g, const MixtureConfig& gp) {
  require(g.space == gp.space, ErrorKind::shape, "mixtures live in different parameter spaces");
  return w1_exact(g.mixing, gp.mixing).cost + operator_norm_distance(g.scale, gp.scale);
}

}  // namespace mixbound

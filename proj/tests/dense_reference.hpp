#pragma once

// Deliberately naive layer implementations over a dense adjacency matrix.
// Shares no code with the library's CSR kernels.

#include <cmath>
#include <vector>

#include "zol/graph.hpp"
#include "zol/model.hpp"

namespace zol::testing {

using Dense = std::vector<std::vector<int>>;

inline Dense dense_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Dense a(n, std::vector<int>(n, 0));
  for (const auto& [u, v] : g.edge_list()) {
    a[u][v] = 1;
    a[v][u] = 1;
  }
  return a;
}

inline double dot_row(const Matrix& w, Index i, const Matrix& x, std::size_t col) {
  double s = 0.0;
  for (Index k = 0; k < w.cols(); ++k) s += w(i, k) * x(k, static_cast<Index>(col));
  return s;
}

inline Matrix reference_layer(const Model& m, std::size_t t, const Dense& a, const Matrix& x) {
  const Layer& L = m.layers[t];
  const std::size_t n = a.size();
  const Index d = L.W_n.rows();
  const Index din = L.W_n.cols();
  std::vector<int> deg(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u) deg[v] += a[v][u];

  Matrix y(d, static_cast<Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    for (Index i = 0; i < d; ++i) {
      double acc = L.b(i);
      switch (m.arch) {
        case Architecture::gcn: {
          for (std::size_t u = 0; u < n; ++u) {
            if (u != v && !a[v][u]) continue;
            acc += dot_row(L.W_n, i, x, u) / std::sqrt(double(deg[u] + 1) * double(deg[v] + 1));
          }
          break;
        }
        case Architecture::mean:
        case Architecture::mean_plus: {
          double nb = 0.0;
          for (std::size_t u = 0; u < n; ++u)
            if (u == v || a[v][u]) nb += dot_row(L.W_n, i, x, u);
          acc += nb / double(deg[v] + 1);
          if (L.W_r) {
            double all = 0.0;
            for (std::size_t u = 0; u < n; ++u) all += dot_row(*L.W_r, i, x, u);
            acc += all / double(n);
          }
          break;
        }
        case Architecture::sum:
        case Architecture::sum_plus: {
          acc += dot_row(*L.W_s, i, x, v);
          for (std::size_t u = 0; u < n; ++u)
            if (a[v][u]) acc += dot_row(L.W_n, i, x, u);
          if (L.W_r)
            for (std::size_t u = 0; u < n; ++u) acc += dot_row(*L.W_r, i, x, u);
          break;
        }
        case Architecture::gat: {
          std::vector<std::size_t> nbhd{v};
          for (std::size_t u = 0; u < n; ++u)
            if (a[v][u]) nbhd.push_back(u);
          std::vector<double> e;
          for (std::size_t u : nbhd) {
            double s = 0.0;
            for (Index k = 0; k < d; ++k) s += (*L.a)(k)*dot_row(L.W_n, k, x, v) + (*L.a)(d + k) * dot_row(L.W_n, k, x, u);
            e.push_back(s > 0 ? s : L.slope * s);
          }
          double mx = e[0];
          for (double s : e) mx = std::max(mx, s);
          double z = 0.0;
          for (double& s : e) z += (s = std::exp(s - mx));
          for (std::size_t j = 0; j < nbhd.size(); ++j) acc += e[j] / z * dot_row(L.W_n, i, x, nbhd[j]);
          break;
        }
      }
      y(i, static_cast<Index>(v)) = m.sigma(acc);
    }
  }
  (void)din;
  return y;
}

inline std::vector<Matrix> reference_forward(const Model& m, const Graph& g, const Matrix& x0) {
  const Dense a = dense_adjacency(g);
  std::vector<Matrix> out{x0};
  for (std::size_t t = 0; t < m.layers.size(); ++t) out.push_back(reference_layer(m, t, a, out.back()));
  return out;
}

}  // namespace zol::testing

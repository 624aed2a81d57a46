#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chaoskit/errors.hpp"
#include "chaoskit/quadrature.hpp"

namespace chaoskit {

TridiagonalEigen symtridiag_eigen(const SymTridiagonal& t) {
  const std::size_t n = t.diagonal.size();
  if (n == 0) throw ShapeError("symtridiag_eigen: empty matrix");
  if (t.subdiagonal.size() + 1 != n) {
    throw ShapeError("symtridiag_eigen: subdiagonal must have length n - 1");
  }

  std::vector<double> d = t.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(t.subdiagonal.begin(), t.subdiagonal.end(), e.begin());
  // First row of the accumulated rotation matrix.
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_sweeps = 30 * n;
  std::size_t sweeps = 0;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > max_sweeps) {
        throw EigensolverError("symtridiag_eigen: no convergence after " +
                               std::to_string(max_sweeps) + " QL sweeps");
      }

      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t ii = m; ii-- > l;) {
        const double f = s * e[ii];
        const double b = c * e[ii];
        r = std::hypot(f, g);
        e[ii + 1] = r;
        if (r == 0.0) {
          d[ii + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;

        const double zf = z[ii + 1];
        z[ii + 1] = s * z[ii] + c * zf;
        z[ii] = c * z[ii] - s * zf;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.eigenvalues.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t i : order) {
    out.eigenvalues.push_back(d[i]);
    out.first_components.push_back(std::abs(z[i]));
  }
  return out;
}

}  // namespace chaoskit

#pragma once

#include <algorithm>
#include <cmath>

namespace feig {

template <class Fn>
std::vector<cplx> adaptive_sample(Fn&& f, double t0, double t1, int initial, double rel_tol,
                                  double abs_tol, int max_points) {
  struct Node {
    double t;
    cplx z;
  };
  const int n0 = std::max(2, initial);
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / (n0 - 1);
    nodes.push_back({t, f(t)});
  }
  std::vector<cplx> zs(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) zs[i] = nodes[i].z;
  const double diam = std::max(diameter(zs), 1e-300);
  const double tol = abs_tol > 0.0 ? std::min(rel_tol * diam, abs_tol) : rel_tol * diam;

  // Depth-first refinement keeps the output ordered.
  std::vector<cplx> out;
  out.push_back(nodes.front().z);
  struct Span {
    Node a, b;
    int level;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    std::vector<Span> stack{{nodes[i], nodes[i + 1], 0}};
    while (!stack.empty()) {
      Span s = stack.back();
      stack.pop_back();
      const double tm = 0.5 * (s.a.t + s.b.t);
      const cplx zm = f(tm);
      const double dev = point_segment_distance(zm, s.a.z, s.b.z);
      const bool split = (dev > tol || std::abs(s.b.z - s.a.z) > 0.05 * diam) && s.level < 40 &&
                         static_cast<int>(out.size()) < max_points;
      if (split) {
        // Push right half first so the left half is processed next.
        stack.push_back({{tm, zm}, s.b, s.level + 1});
        stack.push_back({s.a, {tm, zm}, s.level + 1});
      } else {
        out.push_back(s.b.z);
      }
    }
  }
  return out;
}

}  // namespace feig

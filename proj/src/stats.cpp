#include "pddlforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pddlforge {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.avg = sum / static_cast<double>(v.size());
  s.min = v.front();
  s.max = v.back();
  size_t mid = v.size() / 2;
  s.median = v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
  double ss = 0;
  for (double x : v) ss += (x - s.avg) * (x - s.avg);
  s.std = std::sqrt(ss / static_cast<double>(v.size()));
  return s;
}

}  // namespace pddlforge

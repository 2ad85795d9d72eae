#pragma once

#include <cstddef>
#include <span>

namespace pddlforge {

struct Summary {
  size_t count = 0;
  double avg = 0;
  double min = 0;
  double max = 0;
  double median = 0;
  /// Population standard deviation.
  double std = 0;
};

/// All fields are zero for an empty sample. The median of an even-sized sample
/// is the mean of the two middle values.
Summary summarize(std::span<const double> values);

}  // namespace pddlforge

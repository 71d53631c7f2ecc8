#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dtc::fit {

struct NelderMeadOptions {
  double diameter_tolerance = 1e-10;  // max vertex distance from the best vertex
  int max_evaluations = 10000;
  double initial_step = 0.1;          // relative; absolute for zero coordinates
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimization. Non-finite objective values are treated as
/// +infinity, which lets callers express box constraints.
NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start,
                             const NelderMeadOptions& options = {});

}  // namespace dtc::fit

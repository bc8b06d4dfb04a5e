#pragma once

#include <functional>
#include <vector>

#include "fracheat/evolve.hpp"

namespace fracheat {

// Self-similar continuation of the Dirac family at t = 1.
// Each cycle evolves over [zoom^{-2 alpha}, 1], then applies T_zoom, which maps
// u_K to u_{K zoom^q} with q = 2 alpha a - N. The exposed far field is refilled
// by integrating y' = A m(s) |y|^{-N-2 alpha} - s^beta y^p along the recorded mass
// history, plus the linear periodic images.
struct ContinuationOptions {
  ModelParams params;
  Grid grid;
  double K0 = 0.1;
  double zoom = 2.0;
  int cycles = 10;
  int steps_per_cycle = 40;
  int blend_cells = 8;
  int image_range = 6;
  StepperConfig stepper;  // params overwritten
  // frame times in (zoom^{-2 alpha}, 1) delivered to on_snapshot
  std::vector<double> snapshot_times;
};

struct CycleState {
  int cycle;
  double K;          // mass of the member represented by the current frame
  double integral;   // int_0^t m(s) ds in frame units
  const Field* field;
};

struct ContinuationResult {
  std::vector<double> K;       // member mass at each cycle end
  std::vector<Field> at_one;   // u_K(1, .) at each cycle end
  std::vector<double> mass;    // discrete mass at t = 1
  std::vector<double> tail_ratio;  // A*I / (u r^{N+2a}) at r = L/8, t = 1
  long clamped = 0;
};

double continuation_exponent(const ModelParams& params);  // q
// zoom giving a factor 2^d in K per cycle
double zoom_for_doublings(const ModelParams& params, double d);

ContinuationResult run_continuation(
    const ContinuationOptions& opt,
    const std::function<void(const CycleState&, double t)>& on_snapshot = {});

// trigonometric interpolation of a periodic field at arbitrary coordinates (tensor targets)
Field resample_trig(const Field& f, const Grid& target, double scale);

}  // namespace fracheat

#pragma once

#include "sedcat/physics.hpp"

namespace sedcat::testing {

// Parameter set of the reproduced experiment.
OscillatorParams reference_oscillator();
LaserConfig reference_laser();

}  // namespace sedcat::testing

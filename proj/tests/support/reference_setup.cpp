#include "reference_setup.hpp"

namespace sedcat::testing {

OscillatorParams reference_oscillator()
{
    return derive_oscillator(9.11e-35, 1.60e-19, 1e16);
}

LaserConfig reference_laser()
{
    return make_laser(2.3e16, 0.3e16, 4.5e-8, 4.5e-8, 5e-15);
}

}  // namespace sedcat::testing

#ifndef PODWAVE_PODWAVE_HPP
#define PODWAVE_PODWAVE_HPP
//
// Umbrella header for the library (the CLI front end lives in cli.hpp).
//

#include "podwave/numerics.hpp"
#include "podwave/fem1d.hpp"
#include "podwave/difference.hpp"
#include "podwave/wave.hpp"
#include "podwave/pod.hpp"
#include "podwave/rom.hpp"
#include "podwave/experiments.hpp"

#endif  // PODWAVE_PODWAVE_HPP

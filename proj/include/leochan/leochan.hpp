#pragma once

// Everything in one include.

#include "leochan/core/error.hpp"
#include "leochan/core/state.hpp"
#include "leochan/core/time.hpp"
#include "leochan/core/vec3.hpp"
#include "leochan/doppler.hpp"
#include "leochan/frames.hpp"
#include "leochan/link.hpp"
#include "leochan/sbr.hpp"
#include "leochan/scene.hpp"
#include "leochan/sgp4.hpp"
#include "leochan/sim.hpp"
#include "leochan/tle.hpp"

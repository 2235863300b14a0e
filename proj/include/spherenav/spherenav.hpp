#pragma once

#include "spherenav/benchmarks.hpp"
#include "spherenav/controller.hpp"
#include "spherenav/errors.hpp"
#include "spherenav/navigation.hpp"
#include "spherenav/sampling.hpp"
#include "spherenav/scenario_io.hpp"
#include "spherenav/selfcheck.hpp"
#include "spherenav/simulator.hpp"
#include "spherenav/sphere_geometry.hpp"
#include "spherenav/sphere_world.hpp"
#include "spherenav/stereographic.hpp"

#pragma once

// Numerical toolkit for the quadratic family f_c(z) = z^2 + c: external
// ray tracing, Misiurewicz landings, holomorphic motion of Cantor Julia
// sets along parameter rays, and the quantitative suites built on them.

#include "rayflow/angle.hpp"
#include "rayflow/derivative.hpp"
#include "rayflow/hausdorff.hpp"
#include "rayflow/image.hpp"
#include "rayflow/io.hpp"
#include "rayflow/itinerary.hpp"
#include "rayflow/julia_points.hpp"
#include "rayflow/misiurewicz.hpp"
#include "rayflow/motion.hpp"
#include "rayflow/orbit.hpp"
#include "rayflow/parallel.hpp"
#include "rayflow/partition.hpp"
#include "rayflow/potential.hpp"
#include "rayflow/ray.hpp"
#include "rayflow/report.hpp"
#include "rayflow/suites.hpp"
#include "rayflow/symbolic.hpp"
#include "rayflow/zcycle.hpp"

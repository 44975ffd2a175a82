#ifndef PERIMETRIC_PERIMETRIC_HPP
#define PERIMETRIC_PERIMETRIC_HPP

// Umbrella header. Pulls in the whole library; individual headers are
// self-contained if you want a lighter include.

#include "perimetric/aggregators.hpp"
#include "perimetric/classifier.hpp"
#include "perimetric/cli.hpp"
#include "perimetric/gallery.hpp"
#include "perimetric/json_io.hpp"
#include "perimetric/metric_space.hpp"
#include "perimetric/solver.hpp"

#endif  // PERIMETRIC_PERIMETRIC_HPP

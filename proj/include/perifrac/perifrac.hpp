#pragma once

#include "perifrac/analysis.hpp"
#include "perifrac/bonds.hpp"
#include "perifrac/config.hpp"
#include "perifrac/damage.hpp"
#include "perifrac/dynamics.hpp"
#include "perifrac/energy.hpp"
#include "perifrac/geometry.hpp"
#include "perifrac/grid.hpp"
#include "perifrac/io.hpp"
#include "perifrac/material.hpp"
#include "perifrac/parallel.hpp"
#include "perifrac/simulation.hpp"
#include "perifrac/version.hpp"

#pragma once

#include "hilbertia/error.hpp"
#include "hilbertia/linalg.hpp"
#include "hilbertia/projective.hpp"
#include "hilbertia/domain.hpp"
#include "hilbertia/metric.hpp"
#include "hilbertia/holonomy.hpp"
#include "hilbertia/orbit.hpp"
#include "hilbertia/dynamics.hpp"
#include "hilbertia/affine_sphere.hpp"
#include "hilbertia/io.hpp"

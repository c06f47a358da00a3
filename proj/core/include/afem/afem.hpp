#pragma once

#include "afem/adapt.hpp"
#include "afem/assembly.hpp"
#include "afem/driver.hpp"
#include "afem/elements.hpp"
#include "afem/error.hpp"
#include "afem/estimator.hpp"
#include "afem/linalg.hpp"
#include "afem/mesh.hpp"
#include "afem/mesh_io.hpp"
#include "afem/predicate.hpp"
#include "afem/quadrature.hpp"

#pragma once

#include "structdist/alignment.hpp"
#include "structdist/chain.hpp"
#include "structdist/constituency.hpp"
#include "structdist/distribution.hpp"
#include "structdist/errors.hpp"
#include "structdist/hypergraph.hpp"
#include "structdist/inference.hpp"
#include "structdist/linalg.hpp"
#include "structdist/numerics.hpp"
#include "structdist/rng.hpp"
#include "structdist/semiring.hpp"
#include "structdist/spanning.hpp"
#include "structdist/tensor.hpp"
#include "structdist/validity.hpp"

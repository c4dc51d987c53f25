#pragma once

#include "bounded_matrix.hpp"
#include "d2k.hpp"
#include "degree_matrix.hpp"
#include "graph.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "rational.hpp"
#include "rescale.hpp"

#pragma once

#include "subgae/eval.hpp"
#include "subgae/graph.hpp"
#include "subgae/io.hpp"
#include "subgae/linalg.hpp"
#include "subgae/model.hpp"
#include "subgae/random.hpp"
#include "subgae/sampler.hpp"
#include "subgae/sbm.hpp"
#include "subgae/split.hpp"

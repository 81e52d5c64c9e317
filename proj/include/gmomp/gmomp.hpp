#pragma once

#include "gmomp/error.hpp"
#include "gmomp/parallel.hpp"
#include "gmomp/union_find.hpp"
#include "gmomp/spaces.hpp"
#include "gmomp/feasibility.hpp"
#include "gmomp/dictionary.hpp"
#include "gmomp/solver.hpp"
#include "gmomp/analysis.hpp"
#include "gmomp/postprocess.hpp"
#include "gmomp/experiments.hpp"
#include "gmomp/io.hpp"

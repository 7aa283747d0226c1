#pragma once

#include "cmx/core.hpp"
#include "cmx/embedding.hpp"
#include "cmx/lehmer.hpp"
#include "cmx/kd_tree.hpp"
#include "cmx/sparse_histogram.hpp"
#include "cmx/outcome_spaces.hpp"
#include "cmx/prob_estimators.hpp"
#include "cmx/info_measures.hpp"
#include "cmx/discrete_estimators.hpp"
#include "cmx/differential.hpp"
#include "cmx/complexity.hpp"
#include "cmx/recipe.hpp"
#include "cmx/multiscale.hpp"
#include "cmx/registry.hpp"

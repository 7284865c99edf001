#pragma once

#include "context.hpp"
#include "counts.hpp"
#include "diagnostics.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "experiment.hpp"
#include "model.hpp"
#include "model_io.hpp"
#include "penalty.hpp"
#include "sequence_io.hpp"
#include "simulator.hpp"
#include "tree.hpp"

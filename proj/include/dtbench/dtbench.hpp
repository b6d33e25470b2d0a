#pragma once

// Umbrella header.

#include "dtbench/core.hpp"
#include "dtbench/criteria.hpp"
#include "dtbench/datagen.hpp"
#include "dtbench/equiv.hpp"
#include "dtbench/errors.hpp"
#include "dtbench/exact_learner.hpp"
#include "dtbench/harness.hpp"
#include "dtbench/io.hpp"
#include "dtbench/learners.hpp"
#include "dtbench/oracle.hpp"
#include "dtbench/rng.hpp"

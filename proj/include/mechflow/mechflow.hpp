#pragma once

#include "mechflow/bench.hpp"
#include "mechflow/bounds.hpp"
#include "mechflow/core.hpp"
#include "mechflow/descent.hpp"
#include "mechflow/forest.hpp"
#include "mechflow/instance.hpp"
#include "mechflow/oracle.hpp"
#include "mechflow/signature.hpp"
#include "mechflow/solver.hpp"

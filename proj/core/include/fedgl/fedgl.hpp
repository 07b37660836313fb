#pragma once

#include "fedgl/baselines.hpp"
#include "fedgl/client.hpp"
#include "fedgl/config.hpp"
#include "fedgl/datagen.hpp"
#include "fedgl/evaluation.hpp"
#include "fedgl/experiment.hpp"
#include "fedgl/federation.hpp"
#include "fedgl/graph.hpp"
#include "fedgl/io.hpp"
#include "fedgl/objective.hpp"
#include "fedgl/server.hpp"

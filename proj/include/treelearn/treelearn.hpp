#pragma once

// Umbrella header.

#include "treelearn/bounds.hpp"
#include "treelearn/channels.hpp"
#include "treelearn/chow_liu.hpp"
#include "treelearn/converse.hpp"
#include "treelearn/dataset.hpp"
#include "treelearn/estimation.hpp"
#include "treelearn/experiments.hpp"
#include "treelearn/model.hpp"
#include "treelearn/model_io.hpp"
#include "treelearn/prob.hpp"
#include "treelearn/rng.hpp"
#include "treelearn/thresholds.hpp"
#include "treelearn/tree.hpp"

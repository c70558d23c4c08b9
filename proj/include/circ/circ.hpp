#pragma once

#include "circ/compat.hpp"
#include "circ/dsl.hpp"
#include "circ/errors.hpp"
#include "circ/indexing.hpp"
#include "circ/inference.hpp"
#include "circ/model.hpp"
#include "circ/models.hpp"
#include "circ/rational.hpp"

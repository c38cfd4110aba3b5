#pragma once

#include "gabac/combiner.hpp"
#include "gabac/cypher.hpp"
#include "gabac/dsl.hpp"
#include "gabac/error.hpp"
#include "gabac/graph.hpp"
#include "gabac/matcher.hpp"
#include "gabac/model.hpp"
#include "gabac/policy.hpp"

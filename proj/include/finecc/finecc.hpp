#pragma once

// Umbrella header. render.hpp additionally needs nlohmann/json on the
// include path as <json.hpp>; everything else is standard C++20.

#include "finecc/error.hpp"
#include "finecc/vectors.hpp"
#include "finecc/schema.hpp"
#include "finecc/parser.hpp"
#include "finecc/extraction.hpp"
#include "finecc/scc.hpp"
#include "finecc/tav_graph.hpp"
#include "finecc/commutativity.hpp"
#include "finecc/lockmgr.hpp"
#include "finecc/replay.hpp"
#include "finecc/scenario.hpp"
#include "finecc/generator.hpp"

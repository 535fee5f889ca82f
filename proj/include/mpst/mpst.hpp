#pragma once

// Umbrella header: the whole library except the JSON encoders, which pull in
// nlohmann/json and live in serialize.hpp.

#include "ast.hpp"
#include "combinators.hpp"
#include "equiv.hpp"
#include "global_semantics.hpp"
#include "local_semantics.hpp"
#include "parser.hpp"
#include "projection.hpp"
#include "wellformed.hpp"

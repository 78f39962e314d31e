#pragma once

// Umbrella header: the whole library.

#include "conflab/generator.hpp"
#include "conflab/json_io.hpp"
#include "conflab/parallel.hpp"
#include "conflab/reduction.hpp"
#include "conflab/relation.hpp"
#include "conflab/rewrite_props.hpp"
#include "conflab/systemf.hpp"
#include "conflab/systemf_syntax.hpp"
#include "conflab/term.hpp"

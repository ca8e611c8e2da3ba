#pragma once

#include "analysis.hpp"
#include "bench.hpp"
#include "compress.hpp"
#include "edit.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "matcher.hpp"
#include "sketch.hpp"
#include "strings.hpp"

#pragma once

#include "bitvector.hpp"
#include "core.hpp"
#include "error.hpp"
#include "ingest.hpp"
#include "search.hpp"
#include "synth.hpp"
#include "witness.hpp"

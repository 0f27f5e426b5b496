#pragma once

#include "tbt/bits.hpp"
#include "tbt/channel.hpp"
#include "tbt/code_model.hpp"
#include "tbt/decoder.hpp"
#include "tbt/diagnostics.hpp"
#include "tbt/error.hpp"
#include "tbt/sim.hpp"
#include "tbt/trellis.hpp"
#include "tbt/trellis_json.hpp"

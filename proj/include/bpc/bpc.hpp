#pragma once

#include "bpc/aggregation.hpp"
#include "bpc/channel_sim.hpp"
#include "bpc/codebook.hpp"
#include "bpc/evaluate.hpp"
#include "bpc/image_io.hpp"
#include "bpc/imaging.hpp"
#include "bpc/io_util.hpp"
#include "bpc/pattern_channel.hpp"
#include "bpc/rng.hpp"
#include "bpc/stat_tests.hpp"
#include "bpc/types.hpp"

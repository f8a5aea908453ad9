#pragma once

#include "stablemds/core.hpp"
#include "stablemds/data_ingest.hpp"
#include "stablemds/dissimilarity.hpp"
#include "stablemds/experiments.hpp"
#include "stablemds/geometry.hpp"
#include "stablemds/pipeline.hpp"
#include "stablemds/rigid_align.hpp"
#include "stablemds/smacof.hpp"
#include "stablemds/stress.hpp"

#pragma once

#include "mobcon/config.hpp"
#include "mobcon/disease.hpp"
#include "mobcon/errors.hpp"
#include "mobcon/events.hpp"
#include "mobcon/graph.hpp"
#include "mobcon/homogeneous.hpp"
#include "mobcon/ingest.hpp"
#include "mobcon/interventions.hpp"
#include "mobcon/kdtree.hpp"
#include "mobcon/meetings.hpp"
#include "mobcon/metrics.hpp"
#include "mobcon/rng.hpp"
#include "mobcon/runner.hpp"
#include "mobcon/sim.hpp"
#include "mobcon/staypoints.hpp"
#include "mobcon/stream_ops.hpp"
#include "mobcon/synth.hpp"

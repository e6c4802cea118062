#pragma once

#include "bounds.hpp"
#include "conditions.hpp"
#include "core.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "harness/output.hpp"
#include "instance_gen.hpp"
#include "instance_io.hpp"
#include "market.hpp"
#include "policies/caucb.hpp"
#include "policies/common.hpp"
#include "policies/communication.hpp"
#include "policies/etc.hpp"
#include "policies/protocol.hpp"
#include "policies/schedule.hpp"
#include "policies/ucbd4.hpp"
#include "regret.hpp"
#include "rng.hpp"
#include "stable_matching.hpp"

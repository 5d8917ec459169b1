/*
 * Copyright 2026 The aradse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "aradse/crossbar.hpp"
#include "aradse/dba.hpp"
#include "aradse/dma.hpp"
#include "aradse/errors.hpp"
#include "aradse/gam.hpp"
#include "aradse/interleave.hpp"
#include "aradse/matching.hpp"
#include "aradse/platform.hpp"
#include "aradse/report.hpp"
#include "aradse/scenario.hpp"
#include "aradse/simulator.hpp"
#include "aradse/spec_model.hpp"
#include "aradse/sweep.hpp"
#include "aradse/tlb.hpp"
#include "aradse/topology_io.hpp"
#include "aradse/workload.hpp"

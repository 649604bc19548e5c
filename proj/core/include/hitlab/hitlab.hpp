// Copyright 2026 The hitlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "hitlab/capped_time.hpp"
#include "hitlab/config.hpp"
#include "hitlab/csv.hpp"
#include "hitlab/density.hpp"
#include "hitlab/expansivity.hpp"
#include "hitlab/experiment.hpp"
#include "hitlab/extreme_stats.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/map_system.hpp"
#include "hitlab/mixing.hpp"
#include "hitlab/observable.hpp"
#include "hitlab/orbit.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/phase_space.hpp"
#include "hitlab/point_process.hpp"
#include "hitlab/random.hpp"

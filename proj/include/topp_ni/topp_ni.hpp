// Copyright 2026 The topp-ni Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "topp_ni/config.hpp"
#include "topp_ni/constraints.hpp"
#include "topp_ni/demo.hpp"
#include "topp_ni/dp_oracle.hpp"
#include "topp_ni/dynamics.hpp"
#include "topp_ni/error.hpp"
#include "topp_ni/io.hpp"
#include "topp_ni/limit_curves.hpp"
#include "topp_ni/path.hpp"
#include "topp_ni/phase_profile.hpp"
#include "topp_ni/planner.hpp"
#include "topp_ni/run_and_test.hpp"
#include "topp_ni/switch_points.hpp"

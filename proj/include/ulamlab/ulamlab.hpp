// Copyright 2026 The UlamLab Authors
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

#include "ulamlab/errors.hpp"
#include "ulamlab/linalg.hpp"
#include "ulamlab/rng.hpp"
#include "ulamlab/groups.hpp"
#include "ulamlab/gmap.hpp"
#include "ulamlab/generators.hpp"
#include "ulamlab/meanforms.hpp"
#include "ulamlab/stabilize.hpp"
#include "ulamlab/serialize.hpp"
#include "ulamlab/genspec.hpp"
#include "ulamlab/experiment.hpp"

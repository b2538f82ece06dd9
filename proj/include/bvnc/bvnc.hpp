// Copyright 2026 The bvnc Authors
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

#include "bvnc/birkhoff.hpp"
#include "bvnc/circuit.hpp"
#include "bvnc/errors.hpp"
#include "bvnc/io.hpp"
#include "bvnc/matrix.hpp"
#include "bvnc/optimizer.hpp"
#include "bvnc/permutation.hpp"
#include "bvnc/scaling.hpp"
#include "bvnc/simulator.hpp"
#include "bvnc/synth.hpp"

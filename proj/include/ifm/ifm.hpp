// Copyright 2026 The ifmsim Authors
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

#include "ifm/circuit.hpp"
#include "ifm/elements.hpp"
#include "ifm/errors.hpp"
#include "ifm/protocols.hpp"
#include "ifm/report.hpp"
#include "ifm/sampling.hpp"
#include "ifm/scenario.hpp"
#include "ifm/state_core.hpp"
#include "ifm/tsvf.hpp"

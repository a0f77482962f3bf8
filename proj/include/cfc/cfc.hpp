// Copyright 2026 The cfcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFC_CFC_HPP
#define CFC_CFC_HPP

#include "cfc/detection_noise.hpp"
#include "cfc/harness.hpp"
#include "cfc/messaging.hpp"
#include "cfc/optics_mesh.hpp"
#include "cfc/pbm.hpp"
#include "cfc/trial_rng.hpp"
#include "cfc/zeno_protocol.hpp"

#endif

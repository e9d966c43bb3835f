// Copyright 2026 The shapetensor Authors
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

#ifndef SHAPETENSOR_SHAPETENSOR_HPP
#define SHAPETENSOR_SHAPETENSOR_HPP

#include "shapetensor/bodies.hpp"
#include "shapetensor/common.hpp"
#include "shapetensor/harmonics.hpp"
#include "shapetensor/json_io.hpp"
#include "shapetensor/lp.hpp"
#include "shapetensor/measures.hpp"
#include "shapetensor/minkowski.hpp"
#include "shapetensor/quadrature.hpp"
#include "shapetensor/reconstruct.hpp"
#include "shapetensor/stability.hpp"
#include "shapetensor/tensors.hpp"
#include "shapetensor/uniqueness.hpp"

#endif  // SHAPETENSOR_SHAPETENSOR_HPP

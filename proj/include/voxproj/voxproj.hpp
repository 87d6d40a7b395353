// Copyright 2026 The voxproj Authors
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

#ifndef VOXPROJ_VOXPROJ_HPP
#define VOXPROJ_VOXPROJ_HPP

#include "voxproj/dataset.hpp"
#include "voxproj/errors.hpp"
#include "voxproj/grid.hpp"
#include "voxproj/io.hpp"
#include "voxproj/mesh.hpp"
#include "voxproj/parallel.hpp"
#include "voxproj/metrics.hpp"
#include "voxproj/projection.hpp"
#include "voxproj/random.hpp"
#include "voxproj/reconstruct.hpp"
#include "voxproj/sampling.hpp"
#include "voxproj/view.hpp"

#endif  // VOXPROJ_VOXPROJ_HPP

// Copyright 2026 The qoct Authors
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

// Convenience header pulling in the whole library.

#pragma once

#include "qoct/analysis.hpp"
#include "qoct/config.hpp"
#include "qoct/error.hpp"
#include "qoct/field.hpp"
#include "qoct/filters.hpp"
#include "qoct/grid.hpp"
#include "qoct/io.hpp"
#include "qoct/model.hpp"
#include "qoct/oct.hpp"
#include "qoct/propagator.hpp"
#include "qoct/stationary.hpp"

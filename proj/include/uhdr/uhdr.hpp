// Copyright (c) 2026 The uhdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "uhdr/dataset.hpp"
#include "uhdr/encoding.hpp"
#include "uhdr/errors.hpp"
#include "uhdr/filters.hpp"
#include "uhdr/fusion.hpp"
#include "uhdr/highlight.hpp"
#include "uhdr/isp.hpp"
#include "uhdr/metrics.hpp"
#include "uhdr/noise.hpp"
#include "uhdr/profile.hpp"
#include "uhdr/pyramid.hpp"
#include "uhdr/random.hpp"
#include "uhdr/raw.hpp"
#include "uhdr/tensor.hpp"
#include "uhdr/uraw.hpp"

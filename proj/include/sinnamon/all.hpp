// Copyright 2026-present the sinnamon project
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

#include "sinnamon/analysis/inner_product_error.hpp"
#include "sinnamon/analysis/profile.hpp"
#include "sinnamon/analysis/quadrature.hpp"
#include "sinnamon/analysis/simulation.hpp"
#include "sinnamon/analysis/sketch_error.hpp"
#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/bench.hpp"
#include "sinnamon/bfloat16.hpp"
#include "sinnamon/collection.hpp"
#include "sinnamon/datagen.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/eval.hpp"
#include "sinnamon/id_map.hpp"
#include "sinnamon/id_set.hpp"
#include "sinnamon/index_io.hpp"
#include "sinnamon/linscan_index.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/posting_list.hpp"
#include "sinnamon/retrieval.hpp"
#include "sinnamon/sinnamon_index.hpp"
#include "sinnamon/sketch.hpp"
#include "sinnamon/storage.hpp"
#include "sinnamon/top_k.hpp"
#include "sinnamon/trec.hpp"
#include "sinnamon/types.hpp"

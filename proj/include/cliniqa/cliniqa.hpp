// Copyright 2026 The cliniqa Authors.
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

// Umbrella header: the whole toolkit in one include.

#pragma once

#include "cliniqa/augmentation.hpp"    // IWYU pragma: export
#include "cliniqa/dataset.hpp"         // IWYU pragma: export
#include "cliniqa/dataset_io.hpp"      // IWYU pragma: export
#include "cliniqa/error.hpp"           // IWYU pragma: export
#include "cliniqa/evaluation.hpp"      // IWYU pragma: export
#include "cliniqa/generation.hpp"      // IWYU pragma: export
#include "cliniqa/kim.hpp"             // IWYU pragma: export
#include "cliniqa/knowledge_base.hpp"  // IWYU pragma: export
#include "cliniqa/linking.hpp"         // IWYU pragma: export
#include "cliniqa/manifest.hpp"        // IWYU pragma: export
#include "cliniqa/reader.hpp"          // IWYU pragma: export
#include "cliniqa/rng.hpp"             // IWYU pragma: export
#include "cliniqa/sampling.hpp"        // IWYU pragma: export
#include "cliniqa/segmentation.hpp"    // IWYU pragma: export
#include "cliniqa/text.hpp"            // IWYU pragma: export
#include "cliniqa/transe.hpp"          // IWYU pragma: export
#include "cliniqa/utf8.hpp"            // IWYU pragma: export
#include "cliniqa/version.hpp"         // IWYU pragma: export


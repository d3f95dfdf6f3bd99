// Copyright 2026 The noisespec Authors
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

#include <cstddef>
#include <exception>
#include <functional>

namespace noisespec {

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 means one
/// per hardware thread). Each index runs exactly once. If any call throws,
/// the exception from the lowest failing index is rethrown after all threads
/// finish, so failures are reported the same way for every worker count.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace noisespec

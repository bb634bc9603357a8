// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace a2g {

/// Caps the worker count used by parallel sweeps. 0 restores the default
/// (hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads, in
/// contiguous blocks. Rethrows the exception of the lowest failing index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// splitmix64 step: decorrelated sub-seed number `stream` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace a2g

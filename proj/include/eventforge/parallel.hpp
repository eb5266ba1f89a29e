#pragma once

namespace eventforge {

/// Worker threads available to the OpenMP kernels (1 without OpenMP).
int max_threads() noexcept;
/// Caps worker threads; values < 1 are ignored.
void set_max_threads(int threads) noexcept;
/// Applies EVENTFORGE_THREADS if set. Returns the resulting thread count.
int apply_thread_env() noexcept;

}  // namespace eventforge

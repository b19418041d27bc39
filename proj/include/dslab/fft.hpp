#pragma once

// Thin FFTW wrapper: a process-wide cache of in-place complex plans.
//
// Plans are created once per (shape, direction) under a mutex and then
// executed through the new-array interface, which FFTW documents as safe to
// call concurrently on distinct arrays.

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace dslab::fft {

using Complex = std::complex<double>;

enum class Direction : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& shape, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(shape, static_cast<int>(dir));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t total = 1;
    for (int n : shape) total *= static_cast<std::size_t>(n);
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf, buf,
                                   static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized in-place DFT over a row-major array of the given shape.
/// forward:  X_k = sum_j x_j exp(-2 pi i j.k / n)
/// backward: x_j = sum_k X_k exp(+2 pi i j.k / n)
inline void execute(std::span<Complex> data, const std::vector<int>& shape, Direction dir) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  if (data.size() != total) throw std::invalid_argument("fft: array size does not match shape");
  fftw_plan plan = detail::PlanCache::instance().get(shape, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

/// Signed frequency index of DFT bin i on an axis of length n.
constexpr int signed_index(int i, int n) noexcept { return i < n / 2 ? i : i - n; }

/// Storage bin of signed frequency index k on an axis of length n.
constexpr int bin_of(int k, int n) noexcept { return ((k % n) + n) % n; }

}  // namespace dslab::fft

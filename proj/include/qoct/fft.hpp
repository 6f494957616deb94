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

// Thin RAII layer over FFTW. Plans are created with FFTW_ESTIMATE so that the
// chosen algorithm (and therefore every rounding) is reproducible run to run.

#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>

namespace qoct::detail {

static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));

// The FFTW planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Complex buffer allocated with fftw_malloc, so every instance has the
/// alignment the plans were created for.
class AlignedArray {
 public:
  AlignedArray() = default;
  explicit AlignedArray(std::size_t n)
      : size_(n), data_(static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (n != 0 && !data_) throw std::bad_alloc();
    std::memset(static_cast<void*>(data_.get()), 0, sizeof(fftw_complex) * n);
  }
  AlignedArray(const AlignedArray& other) : AlignedArray(other.size_) {
    std::memcpy(static_cast<void*>(data_.get()), other.data_.get(), sizeof(fftw_complex) * size_);
  }
  AlignedArray& operator=(const AlignedArray& other) {
    if (this != &other) {
      if (size_ != other.size_) *this = AlignedArray(other.size_);
      std::memcpy(static_cast<void*>(data_.get()), other.data_.get(), sizeof(fftw_complex) * size_);
    }
    return *this;
  }
  AlignedArray(AlignedArray&&) noexcept = default;
  AlignedArray& operator=(AlignedArray&&) noexcept = default;

  std::size_t size() const { return size_; }
  std::complex<double>* data() { return data_.get(); }
  const std::complex<double>* data() const { return data_.get(); }
  std::complex<double>& operator[](std::size_t i) { return data_.get()[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return data_.get()[i]; }
  std::span<std::complex<double>> span() { return {data(), size_}; }
  std::span<const std::complex<double>> span() const { return {data(), size_}; }

  fftw_complex* raw() { return reinterpret_cast<fftw_complex*>(data_.get()); }

 private:
  struct Free {
    void operator()(std::complex<double>* p) const { fftw_free(p); }
  };
  std::size_t size_ = 0;
  std::unique_ptr<std::complex<double>, Free> data_;
};

enum class FftSign : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

/// In-place 1D complex transform, unnormalized. Executable on any
/// AlignedArray of the planned length.
class FftPlan {
 public:
  FftPlan() = default;
  FftPlan(std::size_t n, FftSign sign) : n_(n), sign_(sign) {
    AlignedArray probe(n);
    std::lock_guard lock(fftw_planner_mutex());
    plan_.reset(fftw_plan_dft_1d(static_cast<int>(n), probe.raw(), probe.raw(),
                                 static_cast<int>(sign), FFTW_ESTIMATE));
    if (!plan_) throw std::runtime_error("fftw plan creation failed");
  }

  FftPlan(const FftPlan& other) : FftPlan() {
    if (other.plan_) *this = FftPlan(other.n_, other.sign_);
  }
  FftPlan& operator=(const FftPlan& other) {
    if (this != &other) *this = FftPlan(other);
    return *this;
  }
  FftPlan(FftPlan&&) noexcept = default;
  FftPlan& operator=(FftPlan&&) noexcept = default;

  std::size_t size() const { return n_; }

  void operator()(AlignedArray& a) const { fftw_execute_dft(plan_.get(), a.raw(), a.raw()); }

 private:
  struct Destroy {
    void operator()(fftw_plan_s* p) const {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(p);
    }
  };
  std::size_t n_ = 0;
  FftSign sign_ = FftSign::forward;
  std::unique_ptr<fftw_plan_s, Destroy> plan_;
};

}  // namespace qoct::detail

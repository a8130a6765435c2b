#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "artfima/errors.hpp"

namespace artfima {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

template <class T>
struct fftw_buffer {
  T* ptr = nullptr;
  std::size_t n = 0;
  explicit fftw_buffer(std::size_t count) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * count))), n(count) {
    if (!ptr) throw std::bad_alloc();
  }
  ~fftw_buffer() { fftw_free(ptr); }
  fftw_buffer(const fftw_buffer&) = delete;
  fftw_buffer& operator=(const fftw_buffer&) = delete;
  T& operator[](std::size_t i) { return ptr[i]; }
};

// FFTW planning is not thread-safe; executing an existing plan on other arrays is.
class plan_cache {
 public:
  static plan_cache& instance() {
    static plan_cache c;
    return c;
  }
  fftw_plan r2c(std::size_t n) { return get(0, n); }
  fftw_plan c2r(std::size_t n) { return get(1, n); }
  fftw_plan c2c_forward(std::size_t n) { return get(2, n); }

 private:
  fftw_plan get(int kind, std::size_t n) {
    std::lock_guard<std::mutex> lk(m_);
    auto it = plans_.find({kind, n});
    if (it != plans_.end()) return it->second;
    fftw_buffer<double> re(2 * n + 2);
    fftw_buffer<fftw_complex> cx(n + 1);
    const int ni = static_cast<int>(n);
    fftw_plan p = nullptr;
    if (kind == 0) p = fftw_plan_dft_r2c_1d(ni, re.ptr, cx.ptr, FFTW_ESTIMATE);
    if (kind == 1) p = fftw_plan_dft_c2r_1d(ni, cx.ptr, re.ptr, FFTW_ESTIMATE);
    if (kind == 2) {
      fftw_buffer<fftw_complex> cy(n);
      p = fftw_plan_dft_1d(ni, cx.ptr, cy.ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!p) throw error("fft: planning failed");
    plans_.emplace(std::make_pair(kind, n), p);
    return p;
  }
  std::mutex m_;
  std::map<std::pair<int, std::size_t>, fftw_plan> plans_;
};

}  // namespace detail

/// Linear filter y(t) = sum_{k=0}^{M} c_k x(t - k) applied by FFT to a block of N + M inputs,
/// returning the N outputs that see a full window.
class FftFilter {
 public:
  FftFilter(const std::vector<double>& coeffs, std::size_t n_out)
      : M_(coeffs.size() - 1), N_(n_out), L_(next_pow2(coeffs.size() - 1 + n_out)) {
    if (coeffs.empty()) throw invalid_parameter("FftFilter: empty filter");
    spectrum_.resize(L_ / 2 + 1);
    detail::fftw_buffer<double> in(L_);
    detail::fftw_buffer<fftw_complex> out(L_ / 2 + 1);
    for (std::size_t i = 0; i < L_; ++i) in[i] = i <= M_ ? coeffs[i] : 0.0;
    fftw_execute_dft_r2c(detail::plan_cache::instance().r2c(L_), in.ptr, out.ptr);
    for (std::size_t i = 0; i <= L_ / 2; ++i) spectrum_[i] = {out[i][0] / L_, out[i][1] / L_};
  }

  std::size_t window() const { return M_; }
  std::size_t fft_size() const { return L_; }

  /// x has N + M entries; x[j] is the input at time j - M + 1. Returns outputs at times 1..N.
  std::vector<double> apply(const std::vector<double>& x) const {
    if (x.size() != N_ + M_) throw invalid_parameter("FftFilter: input length mismatch");
    detail::fftw_buffer<double> buf(L_);
    detail::fftw_buffer<fftw_complex> spec(L_ / 2 + 1);
    for (std::size_t i = 0; i < L_; ++i) buf[i] = i < x.size() ? x[i] : 0.0;
    auto& cache = detail::plan_cache::instance();
    fftw_execute_dft_r2c(cache.r2c(L_), buf.ptr, spec.ptr);
    for (std::size_t i = 0; i <= L_ / 2; ++i) {
      const std::complex<double> v = std::complex<double>(spec[i][0], spec[i][1]) * spectrum_[i];
      spec[i][0] = v.real();
      spec[i][1] = v.imag();
    }
    fftw_execute_dft_c2r(cache.c2r(L_), spec.ptr, buf.ptr);
    return std::vector<double>(buf.ptr + M_, buf.ptr + M_ + N_);
  }

 private:
  std::size_t M_, N_, L_;
  std::vector<std::complex<double>> spectrum_;
};

/// Forward complex DFT of length n (unnormalized).
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  detail::fftw_buffer<fftw_complex> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  fftw_execute_dft(detail::plan_cache::instance().c2c_forward(n), in.ptr, out.ptr);
  std::vector<std::complex<double>> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = {out[i][0], out[i][1]};
  return y;
}

}  // namespace artfima

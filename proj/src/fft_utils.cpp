#include "fft_utils.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace tvdeblur::fft {

namespace {

std::mutex g_plan_mutex;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans live for the process; keyed by grid side. Created on FFTW-aligned
// buffers so new-array execution on fftw_malloc'd scratch is valid.
PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  fftw_complex* tmp = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
  PlanPair p;
  p.fwd = fftw_plan_dft_2d(n, n, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_2d(n, n, tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(tmp);
  return cache.emplace(n, p).first->second;
}

struct ScratchBuf {
  fftw_complex* ptr = nullptr;
  std::size_t cap = 0;

  fftw_complex* get(std::size_t count) {
    if (count > cap) {
      if (ptr) fftw_free(ptr);
      ptr = fftw_alloc_complex(count);
      cap = count;
    }
    return ptr;
  }

  ~ScratchBuf() {
    if (ptr) fftw_free(ptr);
  }
};

}  // namespace

void forward2d(int n, std::complex<double>* buf) {
  fftw_execute_dft(plans_for(n).fwd, reinterpret_cast<fftw_complex*>(buf),
                   reinterpret_cast<fftw_complex*>(buf));
}

void inverse2d(int n, std::complex<double>* buf) {
  fftw_execute_dft(plans_for(n).bwd, reinterpret_cast<fftw_complex*>(buf),
                   reinterpret_cast<fftw_complex*>(buf));
}

std::complex<double>* scratch(std::size_t count) {
  thread_local ScratchBuf buf;
  return reinterpret_cast<std::complex<double>*>(buf.get(count));
}

std::complex<double>* scratch2(std::size_t count) {
  thread_local ScratchBuf buf;
  return reinterpret_cast<std::complex<double>*>(buf.get(count));
}

}  // namespace tvdeblur::fft

#include "fft2d.hpp"

#include <mutex>
#include <new>

namespace osm::detail {
namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size()));
    if (!buffer_) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    std::lock_guard lock(planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
    fftw_free(buffer_);
}

void Fft2d::forward() { fftw_execute(forward_); }
void Fft2d::backward() { fftw_execute(backward_); }

}  // namespace osm::detail

#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>

namespace osm::detail {

// In-place n x n complex FFT over an owned, FFTW-aligned buffer. Plans use
// FFTW_ESTIMATE so the transform (and its rounding) is reproducible.
class Fft2d {
public:
    explicit Fft2d(int n);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buffer_); }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    int n() const { return n_; }

    void forward();
    /// Unnormalized inverse transform.
    void backward();

private:
    int n_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

}  // namespace osm::detail

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace gaplab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default sample count for signals built from closed-form functions.
inline constexpr std::size_t kDefaultGridSize = 4096;

/// Relative dead band used when classifying sample signs: samples with
/// |f| <= band * ||f||_inf are treated as zero and skipped.
inline constexpr double kSignDeadBand = 1e-12;

/// Real-valued function on the circle, represented by uniform samples at
/// x_j = 2 pi j / N, j = 0..N-1.  Immutable after construction.
class PeriodicSignal {
  public:
    /// Takes ownership of the samples.  Requires N >= 8 and finite values.
    explicit PeriodicSignal(std::vector<double> samples);

    static PeriodicSignal from_function(const std::function<double(double)>& f,
                                        std::size_t n = kDefaultGridSize);

    std::size_t size() const { return samples_.size(); }
    double x(std::size_t j) const {
        return kTwoPi * static_cast<double>(j) / static_cast<double>(samples_.size());
    }
    double operator[](std::size_t j) const { return samples_[j]; }
    const std::vector<double>& samples() const { return samples_; }

  private:
    std::vector<double> samples_;
};

/// Unnormalized Fourier data: a[k] = <f, sin kx>, b[k] = <f, cos kx> with the
/// plain L2 pairing on [0, 2pi).  a[0] is kept as 0 so both arrays share
/// indexing; b[0] = <f, 1>.  The represented function is
///   f(x) = b[0]/(2 pi) + (1/pi) sum_{k>=1} (a[k] sin kx + b[k] cos kx).
struct FourierSeries {
    std::vector<double> a;
    std::vector<double> b;

    std::size_t max_mode() const { return b.empty() ? 0 : b.size() - 1; }
    double eval(double x) const;

    /// Term-wise derivative: sin -> cos and cos -> -sin, scaled by k.
    FourierSeries derivative() const;
};

struct Norms {
    double l1;
    double l2;
    double linf;
};

/// Trapezoid-rule pairing (2 pi / N) sum_j f_j g_j.  Exact for band-limited
/// products that fit below the Nyquist mode.
double inner_product(const PeriodicSignal& f, const PeriodicSignal& g);

/// Raw coefficients for modes 0..max_mode.  Requires max_mode < N/2.
FourierSeries fourier_coefficients(const PeriodicSignal& f, std::size_t max_mode);

/// Samples the series on an n-point grid.  Requires max_mode < n/2.
PeriodicSignal synthesize(const FourierSeries& series, std::size_t n = kDefaultGridSize);

/// Cyclic sign alternation count after discarding samples inside the dead
/// band.  Always even, and 0 for signals that never leave the dead band.
int sign_changes(const PeriodicSignal& f, double dead_band = kSignDeadBand);

Norms norms(const PeriodicSignal& f);
double norm_l1(const PeriodicSignal& f);
double norm_l2(const PeriodicSignal& f);
double norm_linf(const PeriodicSignal& f);

/// Spectral derivative of the sampled signal.
PeriodicSignal derivative(const PeriodicSignal& f);

/// Trigonometric polynomial with independent standard-normal coefficients on
/// modes min_mode..max_mode (sin and cos).  Deterministic in the seed; the
/// generator is pinned by this library, not by the platform.
PeriodicSignal band_limited_random(std::uint64_t seed, std::size_t min_mode,
                                   std::size_t max_mode, std::size_t n = kDefaultGridSize);

/// CSV with header "x,value" and one row per sample, written with enough
/// digits to round-trip doubles exactly.
void write_csv(std::ostream& out, const PeriodicSignal& f);

/// Reads the format produced by write_csv.  The x column is checked for row
/// count only; values are taken as the samples.
PeriodicSignal read_csv(std::istream& in);

}  // namespace gaplab

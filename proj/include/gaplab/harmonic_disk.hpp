#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "gaplab/torus_signal.hpp"

namespace gaplab {

/// Harmonic extension of a boundary signal into the unit disk, carried as the
/// boundary samples plus their raw Fourier data.
class DiskHarmonic {
  public:
    /// max_mode = 0 keeps every resolvable mode (N/2 - 1).
    explicit DiskHarmonic(PeriodicSignal boundary, std::size_t max_mode = 0);

    const PeriodicSignal& boundary() const { return boundary_; }
    const FourierSeries& series() const { return series_; }
    std::size_t max_mode() const { return series_.max_mode(); }

  private:
    PeriodicSignal boundary_;
    FourierSeries series_;
};

/// Interior value u(r, theta) via the damped series
/// b0/(2 pi) + (1/pi) sum r^k (a_k sin k theta + b_k cos k theta).
/// Requires 0 <= r < 1.
double poisson_extend(const DiskHarmonic& u, double r, double theta);

/// Pure axis derivatives at the origin for orders 0..m, returned as
/// (d^k/dx^k u(0), d^k/dy^k u(0)).  Closed form in the coefficients:
///   d^k_x u(0) = k! b_k / pi,
///   d^k_y u(0) = (k!/pi) (b_k Re(i^k) + a_k Im(i^k)).
/// Requires m <= max_mode.
std::vector<std::pair<double, double>> origin_derivatives(const DiskHarmonic& u, std::size_t m);

/// Largest m such that every mode 0..m stays below tol * ||boundary||_L2,
/// i.e. u and all its derivatives through order m vanish at the center.
/// Returns -1 when the center value itself is nonzero.
int order_of_vanishing(const DiskHarmonic& u, double tol = 1e-9);

struct Lemma5Verdict {
    int order;                // order of vanishing at the center
    int sign_count;           // boundary sign changes
    int required;             // 2 * (order + 1)
    bool center_nonvanishing; // order == -1
    bool satisfied;           // vacuously true when the center value is nonzero
};

/// Vanishing at the center forces boundary oscillation: order m costs at
/// least 2(m + 1) boundary sign changes.
Lemma5Verdict lemma5_check(const DiskHarmonic& u);

struct Corollary3Record {
    int n;            // boundary sign change count
    double lhs;       // |u(0)| plus the absolute axis derivatives through n/2
    double l1;        // boundary norms
    double linf;
    double rhs_core;  // l1^{n+1} / linf^n
    double ratio;
};

/// Center-derivative mass of the extension against the boundary norm-ratio
/// core, the disk counterpart of the coefficient-mass ratio on the circle.
Corollary3Record corollary3_ratio(const DiskHarmonic& u);

/// The coefficient-to-derivative dictionary applied to raw boundary
/// coefficients: |b_0|/(2 pi) plus (k!/pi)(|b_k| + |b_k Re(i^k) + a_k Im(i^k)|)
/// summed over 1 <= k <= n_half.  Lets a coefficient-side computation be
/// compared term by term with origin_derivatives.
double dictionary_mass(const FourierSeries& series, std::size_t n_half);

/// Polar grid CSV with header "r,theta,value"; nr radii strictly inside the
/// disk and ntheta angles per circle.
void write_polar_csv(std::ostream& out, const DiskHarmonic& u, std::size_t nr,
                     std::size_t ntheta);

}  // namespace gaplab

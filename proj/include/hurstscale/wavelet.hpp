#pragma once

#include <cstddef>
#include <vector>

namespace hurstscale {

// Orthonormal Daubechies analysis pair. h is low-pass, g = conjugate mirror
// high-pass with the convention g(n) = (-1)^{1-n} h(1-n) shifted causal,
// i.e. g(n) = (-1)^{n+1} h(2p-1-n). Only squared detail coefficients enter
// the downstream statistics, so the sign convention is recorded once in the
// tests and otherwise immaterial.
struct FilterPair {
  std::vector<double> h;
  std::vector<double> g;
  int p = 0;               // vanishing moments of g
  int support_length = 0;  // = 2p
};

// p in {1,2,3,4}. 1 and 2 use closed forms; 3 and 4 come from spectral
// factorization with extremal-phase (all roots inside the unit circle) and
// the standard orientation |h[0]| > |h[2p-1]|.
FilterPair daubechies_filters(int p);

// Scaling function sampled at the integers of its support [0, 2p-1].
struct ScalingSamples {
  std::vector<double> values;  // values[n] = phi(n), n = 0..2p-1
  int support_begin = 0;
  int support_end = 0;  // inclusive
};

// phi at integers: eigenvector of the two-scale matrix T(n,m) = sqrt(2) h(2n-m)
// for eigenvalue 1, normalized so the samples sum to 1.
ScalingSamples scaling_samples(const FilterPair& filters);

// a_0(k) = sum_n f(n) phi(n-k), indices wrapped periodically. Exact for
// polynomial f of degree < p.
std::vector<double> initialize_approximation(const std::vector<double>& f,
                                             const ScalingSamples& phi);

enum class Boundary { periodic, valid };

struct DecomposeResult {
  std::vector<double> approx;  // a_{j+1}
  std::vector<double> detail;  // d_{j+1}
};

// One analysis step: a_{j+1}(p) = sum_m h(m) a_j(2p+m), d_{j+1} likewise
// with g. periodic wraps indices (input length must be even); valid keeps
// only coefficients that never touch out-of-range samples.
DecomposeResult decompose_step(const std::vector<double>& a,
                               const FilterPair& filters, Boundary boundary);

// Exact inverse of decompose_step under periodic boundary:
// a_j(n) = sum_p h(n-2p) a_{j+1}(p) + g(n-2p) d_{j+1}(p).
std::vector<double> reconstruct_step(const std::vector<double>& approx,
                                     const std::vector<double>& detail,
                                     const FilterPair& filters,
                                     Boundary boundary);

struct DetailPyramid {
  std::vector<std::vector<double>> details;  // details[j-1] holds d_j
  std::vector<double> approx_final;          // a_J
  std::vector<std::size_t> counts;           // counts[j-1] = N_j
  Boundary boundary = Boundary::periodic;

  int levels() const { return static_cast<int>(details.size()); }
};

// Iterates decompose_step on already-initialized approximation coefficients.
DetailPyramid pyramid_from_a0(const std::vector<double>& a0,
                              const FilterPair& filters, int levels,
                              Boundary boundary);

// initialize_approximation followed by pyramid_from_a0.
DetailPyramid full_decomposition(const std::vector<double>& series,
                                 const FilterPair& filters, int levels,
                                 Boundary boundary);

// Test oracle: d_j(k) by explicit inner product with the level-j equivalent
// filter (cascade of upsampled h's ending in g), applied to the same
// initialized coefficients the pyramid starts from. Periodic indexing.
// O(N) per coefficient; intended for small inputs.
double direct_detail_oracle(const std::vector<double>& series,
                            const FilterPair& filters, int j, std::size_t k);

// The level-j equivalent filter used by the oracle (exposed because exact
// covariance computations in the tests reuse it).
std::vector<double> equivalent_detail_filter(const FilterPair& filters, int j);

}  // namespace hurstscale

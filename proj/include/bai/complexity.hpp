#pragma once
/*
Complexity measures for fixed-budget identification and the allocation-vector
machinery behind the P1 learner's analysis:

  H_SR    = max_k k / Delta_(k)^2
  H_UNIF  = K / Delta_(1)^2
  H_BOB   = (1/Delta_(1)) * max_k k / Delta_(k)
  H_P1(a) = max_k [ sum_{i=<k>}^{K} (a_i - a_{i+1}) i
                    + (1/24) K a_<k> Delta_k ] / (a_<k>^2 Delta_k^2) * barlog K

with <k> the rank of arm k by decreasing mean and a a non-increasing allocation
with a_1 = a_2 = 1, a_{K+1} = 0. Always H_SR <= H_BOB <= H_UNIF.

H_P1 is minimized over four candidate allocation families -- constant 1, 1/i,
1/sqrt(i), and the gap ratio Delta_(1)/Delta_(i) -- one per gap regime; an
optional per-coordinate golden-section refinement can polish the best family.
The integrality constraint n*a_i in N is relaxed to real allocations here;
consumers that need round counts take n_i = ceil(n * a_i).
*/

#include <utility>
#include <vector>

#include "bai/core.hpp"

namespace bai {

/// Allocation vector of length K+1 with the trailing a_{K+1} = 0 appended.
struct Allocation {
  std::vector<double> a;

  int num_arms() const { return static_cast<int>(a.size()) - 1; }
  double operator[](int i) const { return a[static_cast<size_t>(i) - 1]; }  // 1-based
};

/// Appends the trailing zero.
Allocation make_allocation(std::vector<double> first_k);

/// DomainError unless: size K+1, a_1 = a_2 = 1, non-increasing, a_i > 0 for
/// i <= K, and a_{K+1} = 0.
void validate_allocation(const Allocation& alloc, int K);

double h_sr(const GapProfile& profile);
double h_unif(const GapProfile& profile);
double h_unif(const HindsightGaps& hindsight);
double h_bob(const GapProfile& profile);

double h_p1_of(const GapProfile& profile, const Allocation& alloc);

/// Per-arm decomposition of H_P1(a): value = max(per_arm) * barlog K, and the
/// numerator pieces are split for the scale-homogeneity checks.
struct P1Terms {
  std::vector<double> per_arm;        // full term per arm (without barlog)
  std::vector<double> variance_part;  // sum_{i=<k>}^{K} (a_i - a_{i+1}) i
  std::vector<double> bias_part;      // (1/24) K a_<k> Delta_k
  std::vector<double> denominator;    // a_<k>^2 Delta_k^2
  double value = 0.0;
};
P1Terms h_p1_terms(const GapProfile& profile, const Allocation& alloc);

/// The four candidate families, a_1 = a_2 = 1 enforced, gap-ratio entries
/// clamped to <= 1.
std::vector<Allocation> allocation_candidates(const GapProfile& profile);

/// Minimum of h_p1_of over the candidate families, with its argmin.
std::pair<double, Allocation> h_p1_min(const GapProfile& profile);

/// Candidate minimum polished by per-coordinate golden-section sweeps over
/// a_3..a_K (monotonicity preserved).
std::pair<double, Allocation> h_p1_min_refined(const GapProfile& profile, int sweeps = 2);

/// Membership of candidate gaps in the problem class Delta_c of the reference:
/// every arm k must satisfy Delta_k/c <= candidate_k <= c Delta_k, except at
/// most one arm, which must instead satisfy Delta_(1)/c <= candidate <= c Delta_(1).
bool class_membership(const std::vector<double>& candidate_gaps, const GapProfile& reference,
                      double c);

struct ComplexityReport {
  double h_sr = 0.0;
  double h_unif = 0.0;
  double h_bob = 0.0;
  double h_p1 = 0.0;
  Allocation argmin_allocation;
  std::vector<double> per_arm_sr;   // k / Delta_(k)^2 by rank position k
  std::vector<double> per_arm_bob;  // k / Delta_(k) by rank position k
  std::vector<double> per_arm_p1;   // per-arm H_P1 terms at the argmin
};
ComplexityReport complexity_report(const GapProfile& profile);

}  // namespace bai

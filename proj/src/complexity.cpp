#include "bai/complexity.hpp"

#include <algorithm>
#include <cmath>

namespace bai {

Allocation make_allocation(std::vector<double> first_k) {
  first_k.push_back(0.0);
  return Allocation{std::move(first_k)};
}

void validate_allocation(const Allocation& alloc, int K) {
  if (static_cast<int>(alloc.a.size()) != K + 1)
    throw DomainError("allocation: expected K+1 entries");
  if (alloc.a[static_cast<size_t>(K)] != 0.0)
    throw DomainError("allocation: a_{K+1} must be 0");
  if (std::fabs(alloc.a[0] - 1.0) > 1e-12 || std::fabs(alloc.a[1] - 1.0) > 1e-12)
    throw DomainError("allocation: a_1 = a_2 = 1 required");
  for (int i = 0; i < K; ++i) {
    if (!(alloc.a[static_cast<size_t>(i)] > 0.0))
      throw DomainError("allocation: entries must be positive");
    if (i + 1 < K && alloc.a[static_cast<size_t>(i) + 1] > alloc.a[static_cast<size_t>(i)] + 1e-15)
      throw DomainError("allocation: must be non-increasing");
  }
}

double h_sr(const GapProfile& profile) {
  double best = 0.0;
  for (int k = 1; k <= profile.num_arms(); ++k) {
    const double g = profile.sorted_gaps[static_cast<size_t>(k) - 1];
    best = std::max(best, k / (g * g));
  }
  return best;
}

double h_unif(const GapProfile& profile) {
  const double g = profile.sorted_gaps[0];
  return profile.num_arms() / (g * g);
}

double h_unif(const HindsightGaps& hindsight) {
  const double g = *std::min_element(hindsight.gaps.begin(), hindsight.gaps.end());
  return static_cast<double>(hindsight.gaps.size()) / (g * g);
}

double h_bob(const GapProfile& profile) {
  double best = 0.0;
  for (int k = 1; k <= profile.num_arms(); ++k)
    best = std::max(best, k / profile.sorted_gaps[static_cast<size_t>(k) - 1]);
  return best / profile.sorted_gaps[0];
}

P1Terms h_p1_terms(const GapProfile& profile, const Allocation& alloc) {
  const int K = profile.num_arms();
  validate_allocation(alloc, K);

  // suffix[r] = sum_{i=r}^{K} (a_i - a_{i+1}) i, 1-based r
  std::vector<double> suffix(static_cast<size_t>(K) + 2, 0.0);
  for (int i = K; i >= 1; --i)
    suffix[static_cast<size_t>(i)] =
        suffix[static_cast<size_t>(i) + 1] +
        (alloc.a[static_cast<size_t>(i) - 1] - alloc.a[static_cast<size_t>(i)]) * i;

  P1Terms terms;
  terms.per_arm.resize(static_cast<size_t>(K));
  terms.variance_part.resize(static_cast<size_t>(K));
  terms.bias_part.resize(static_cast<size_t>(K));
  terms.denominator.resize(static_cast<size_t>(K));
  const double blog = harmonic(K);
  double best = 0.0;
  for (int k = 0; k < K; ++k) {
    const int r = profile.rank_of[static_cast<size_t>(k)];
    const double ar = alloc.a[static_cast<size_t>(r) - 1];
    const double gap = profile.gaps[static_cast<size_t>(k)];
    const double variance = suffix[static_cast<size_t>(r)];
    const double bias = (1.0 / 24.0) * K * ar * gap;
    const double den = ar * ar * gap * gap;
    const double term = (variance + bias) / den;
    terms.variance_part[static_cast<size_t>(k)] = variance;
    terms.bias_part[static_cast<size_t>(k)] = bias;
    terms.denominator[static_cast<size_t>(k)] = den;
    terms.per_arm[static_cast<size_t>(k)] = term;
    best = std::max(best, term);
  }
  terms.value = best * blog;
  return terms;
}

double h_p1_of(const GapProfile& profile, const Allocation& alloc) {
  return h_p1_terms(profile, alloc).value;
}

std::vector<Allocation> allocation_candidates(const GapProfile& profile) {
  const int K = profile.num_arms();
  std::vector<Allocation> out;

  std::vector<double> flat(static_cast<size_t>(K), 1.0);
  out.push_back(make_allocation(flat));

  std::vector<double> inv = flat;
  std::vector<double> inv_sqrt = flat;
  std::vector<double> ratio = flat;
  for (int i = 3; i <= K; ++i) {
    inv[static_cast<size_t>(i) - 1] = 1.0 / i;
    inv_sqrt[static_cast<size_t>(i) - 1] = 1.0 / std::sqrt(static_cast<double>(i));
    ratio[static_cast<size_t>(i) - 1] =
        std::min(1.0, profile.sorted_gaps[0] / profile.sorted_gaps[static_cast<size_t>(i) - 1]);
  }
  out.push_back(make_allocation(std::move(inv)));
  out.push_back(make_allocation(std::move(inv_sqrt)));
  out.push_back(make_allocation(std::move(ratio)));
  return out;
}

std::pair<double, Allocation> h_p1_min(const GapProfile& profile) {
  double best = 0.0;
  Allocation argmin;
  for (const Allocation& a : allocation_candidates(profile)) {
    const double v = h_p1_of(profile, a);
    if (argmin.a.empty() || v < best) {
      best = v;
      argmin = a;
    }
  }
  return {best, argmin};
}

namespace {

template <class F>
double golden_section_min(F f, double lo, double hi, int iters = 48) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

std::pair<double, Allocation> h_p1_min_refined(const GapProfile& profile, int sweeps) {
  auto [best, alloc] = h_p1_min(profile);
  const int K = profile.num_arms();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 3; i <= K; ++i) {
      const double hi = alloc.a[static_cast<size_t>(i) - 2];
      const double lo = std::max(alloc.a[static_cast<size_t>(i)], 1e-9);
      if (!(lo < hi)) continue;
      Allocation trial = alloc;
      const double x = golden_section_min(
          [&](double v) {
            trial.a[static_cast<size_t>(i) - 1] = v;
            return h_p1_of(profile, trial);
          },
          lo, hi);
      trial.a[static_cast<size_t>(i) - 1] = x;
      const double v = h_p1_of(profile, trial);
      if (v < best) {
        best = v;
        alloc = trial;
      }
    }
  }
  return {best, alloc};
}

bool class_membership(const std::vector<double>& candidate_gaps, const GapProfile& reference,
                      double c) {
  const int K = reference.num_arms();
  if (static_cast<int>(candidate_gaps.size()) != K)
    throw DomainError("class_membership: size mismatch");
  if (!(c >= 1.0)) throw DomainError("class_membership: c must be >= 1");
  const double delta_1 = reference.sorted_gaps[0];
  int violations = 0;
  for (int k = 0; k < K; ++k) {
    const double ref = reference.gaps[static_cast<size_t>(k)];
    const double cand = candidate_gaps[static_cast<size_t>(k)];
    if (ref / c <= cand && cand <= c * ref) continue;
    // the single exception arm must sit within the Delta_(1) band instead
    if (++violations > 1) return false;
    if (!(delta_1 / c <= cand && cand <= c * delta_1)) return false;
  }
  return true;
}

ComplexityReport complexity_report(const GapProfile& profile) {
  ComplexityReport r;
  r.h_sr = h_sr(profile);
  r.h_unif = h_unif(profile);
  r.h_bob = h_bob(profile);
  auto [p1, alloc] = h_p1_min(profile);
  r.h_p1 = p1;
  r.argmin_allocation = alloc;
  const int K = profile.num_arms();
  r.per_arm_sr.resize(static_cast<size_t>(K));
  r.per_arm_bob.resize(static_cast<size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const double g = profile.sorted_gaps[static_cast<size_t>(k) - 1];
    r.per_arm_sr[static_cast<size_t>(k) - 1] = k / (g * g);
    r.per_arm_bob[static_cast<size_t>(k) - 1] = k / g;
  }
  r.per_arm_p1 = h_p1_terms(profile, alloc).per_arm;
  return r;
}

}  // namespace bai

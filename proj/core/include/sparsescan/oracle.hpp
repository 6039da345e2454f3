#pragma once

#include "sparsescan/distributions.hpp"
#include "sparsescan/numerics.hpp"

namespace sparsescan {

// Count test on a fixed region with null mass p and alternative mass q:
// rejects when the region holds at least c points, c chosen as the smallest
// count keeping the null level <= alpha.
struct ExactPower {
  int critical_count;  // in {0, ..., n+1}; n+1 means the test never rejects
  Probability power;   // exact alternative probability of rejection
};

ExactPower exact_test_power(int n, Probability p, Probability q, double alpha);

enum class OracleKind { Threshold, Scan };

struct OracleTestResult {
  OracleKind kind;
  double lower;  // threshold t, or window left end s
  double upper;  // +inf for thresholds and half-line windows
  int critical_count;
  Probability exact_power;
  Probability null_level;  // always <= alpha
};

// Most powerful threshold count test against the mixture, over regions
// [t, inf).  Within the set of thresholds sharing a critical count c the
// power strictly increases as the region grows, so the continuum optimum
// always sits where the null mass equals P_c, the largest mass at which a
// c-count test still has level <= alpha.  The search therefore enumerates
// c = 1..n in closed form instead of gridding t.
OracleTestResult oracle_threshold_test(const MixtureSpec& spec, double alpha);

struct ScanSearchOptions {
  int sweep_points = 384;  // coarse left-endpoint grid per candidate count
  int refine_basins = 4;   // local maxima polished per candidate count
};

// Most powerful window count test against the mixture, over regions [s, t]
// (t = +inf allowed).  An optimal window either spends its full null-mass
// budget P_c — a one-parameter family per count, swept over the left end s
// and polished by golden section — or is a half-line, which the threshold
// enumeration already covers.  The result never falls below
// oracle_threshold_test on the same spec.
OracleTestResult oracle_scan_test(const MixtureSpec& spec, double alpha,
                                  const ScanSearchOptions& options = {});

}  // namespace sparsescan

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpsos/saddle.hpp"
#include "cpsos/sos.hpp"

// Independent checking of certificates and saddle points. Nothing here trusts
// the SDP backend.

namespace cpsos {

enum class Grade {
  Exact,        ///< rationalized identity within tolerance
  NumericOnly,  ///< rationalization lost too much; float residual decides
};

std::string_view to_string(Grade g);

struct VerificationReport {
  double residual_inf_norm = 0.0;  ///< authoritative residual (exact or float per grade)
  double exact_residual = 0.0;     ///< after rationalizing the Grams
  double float_residual = 0.0;
  std::vector<std::pair<std::string, double>> psd_margins;  ///< per-block min eigenvalue
  bool identity_exact = false;     ///< rationalized identity holds with residual 0
  Grade grade = Grade::Exact;
  bool verified = false;
  std::string detail;
};

struct VerifyOptions {
  double tol = 1e-6;
  double psd_tol = 1e-8;
  std::int64_t max_denominator = 1'000'000;
};

/// Checks sigma_0 - sum sigma_i g_i + sigma (c - f) + mu* = f (sharp mode:
/// the fixed lambda_i g_i are moved to the target side). Every block expected
/// at the certificate's level must be present. Throws MissingBlock and
/// BasisMismatch.
VerificationReport verify_certificate(const Problem& problem, const Certificate& cert,
                                      const Rational& c, const VerifyOptions& options = {});

struct SaddleOptions {
  double kkt_tol = 1e-5;
  double inequality_tol = 1e-7;
  int x_samples = 200;
  double x_radius = 10.0;
  int lambda_samples = 50;
  double lambda_max = 10.0;
  std::uint64_t seed = 1;
};

struct SaddleReport {
  KktResiduals kkt;
  /// min over samples of L(x, lambda*) - L(x*, lambda*); should be >= -tol.
  double min_x_gap = 0.0;
  /// min over samples of L(x*, lambda*) - L(x*, lambda); should be >= -tol.
  double min_lambda_gap = 0.0;
  bool verified = false;
  std::string detail;
};

SaddleReport verify_saddle(const Problem& problem, const SaddlePoint& saddle,
                           const SaddleOptions& options = {});

}  // namespace cpsos

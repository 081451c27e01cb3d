#pragma once

#include "apq/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace apq {

struct HypothesisClause {
  std::string name;
  bool ok = true;
  bool verified = true; // false: condition not decidable for this data kind
  std::string message;
};

/// Itemized machine check of the structural and growth hypotheses. Each
/// group flag is true iff all its sub-checks pass; nothing is silently
/// skipped (undecidable checks are reported as unverified passes).
struct HypothesisReport {
  std::vector<HypothesisClause> h0;
  std::vector<HypothesisClause> h1;
  bool h0_ok = true;
  bool h1_ok = true;
  std::vector<std::string> messages() const;
};

/// Evaluates every sub-check; reports, never throws. Requires the eigen
/// stage (lambda1 and the resolved slope field).
HypothesisReport check_hypotheses(const Problem& problem, double lambda1);

/// Throwing gate used before solve stages: rejects configurations violating
/// q_+ < p_-, tau_+ < p_-, p_+ - p_- <= 1, p_+ < p_-^*, mu_+ < q_-, and,
/// when lambda1 is supplied, theta <= lambda1 with a positive gap. The
/// ValidationError message names the violated clause.
void enforce_hypotheses(const Problem& problem, std::optional<double> lambda1 = {});

} // namespace apq

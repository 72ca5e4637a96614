#pragma once

#include <optional>
#include <vector>

#include "iss/subgrad.hpp"

namespace iss {

/// A candidate generalised singular vector of K under the l1 functional:
/// u with lambda K*K u in dJ(u) for lambda = ||u||_1 / ||K u||_2^2.
/// `p` stores lambda K*K u, the subgradient the definition demands.
/// `k_normalised` records whether ||K u||_2 = 1 within 1e-10.
struct SingularCandidate {
  Vector u;
  double lambda = 0.0;
  Vector p;
  bool k_normalised = false;
};

/// Named conditions a certification can report on. `flow` covers whole
/// trajectory checks (pointwise inclusion, residual orthogonality,
/// restricted optimality).
enum class Condition { singular, oc, sub0, sub0_signed, fusion, dual_sv, ssc, flow };

const char* to_string(Condition c);

/// Pass/fail verdict for a named condition. Semantics of the witness:
///  - singular: worst membership margin and its coordinate
///  - oc: largest pairwise inner product <K u_i, K u_j>
///  - sub0 / sub0_signed: on failure, the first k whose partial sum leaves
///    the dual ball and the offending entry's value; on success the largest
///    partial-sum magnitude seen
///  - fusion: membership margin of the fused candidate (pass means the
///    fused vector is NOT singular, margin strictly negative)
///  - dual_sv: smallest attainable sup-norm residual over the convex hull
///  - flow / ssc: worst deviation and, where meaningful, its coordinate
/// Indices are 1-based.
struct ConditionReport {
  Condition condition = Condition::singular;
  bool pass = false;
  std::optional<Index> witness_index;
  double witness_value = 0.0;
  double tolerance_used = 0.0;
};

/// Builds a candidate from u, always recomputing lambda from the
/// definition. Throws std::invalid_argument when K u vanishes.
SingularCandidate make_candidate(const Vector& u, const LinearOperator& K);

/// Does lambda K*K u lie in dJ(u)?
ConditionReport check_singular(const SingularCandidate& cand, const Tolerances& tol);

/// Certifies every member of a family at once: pass iff each candidate
/// passes check_singular; the witness is the worst margin seen.
ConditionReport check_singular_family(const std::vector<SingularCandidate>& cands,
                                      const Tolerances& tol);

/// Pairwise orthogonality of the images K u_i. Needs >= 2 candidates.
ConditionReport check_oc(const std::vector<SingularCandidate>& cands,
                         const LinearOperator& K, const Tolerances& tol);

/// Partial-sum dual feasibility in the caller's order: every prefix sum of
/// the candidates' p vectors must stay in dJ(0). Order matters; use the
/// ordering the decomposition is claimed in.
ConditionReport check_sub0(const std::vector<SingularCandidate>& cands,
                           const Tolerances& tol);

/// Same with each p_j weighted by gamma_j / |gamma_j|. Zero coefficients
/// are rejected.
ConditionReport check_sub0_signed(const std::vector<SingularCandidate>& cands,
                                  const std::vector<double>& gammas,
                                  const Tolerances& tol);

/// Can the members of `subset` fuse into a single singular vector at a
/// common breakpoint? Forms w = sum gamma_j u_j over the subset and checks
/// whether mu K*K w lands in dJ(w); pass means it does not, so distinct
/// breakpoints cannot merge. Requires K-normalised candidates, positive
/// gammas, subset size >= 2, and strictly increasing lambda_j / gamma_j
/// along the subset (0-based indices into `cands`).
ConditionReport check_fusion(const std::vector<SingularCandidate>& cands,
                             const std::vector<double>& gammas,
                             const std::vector<std::size_t>& subset,
                             const LinearOperator& K, const Tolerances& tol);

/// Is f (after scaling by ||K* f||_inf / ||f||_2^2) a singular vector of
/// the dual functional ||K* . ||_inf? Tests exact feasibility of the
/// convex-hull representation over the argmax set of K* f. Throws
/// std::invalid_argument when K* f = 0.
ConditionReport check_dual_singular(const Vector& f, const LinearOperator& K,
                                    const Tolerances& tol);

/// Breakpoint times t_k = lambda_k / gamma_k predicted for data
/// f = sum gamma_k K u_k. Throws std::invalid_argument unless the sequence
/// is strictly increasing and all gammas are positive.
std::vector<double> predicted_breakpoints(const std::vector<SingularCandidate>& cands,
                                          const std::vector<double>& gammas);

/// Singular vector with equal-magnitude peaks in the coordinates of an
/// orthonormal transform W (W*W = I within the check tolerance). The
/// candidate lives in transform coordinates, where the certification runs
/// against the identity: z has entries signs_i / sqrt(|support|) on the
/// support, lambda = sqrt(|support|), and W* z is the signal-space
/// representative. Support indices are 0-based and must be distinct;
/// signs are +1 or -1.
SingularCandidate dictionary_singular(const LinearOperator& W,
                                      const std::vector<Index>& support,
                                      const std::vector<int>& signs);

}  // namespace iss

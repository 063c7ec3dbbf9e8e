#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entbell/bell.hpp"
#include "entbell/simplex.hpp"

namespace entbell {

/// Result of a local-weight or membership program.
struct LPCertificate {
  LPStatus status = LPStatus::Infeasible;
  Rational objective;
  std::vector<Rational> weights;  // over the generating points
  std::vector<Rational> dual;     // dual solution, or Farkas vector when infeasible
  bool verified = false;          // certificate re-checked exactly
  std::size_t pivots = 0;
};

std::string to_json(const LPCertificate& cert);

/// Largest alpha with d = alpha * local + (1 - alpha) * no-signalling, over the
/// deterministic points of the scenario. Throws SignallingInput.
LPCertificate local_weight(const Distribution& d);

struct LocalityResult {
  bool local = false;
  LPCertificate certificate;
  /// For nonlocal inputs: y with y.D >= 1 on every deterministic point and
  /// y.d = weight < 1, stored as -y.P <= -1.
  std::optional<BellFunctional> separator;
};

LocalityResult is_local(const Distribution& d);

/// A polytope given by generators, by constraints, or by both. Constraints
/// are in addition to positivity, normalization and no-signalling.
struct PolytopeModel {
  Scenario scenario = kScenario2233;
  std::vector<Distribution> generators;
  std::vector<BellFunctional> constraints;
  std::vector<std::string> symmetry_classes;
};

/// No-signalling points satisfying all 648 CHSH-type functionals; with
/// `i2233_floor` additionally I2233^1 >= 2.
PolytopeModel pi_chsh_model(bool i2233_floor);

/// Exact membership in the convex hull of model.generators.
LPCertificate hull_membership(const PolytopeModel& model, const Distribution& d);

struct VertexReport {
  bool feasible = false;
  bool extremal = false;
  std::vector<std::size_t> tight_constraints;  // indices into model.constraints
  std::size_t tight_positivity = 0;
  std::size_t rank = 0;  // of equalities plus tight normals; extremal iff == dimension
};

VertexReport verify_vertex(const Distribution& d, const PolytopeModel& model);

struct JointViolationOptions {
  bool include_chsh = true;
};

/// max eps >= 0 over no-signalling p with I^i(p) >= 2 + eps, I^j(p) >= 2 + eps
/// and (optionally) all CHSH-type functionals satisfied. Indices are 1-based
/// orbit positions; j == 0 drops the partner.
LPCertificate joint_violation_lp(std::size_t i, std::size_t j, const JointViolationOptions& options = {});

/// Answers "is [v, w] inside the union" without an LP when it can; nullopt
/// defers to the generic test.
using SegmentOracle = std::function<std::optional<bool>(const Distribution& v, const Distribution& w)>;

struct UnionOptions {
  /// Samples t = k / subdivision (k = 1..subdivision-1) tried as common points
  /// of the two hulls before the exact segment program; 2 means the midpoint.
  int subdivision = 2;
  SegmentOracle oracle;
  unsigned jobs = 0;
};

struct ConvexityResult {
  bool convex = true;
  /// Offending pair: (polytope index, vertex index) for both ends.
  std::optional<std::array<std::size_t, 4>> witness;
  std::size_t pairs_checked = 0;
  std::size_t programs_solved = 0;
};

/// Incremental vertex-pair test: the union of P_1..P_k is convex iff, with
/// U the (convex) union of the earlier ones, every segment between a vertex
/// of U and a vertex of P_k lies in U or P_k.
ConvexityResult union_is_convex(std::span<const PolytopeModel> polys, const UnionOptions& options = {});

/// The polytopes Conv({r_j(seed)} + locals) over the relabelling orbit r_j(seed)
/// and their union test. Segment checks are reduced by relabelling symmetry
/// to the locality of (seed + r_j(seed)) / 2.
struct RelabelledUnion {
  std::vector<OrbitMember> orbit;                   // seed under local relabellings
  std::vector<std::optional<bool>> midpoint_local;  // per orbit index, filled lazily
  ConvexityResult result;
};
RelabelledUnion relabelled_union_is_convex(const Distribution& seed, unsigned jobs = 0);

/// Distinct points in the union of the orbits of `seeds` under `ops`.
std::size_t orbit_vertex_count(std::span<const Distribution> seeds, std::span<const SymmetryOp> ops);

}  // namespace entbell

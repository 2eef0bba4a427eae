#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttcm/axioms.hpp"
#include "ttcm/json_io.hpp"
#include "ttcm/mechanisms.hpp"
#include "ttcm/model.hpp"

namespace ttcm {

enum class DomainRestriction {
  full,                    // every strict-order profile
  identical_preferences,   // all students report the same order
};

/// A finite set of preference profiles over a fixed roster (students,
/// schools, capacities, priorities). Profiles are numbered by a mixed-radix
/// index: student 0 is the most significant digit and each digit is the
/// lexicographic rank of that student's order over schools+null, so profile
/// enumeration order is lexicographic. A restriction narrows the admissible
/// (true) profiles; misreports during audits always range over the full
/// order set, so the full product must stay within the guard.
class ProfileDomain {
 public:
  explicit ProfileDomain(Problem roster,
                         DomainRestriction restriction = DomainRestriction::full,
                         long long profile_guard = 10'000'000);

  const Problem& roster() const { return roster_; }
  DomainRestriction restriction() const { return restriction_; }

  long long size() const { return size_; }            // admissible profiles
  long long full_size() const { return full_size_; }  // (S+1)!^N
  int orders_per_student() const { return orders_; }
  int num_students() const { return roster_.num_students(); }

  long long full_index(long long k) const;  // k-th admissible profile
  Problem instantiate(long long k) const { return instantiate_full(full_index(k)); }
  Problem instantiate_full(long long fi) const;

  std::vector<int> ranks_of_full(long long fi) const;
  long long full_index_of_ranks(const std::vector<int>& ranks) const;
  long long replace_rank(long long fi, int student, int rank) const;
  int rank_of_full(long long fi, int student) const;

  /// Lexicographic unrank/rank of a single preference order over {0..S}.
  std::vector<int> order_of_rank(int rank) const;
  int rank_of_order(const std::vector<int>& order) const;
  long long full_index_of_profile(const std::vector<std::vector<int>>& prefs) const;

  Json descriptor_json() const;

 private:
  Problem roster_;
  DomainRestriction restriction_;
  int orders_ = 1;
  long long full_size_ = 1;
  long long size_ = 1;
  std::vector<long long> weights_;  // per-student digit weight
};

/// Visits every admissible profile exactly once, in lexicographic order,
/// as a fully materialized problem.
void for_each_profile(const ProfileDomain& domain,
                      const std::function<void(long long index, const Problem&)>& fn);

struct AuditOptions {
  int workers = 1;
  int max_group_size = 0;  // 0 = unbounded (collusion/group audits)
  int pareto_guard = 7;    // enumeration guard for efficiency components
};

/// Audit outcome. Witnesses reference profiles by full index; the reported
/// witness is the lexicographically first in (profile, group-or-student,
/// misreport, reallocation) enumeration order, independent of worker count.
template <typename W>
struct AuditVerdict {
  bool pass = true;
  std::optional<W> witness;
  long long profiles_checked = 0;
  long long cases = 0;
};

struct SpWitness {
  long long profile = 0;  // full index of the true profile
  int student = -1;
  int misreport_rank = -1;
};

struct GroupSpWitness {
  long long profile = 0;
  std::vector<int> group;           // student indices, ascending
  std::vector<int> misreport_ranks;  // aligned with group
};

struct ReallocationWitness {
  long long profile = 0;
  int first = -1, second = -1;
  int misreport_first = -1, misreport_second = -1;
};

struct CollusionWitness {
  long long profile = 0;
  std::vector<int> group;
  std::vector<int> misreport_ranks;
  std::vector<int> reallocation;  // reallocation[t]: school handed to group[t]
};

struct EfficiencyWitness {
  long long profile = 0;
  Matching dominating;
};

/// Exactly one member is set; `efficiency` when the Pareto component of a
/// robust-efficiency audit fails first at the reported profile.
struct RobustWitness {
  std::optional<EfficiencyWitness> efficiency;
  std::optional<CollusionWitness> collusion;
};

AuditVerdict<SpWitness> strategy_proof_audit(const Mechanism&, const ProfileDomain&,
                                             const AuditOptions& = {});
AuditVerdict<GroupSpWitness> group_strategy_proof_audit(const Mechanism&, const ProfileDomain&,
                                                        const AuditOptions& = {});
AuditVerdict<ReallocationWitness> reallocation_proof_audit(const Mechanism&, const ProfileDomain&,
                                                           const AuditOptions& = {});
AuditVerdict<CollusionWitness> collusion_proof_audit(const Mechanism&, const ProfileDomain&,
                                                     const AuditOptions& = {});
/// Same search as collusion_proof_audit, with the colluding set ranging
/// over the mutual best groups of the true profile only.
AuditVerdict<CollusionWitness> mbg_collusion_proof_audit(const Mechanism&, const ProfileDomain&,
                                                         const AuditOptions& = {});
AuditVerdict<RobustWitness> robust_efficiency_audit(const Mechanism&, const ProfileDomain&,
                                                    const AuditOptions& = {});
AuditVerdict<RobustWitness> mbg_robust_efficiency_audit(const Mechanism&, const ProfileDomain&,
                                                        const AuditOptions& = {});

// --- Uniqueness probe ---------------------------------------------------------

struct DeviantSurvivor {
  long long profile = 0;  // full index where the deviation lives
  Matching matching;
};

struct UniquenessVerdict {
  bool pass = true;
  std::optional<DeviantSurvivor> survivor;
  long long profiles_checked = 0;
  long long deviants_tested = 0;
};

/// For every admissible profile and every matching other than the
/// top-trading-cycles outcome that is Pareto efficient and
/// MBG-quota-rational there, builds the one-profile deviation mechanism
/// (that matching there, top trading cycles elsewhere) and verifies the
/// MBG-collusion audit rejects it. Passes iff no deviant survives.
UniquenessVerdict uniqueness_probe(const ProfileDomain&, const AuditOptions& = {});

/// The rejecting witness for one concrete deviant, or nullopt if it
/// survives. Exposed for replaying individual deviations.
std::optional<CollusionWitness> deviant_rejection_witness(const ProfileDomain&,
                                                          long long full_profile_index,
                                                          const Matching& deviant_outcome,
                                                          const AuditOptions& = {});

// --- Witness replay -----------------------------------------------------------

// Replays evaluate the mechanism directly from the witness data and the raw
// definitions; they share no state with the audit searches.
bool replay_sp_witness(const Mechanism&, const ProfileDomain&, const SpWitness&);
bool replay_group_sp_witness(const Mechanism&, const ProfileDomain&, const GroupSpWitness&);
bool replay_reallocation_witness(const Mechanism&, const ProfileDomain&,
                                 const ReallocationWitness&);
bool replay_collusion_witness(const Mechanism&, const ProfileDomain&, const CollusionWitness&,
                              bool require_mbg_group);
bool replay_efficiency_witness(const Mechanism&, const ProfileDomain&, const EfficiencyWitness&);
bool replay_robust_witness(const Mechanism&, const ProfileDomain&, const RobustWitness&,
                           bool mbg_variant);

// --- Reports -------------------------------------------------------------------

struct AuditReport {
  std::string mechanism;
  std::string axiom;
  bool pass = true;
  Json witness;  // null when passing
  long long profiles_checked = 0;
  long long cases = 0;
  long long elapsed_ms = 0;
};

const std::vector<std::string>& audit_axiom_names();

/// Runs the named audit ("strategy-proofness", "group-strategy-proofness",
/// "reallocation-proofness", "collusion-proofness",
/// "mbg-collusion-proofness", "robust-efficiency", "mbg-robust-efficiency").
AuditReport run_audit(const Mechanism&, const ProfileDomain&, const std::string& axiom,
                      const AuditOptions& = {});

/// Report document. elapsed_ms is emitted as 0 unless include_timing is
/// set, keeping default output byte-identical across runs and worker
/// counts.
Json report_json(const ProfileDomain&, const AuditReport&, bool include_timing = false);

Json profile_json(const ProfileDomain&, long long full_index);
Json witness_json(const ProfileDomain&, const SpWitness&);
Json witness_json(const ProfileDomain&, const GroupSpWitness&);
Json witness_json(const ProfileDomain&, const ReallocationWitness&);
Json witness_json(const ProfileDomain&, const CollusionWitness&);
Json witness_json(const ProfileDomain&, const EfficiencyWitness&);
Json witness_json(const ProfileDomain&, const RobustWitness&);

}  // namespace ttcm

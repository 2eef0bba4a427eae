// Acceptance suite: every shipped guarantee, one pass/fail line each.
// Exits nonzero if any line fails. Criterion 9's first clause is known to
// fail: the psi fixture is collusion-immune at its designated table
// profile but not across its whole declared domain, and the suite reports
// that honestly rather than narrowing the audit.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <vector>

#include "ttcm/audits.hpp"
#include "ttcm/axioms.hpp"
#include "ttcm/fixtures.hpp"
#include "ttcm/mbg.hpp"
#include "ttcm/mechanisms.hpp"

using namespace ttcm;

namespace {

int failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail = "") {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << label;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n";
  if (!pass) ++failures;
}

double ms_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// witness replay ledger for criterion 12
struct ReplayEntry {
  std::string source;
  std::function<bool()> replay;
};
std::vector<ReplayEntry> replay_ledger;

const AgentOrdering kF123{{0, 1, 2}};

std::string set_text(const Problem& p, const std::vector<int>& students) {
  std::string out = "{";
  for (size_t t = 0; t < students.size(); ++t) {
    if (t) out += ",";
    out += p.student_name(students[t]);
  }
  return out + "}";
}

void criterion1() {
  Problem p = fixtures::example1_problem();
  MbgSequence seq = mbg_sequence(p);  // warm-up, also the checked value
  bool ok = seq.group_count() == 2 && set_text(p, seq.levels[0].group) == "{1,3,4}" &&
            set_text(p, seq.levels[1].group) == "{2,5}";
  const Problem& sub = seq.group_count() == 2 ? seq.levels[1].subproblem : p;
  ok = ok && sub.students == std::vector<std::string>{"2", "5"} &&
       sub.schools == std::vector<std::string>{"a", "b"} &&
       sub.capacities == std::vector<int>{1, 1};

  auto start = std::chrono::steady_clock::now();
  constexpr int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    MbgSequence again = mbg_sequence(p);
    if (again.group_count() != 2) ok = false;
  }
  double per_run_ms = ms_since(start) / reps;
  ok = ok && per_run_ms < 1.0;
  char detail[64];
  std::snprintf(detail, sizeof detail, "%.4f ms per partition", per_run_ms);
  report(1, "example-1 partition ({1,3,4},{2,5}) with subproblem a:1 b:1", ok, detail);
}

void criterion2() {
  Problem at_P = fixtures::example4_problem();
  Problem at_Pp = fixtures::example4_with(fixtures::example4_profile_swapped());
  ProfileDomain domain(at_P);

  auto swap13 = [](Matching m) {
    std::swap(m.assignment[0], m.assignment[2]);
    return m;
  };
  bool ok = true;
  auto row = [&](const Matching& got, std::vector<int> expect) {
    if (got.assignment != expect) ok = false;
  };
  const Matching ttc_Pp = ttc_stepwise(at_Pp);
  const Matching da_Pp = deferred_acceptance(at_Pp);
  const Matching sd_Pp = serial_dictatorship(at_Pp, kF123);
  row(ttc_stepwise(at_P), {1, 1, 0});
  row(ttc_Pp, {0, 1, 1});
  row(swap13(ttc_Pp), {1, 1, 0});
  row(deferred_acceptance(at_P), {1, 0, 1});
  row(da_Pp, {0, 1, 1});
  row(swap13(da_Pp), {1, 1, 0});
  row(serial_dictatorship(at_P, kF123), {1, 0, 1});
  row(sd_Pp, {0, 1, 1});
  row(swap13(sd_Pp), {1, 1, 0});

  auto ttc_verdict = mbg_robust_efficiency_audit(make_ttc(), domain);
  auto da_verdict = mbg_robust_efficiency_audit(make_da(), domain);
  auto sd_verdict = mbg_robust_efficiency_audit(make_sd(at_P, kF123), domain);
  ok = ok && ttc_verdict.pass && !da_verdict.pass && !sd_verdict.pass;
  if (da_verdict.witness)
    replay_ledger.push_back({"criterion2/da", [domain, w = *da_verdict.witness] {
                               return replay_robust_witness(make_da(), domain, w, true);
                             }});
  if (sd_verdict.witness)
    replay_ledger.push_back({"criterion2/sd", [domain, at_P, w = *sd_verdict.witness] {
                               return replay_robust_witness(make_sd(at_P, kF123), domain, w, true);
                             }});
  report(2, "example-4 table: nine rows and Yes/No/No mbg-robust verdicts", ok);
}

// shared by criteria 3, 4 and 7
struct SuiteScan {
  long long pairs_checked = 0;
  long long prop1_breaks = 0;
  long long stability_implication_breaks = 0;
  long long pinning_breaks = 0;
  double elapsed_ms = 0;
};

SuiteScan scan_suite() {
  SuiteScan scan;
  auto start = std::chrono::steady_clock::now();
  ProfileDomain domain(fixtures::example4_problem());
  const std::vector<Matching> matchings = all_matchings(domain.roster());
  for (long long k = 0; k < domain.size(); ++k) {
    Problem p = domain.instantiate(k);
    const Matching ttc = ttc_stepwise(p);
    for (const Matching& m : matchings) {
      ++scan.pairs_checked;
      auto qr = is_quota_rational(p, m);
      auto st = is_stable(p, m);
      if (qr.pass != st.pass) ++scan.prop1_breaks;
      if (st.pass && !is_mbg_quota_rational(p, m).pass) ++scan.stability_implication_breaks;
      bool respects = respects_mbgs(p, m).pass;
      bool efficient = is_pareto_efficient(p, m).pass;
      if (respects && efficient && !(m == ttc)) ++scan.pinning_breaks;
    }
  }
  scan.elapsed_ms = ms_since(start);
  return scan;
}

void criterion5() {
  bool ok = true;
  long long cases = 0;
  ProfileDomain ex4(fixtures::example4_problem());
  for (long long k = 0; k < ex4.size(); ++k) {
    Problem p = ex4.instantiate(k);
    ++cases;
    if (!(ttc_compact(p) == ttc_stepwise(p))) ok = false;
  }
  // every priority structure on the 2-student/2-school unit roster, every
  // profile of each
  for (const Problem& roster : fixtures::unit_2x2_problems()) {
    ProfileDomain d(roster);
    for (long long k = 0; k < d.size(); ++k) {
      Problem p = d.instantiate(k);
      ++cases;
      if (!(ttc_compact(p) == ttc_stepwise(p))) ok = false;
    }
  }
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    Problem p = [&rng] {
      Problem q;
      const int n = 1 + static_cast<int>(rng() % 6);
      const int s = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < n; ++i) q.students.push_back(std::to_string(i + 1));
      for (int a = 0; a < s; ++a) {
        q.schools.push_back(std::string(1, 'a' + a));
        q.capacities.push_back(1 + static_cast<int>(rng() % 3));
      }
      for (int i = 0; i < n; ++i) {
        std::vector<int> order(s + 1);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        q.prefs.push_back(order);
      }
      for (int a = 0; a <= s; ++a) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        q.priorities.push_back(order);
      }
      q.finalize();
      return q;
    }();
    ++cases;
    if (!(ttc_compact(p) == ttc_stepwise(p))) ok = false;
  }
  report(5, "compact and stepwise ttc agree everywhere probed", ok,
         std::to_string(cases) + " instances");
}

void criterion6() {
  bool ok = true;
  std::vector<ProfileDomain> domains;
  domains.emplace_back(fixtures::example4_problem());
  for (const Problem& roster : fixtures::unit_2x2_problems()) domains.emplace_back(roster);
  long long profiles = 0;
  for (const ProfileDomain& d : domains) {
    for (long long k = 0; k < d.size(); ++k) {
      Problem p = d.instantiate(k);
      ++profiles;
      if (!is_mbg_quota_rational(p, ttc_stepwise(p)).pass) ok = false;
    }
    if (!mbg_robust_efficiency_audit(make_ttc(), d).pass) ok = false;
  }
  report(6, "ttc is mbg-quota-rational and mbg-robustly efficient on all nine domains", ok,
         std::to_string(profiles) + " profiles");
}

void criterion8() {
  ProfileDomain domain(fixtures::example4_problem());
  AuditOptions opt;
  opt.workers = 4;
  UniquenessVerdict v = uniqueness_probe(domain, opt);
  report(8, "every efficient mbg-quota-rational one-profile deviation is rejected",
         v.pass && v.deviants_tested > 0,
         std::to_string(v.deviants_tested) + " deviants, " +
             std::to_string(v.profiles_checked) + " profiles");
}

void criterion9() {
  ProfileDomain domain(fixtures::example4_problem());
  const Mechanism psi = make_psi();
  const Mechanism sd = make_sd(domain.roster(), kF123);

  auto psi_collusion = mbg_collusion_proof_audit(psi, domain);
  bool psi_passes_mbg = psi_collusion.pass;  // the documented expectation
  if (psi_collusion.witness) {
    replay_ledger.push_back({"criterion9/psi-collusion", [domain, w = *psi_collusion.witness] {
                               return replay_collusion_witness(make_psi(), domain, w, true);
                             }});
    std::cout << "  note: psi mbg-collusion counterexample "
              << witness_json(domain, *psi_collusion.witness).dump() << "\n";
    std::cout << "  note: the immunity claimed for psi holds at its designated table profile "
                 "but not across the full 216-profile domain (see the audit unit tests)\n";
  }

  auto psi_realloc = reallocation_proof_audit(psi, domain);
  ReallocationWitness documented{
      domain.full_index_of_profile(fixtures::example4_profile_truthful()), 0, 1, 0, 2};
  bool psi_realloc_ok = !psi_realloc.pass && psi_realloc.witness &&
                        psi_realloc.witness->profile == documented.profile &&
                        psi_realloc.witness->first == documented.first &&
                        psi_realloc.witness->second == documented.second &&
                        psi_realloc.witness->misreport_first == documented.misreport_first &&
                        psi_realloc.witness->misreport_second == documented.misreport_second &&
                        replay_reallocation_witness(psi, domain, documented);
  if (psi_realloc.witness)
    replay_ledger.push_back({"criterion9/psi-realloc", [domain, w = *psi_realloc.witness] {
                               return replay_reallocation_witness(make_psi(), domain, w);
                             }});

  bool sd_realloc_ok = reallocation_proof_audit(sd, domain).pass;

  auto sd_collusion = mbg_collusion_proof_audit(sd, domain);
  CollusionWitness table_witness{
      domain.full_index_of_profile(fixtures::example4_profile_truthful()), {0, 2}, {0, 2}, {1, 0}};
  bool sd_collusion_ok =
      !sd_collusion.pass && replay_collusion_witness(sd, domain, table_witness, true);
  if (sd_collusion.witness)
    replay_ledger.push_back({"criterion9/sd-collusion", [domain, w = *sd_collusion.witness] {
                               Mechanism sd_copy = make_sd(domain.roster(), kF123);
                               return replay_collusion_witness(sd_copy, domain, w, true);
                             }});

  report(9,
         "independence: psi mbg-collusion-proof (documented expectation) + psi reallocation "
         "failure with the table witness + sd reallocation-proof + sd mbg-collusion "
         "failure with the table witness",
         psi_passes_mbg && psi_realloc_ok && sd_realloc_ok && sd_collusion_ok,
         std::string("psi mbg-collusion audit: ") + (psi_passes_mbg ? "pass" : "FAIL") +
             ", psi realloc witness: " + (psi_realloc_ok ? "ok" : "bad") +
             ", sd realloc: " + (sd_realloc_ok ? "pass" : "FAIL") +
             ", sd collusion witness: " + (sd_collusion_ok ? "ok" : "bad"));
}

void criterion10() {
  ProfileDomain ex4(fixtures::example4_problem());
  bool da_rational = true;
  for (long long k = 0; k < ex4.size(); ++k) {
    Problem p = ex4.instantiate(k);
    if (!is_mbg_quota_rational(p, deferred_acceptance(p)).pass) da_rational = false;
  }
  auto da_audit = mbg_robust_efficiency_audit(make_da(), ex4);
  if (da_audit.witness)
    replay_ledger.push_back({"criterion10/da", [ex4, w = *da_audit.witness] {
                               return replay_robust_witness(make_da(), ex4, w, true);
                             }});

  Problem roster = fixtures::tilde_2x1_problem();
  ProfileDomain small(roster);
  Mechanism tilde = make_tilde(roster, AgentOrdering{{0, 1}});
  bool tilde_efficient = mbg_robust_efficiency_audit(tilde, small).pass;
  Problem identical = small.instantiate_full(0);
  auto qr = is_mbg_quota_rational(identical, tilde.eval(identical));
  bool tilde_witness_ok = !qr.pass && qr.witness && qr.witness->group_levels.empty() &&
                          identical.student_name(qr.witness->student) == "2" &&
                          identical.school_name(qr.witness->school) == "a" &&
                          replay_mbg_removal_witness(identical, tilde.eval(identical), *qr.witness);

  report(10,
         "independence of the characterization: da rational-but-not-efficient, tilde "
         "efficient-but-not-rational with the two-student witness",
         da_rational && !da_audit.pass && tilde_efficient && tilde_witness_ok);
}

void criterion11() {
  bool ok = true;
  for (const Problem& roster :
       {fixtures::example4_problem(), fixtures::ergin_cyclic_problem()}) {
    ProfileDomain d(roster);
    if (!strategy_proof_audit(make_hat(), d).pass) ok = false;
    if (!group_strategy_proof_audit(make_hat(), d).pass) ok = false;
    for (long long k = 0; k < d.size(); ++k) {
      Problem p = d.instantiate(k);
      Matching m = hat_mechanism(p);
      if (!is_pareto_efficient(p, m).pass) ok = false;
      if (!is_mbg_quota_rational(p, m).pass) ok = false;
    }
  }
  // the two rosters genuinely exercise both branches
  ok = ok && ergin_acyclic(fixtures::example4_problem()) &&
       !ergin_acyclic(fixtures::ergin_cyclic_problem());
  report(11, "hat mechanism: rational, strategy-proof, efficient, group strategy-proof "
             "on both of its branches",
         ok);
}

void criterion12() {
  long long total = replay_ledger.size();
  long long good = 0;
  for (const ReplayEntry& entry : replay_ledger)
    if (entry.replay()) ++good;
  report(12, "every emitted witness re-validates against the raw definitions", good == total,
         std::to_string(good) + "/" + std::to_string(total) + " witnesses");
}

}  // namespace

int main() {
  criterion1();
  criterion2();

  SuiteScan scan = scan_suite();
  {
    char detail[96];
    std::snprintf(detail, sizeof detail, "%lld matching checks, %.0f ms", scan.pairs_checked,
                  scan.elapsed_ms);
    report(3, "quota-rationality coincides with stability across the exhaustive suite",
           scan.prop1_breaks == 0 && scan.elapsed_ms < 10000.0, detail);
  }
  report(4, "stability implies mbg-quota-rationality across the same suite",
         scan.stability_implication_breaks == 0);

  criterion5();
  criterion6();
  report(7, "efficiency plus respect of mutual best groups pins the ttc matching",
         scan.pinning_breaks == 0,
         std::to_string(scan.pairs_checked) + " matching checks");
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();

  std::cout << (failures == 0 ? "acceptance: all criteria pass"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "support.hpp"
#include "ttcm/audits.hpp"
#include "ttcm/fixtures.hpp"
#include "ttcm/mechanisms.hpp"

using namespace ttcm;

namespace {

ProfileDomain ex4_domain() { return ProfileDomain(fixtures::example4_problem()); }

const AgentOrdering kF123{{0, 1, 2}};

// order ranks over (a, b, null): 0=(a,b,n) 1=(a,n,b) 2=(b,a,n) 3=(b,n,a)
// profile (2,0,0) is the truthful table profile, full index 72
constexpr long long kTruthfulIndex = 2 * 36 + 0 * 6 + 0;

}  // namespace

TEST_CASE("profile domains enumerate and index") {
  ProfileDomain d = ex4_domain();
  CHECK(d.size() == 216);
  CHECK(d.full_size() == 216);
  CHECK(d.orders_per_student() == 6);
  CHECK(d.instantiate(0).prefs[0] == std::vector<int>{0, 1, 2});
  CHECK(d.full_index_of_profile(fixtures::example4_profile_truthful()) == kTruthfulIndex);
  Problem truthful = d.instantiate_full(kTruthfulIndex);
  CHECK(truthful == fixtures::example4_problem());
  CHECK(d.replace_rank(kTruthfulIndex, 0, 0) == 0);
  CHECK(d.rank_of_order({1, 0, 2}) == 2);
  CHECK(d.order_of_rank(5) == std::vector<int>{2, 1, 0});

  ProfileDomain small(fixtures::tilde_2x1_problem());
  CHECK(small.size() == 4);
  ProfileDomain diag(fixtures::tilde_2x1_problem(), DomainRestriction::identical_preferences);
  CHECK(diag.size() == 2);
  CHECK(diag.instantiate(1).prefs[0] == diag.instantiate(1).prefs[1]);

  CHECK_THROWS_AS(ProfileDomain(fixtures::example4_problem(), DomainRestriction::full, 100),
                  Error);
}

TEST_CASE("strategy-proofness audit") {
  ProfileDomain d = ex4_domain();
  SUBCASE("ttc and sd pass") {
    CHECK(strategy_proof_audit(make_ttc(), d).pass);
    CHECK(strategy_proof_audit(make_sd(d.roster(), kF123), d).pass);
  }
  SUBCASE("psi fails and the witness replays") {
    auto v = strategy_proof_audit(make_psi(), d);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_sp_witness(make_psi(), d, *v.witness));
    // the first hit: at (a,b,n)^3 student 2 fakes (b,a,n) to reach the
    // designated profile and trades null for b
    CHECK(v.witness->profile == 0);
    CHECK(v.witness->student == 1);
    CHECK(v.witness->misreport_rank == 2);
    // the classic witness stands as well: student 1 at (P1, P2', P3)
    SpWitness classic{d.full_index_of_ranks({2, 2, 0}), 0, 0};
    CHECK(replay_sp_witness(make_psi(), d, classic));
  }
}

TEST_CASE("group strategy-proofness audit") {
  ProfileDomain d = ex4_domain();
  CHECK(group_strategy_proof_audit(make_ttc(), d).pass);
  CHECK(group_strategy_proof_audit(make_hat(), d).pass);
  auto v = group_strategy_proof_audit(make_psi(), d);
  REQUIRE_FALSE(v.pass);
  CHECK(replay_group_sp_witness(make_psi(), d, *v.witness));
}

TEST_CASE("reallocation-proofness audit") {
  ProfileDomain d = ex4_domain();
  SUBCASE("sd and ttc pass") {
    CHECK(reallocation_proof_audit(make_sd(d.roster(), kF123), d).pass);
    CHECK(reallocation_proof_audit(make_ttc(), d).pass);
  }
  SUBCASE("psi fails exactly on the documented pair") {
    auto v = reallocation_proof_audit(make_psi(), d);
    REQUIRE_FALSE(v.pass);
    // true profile (P1, P2, P3), pair {1,2} faking (P1', P2'): alone the
    // fakes change nothing, together they unlock (a, b, null), and the
    // swap hands 1 the b seat and 2 the a seat
    CHECK(v.witness->profile == kTruthfulIndex);
    CHECK(v.witness->first == 0);
    CHECK(v.witness->second == 1);
    CHECK(v.witness->misreport_first == 0);   // (a,b,n)
    CHECK(v.witness->misreport_second == 2);  // (b,a,n)
    CHECK(replay_reallocation_witness(make_psi(), d, *v.witness));
  }
}

TEST_CASE("collusion-proofness audit") {
  ProfileDomain d = ex4_domain();
  SUBCASE("sd fails; the table's witness replays") {
    auto v = collusion_proof_audit(make_sd(d.roster(), kF123), d);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_collusion_witness(make_sd(d.roster(), kF123), d, *v.witness, false));
    CollusionWitness table{kTruthfulIndex, {0, 2}, {0, 2}, {1, 0}};
    CHECK(replay_collusion_witness(make_sd(d.roster(), kF123), d, table, false));
  }
  SUBCASE("ttc is not collusion-proof once arbitrary pairs may trade") {
    // {1,2} is no mutual best group at the truthful profile, yet 1 can
    // fetch the a seat (own top priority) and sell it to 2 for b
    auto v = collusion_proof_audit(make_ttc(), d);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_collusion_witness(make_ttc(), d, *v.witness, false));
    CollusionWitness trade{kTruthfulIndex, {0, 1}, {0, 2}, {1, 0}};
    CHECK(replay_collusion_witness(make_ttc(), d, trade, false));
    // the same coalition is rejected by the mutual-best-group audit
    CHECK_FALSE(replay_collusion_witness(make_ttc(), d, trade, true));
  }
  SUBCASE("single-student domains are immune") {
    Problem solo = testing::build_problem({"i"}, {"a", "b"}, {1, 1},
                                          {{0, 1, 2}}, {{0}, {0}, {0}});
    ProfileDomain ds(solo);
    CHECK(collusion_proof_audit(make_ttc(), ds).pass);
    CHECK(mbg_collusion_proof_audit(make_ttc(), ds).pass);
  }
}

TEST_CASE("mbg-collusion-proofness audit") {
  ProfileDomain d = ex4_domain();
  SUBCASE("ttc passes") { CHECK(mbg_collusion_proof_audit(make_ttc(), d).pass); }
  SUBCASE("deferred acceptance fails; the table's witness replays") {
    auto v = mbg_collusion_proof_audit(make_da(), d);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_collusion_witness(make_da(), d, *v.witness, true));
    CollusionWitness table{kTruthfulIndex, {0, 2}, {0, 2}, {1, 0}};
    CHECK(replay_collusion_witness(make_da(), d, table, true));
  }
  SUBCASE("psi fails through a singleton group, against the folklore") {
    // at ((a,n,b), (b,a,n), (a,b,n)) student 1 forms a group alone, and
    // faking (a,b,n) reaches the designated profile: null becomes a
    auto v = mbg_collusion_proof_audit(make_psi(), d);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_collusion_witness(make_psi(), d, *v.witness, true));
    CollusionWitness singleton{d.full_index_of_ranks({1, 2, 0}), {0}, {0}, {0}};
    CHECK(replay_collusion_witness(make_psi(), d, singleton, true));
  }
  SUBCASE("psi as checked at the table profile alone holds up") {
    // neither group of the truthful profile can reach the designated
    // profile without an outsider, so no misreport moves anyone
    Problem truth = fixtures::example4_problem();
    const Mechanism psi = make_psi();
    const Matching before = psi.eval(truth);
    for (const std::vector<int>& group :
         {std::vector<int>{0, 2}, std::vector<int>{1}}) {
      const int R = d.orders_per_student();
      long long combos = 1;
      for (size_t u = 0; u < group.size(); ++u) combos *= R;
      for (long long t = 0; t < combos; ++t) {
        long long fj = kTruthfulIndex;
        long long rest = t;
        for (int u = static_cast<int>(group.size()) - 1; u >= 0; --u) {
          fj = d.replace_rank(fj, group[u], static_cast<int>(rest % R));
          rest /= R;
        }
        const Matching after = psi.eval(d.instantiate_full(fj));
        std::vector<int> seats;
        for (int i : group) seats.push_back(after.at(i));
        std::sort(seats.begin(), seats.end());
        do {
          bool weak = true, strict = false;
          for (size_t u = 0; u < group.size(); ++u) {
            if (!truth.weakly_prefers(group[u], seats[u], before.at(group[u]))) weak = false;
            if (truth.prefers(group[u], seats[u], before.at(group[u]))) strict = true;
          }
          REQUIRE_FALSE((weak && strict));
        } while (std::next_permutation(seats.begin(), seats.end()));
      }
    }
  }
}

TEST_CASE("robust efficiency audits") {
  ProfileDomain d = ex4_domain();
  SUBCASE("mbg variant: ttc passes, sd and da fail") {
    CHECK(mbg_robust_efficiency_audit(make_ttc(), d).pass);
    auto sd = mbg_robust_efficiency_audit(make_sd(d.roster(), kF123), d);
    REQUIRE_FALSE(sd.pass);
    CHECK(sd.witness->collusion.has_value());
    CHECK(replay_robust_witness(make_sd(d.roster(), kF123), d, *sd.witness, true));
    auto da = mbg_robust_efficiency_audit(make_da(), d);
    REQUIRE_FALSE(da.pass);
    CHECK(da.witness->collusion.has_value());  // pareto holds on this domain
  }
  SUBCASE("full variant: even ttc falls to the pair trade") {
    auto v = robust_efficiency_audit(make_ttc(), d);
    REQUIRE_FALSE(v.pass);
    CHECK(v.witness->collusion.has_value());
  }
  SUBCASE("psi fails on the efficiency side first") {
    auto v = robust_efficiency_audit(make_psi(), d);
    REQUIRE_FALSE(v.pass);
    REQUIRE(v.witness->efficiency.has_value());
    CHECK(v.witness->efficiency->profile == 0);
    CHECK(replay_robust_witness(make_psi(), d, *v.witness, false));
  }
  SUBCASE("tilde mechanism on its two-student domain") {
    Problem roster = fixtures::tilde_2x1_problem();
    ProfileDomain ds(roster);
    Mechanism tilde = make_tilde(roster, AgentOrdering{{0, 1}});
    CHECK(mbg_robust_efficiency_audit(tilde, ds).pass);
    // yet it is not mbg-quota-rational at the identical profile
    Problem identical = ds.instantiate_full(0);
    CHECK_FALSE(is_mbg_quota_rational(identical, tilde.eval(identical)).pass);
  }
  SUBCASE("tilde collapses when the dictatorship fights the priorities") {
    // priorities a:(2,1), b:(1,2) against f=(1,2): at the identical
    // profile (a,b,n) the dictator grabs a; student 2, the singleton group
    // owning a's top slot, fakes (a,n,b) to trigger ttc and win a
    Problem roster = testing::build_problem(
        {"1", "2"}, {"a", "b"}, {1, 1}, {{0, 1, 2}, {0, 1, 2}},
        {{1, 0}, {0, 1}, {0, 1}});
    ProfileDomain ds(roster);
    Mechanism tilde = make_tilde(roster, AgentOrdering{{0, 1}});
    auto v = mbg_collusion_proof_audit(tilde, ds);
    REQUIRE_FALSE(v.pass);
    CHECK(replay_collusion_witness(tilde, ds, *v.witness, true));
    CollusionWitness pinned{0, {1}, {1}, {0}};
    CHECK(replay_collusion_witness(tilde, ds, pinned, true));
  }
  SUBCASE("tilde inherits ttc wholesale when priorities align with f") {
    ProfileDomain ds(fixtures::aligned_2x2_problem());
    Mechanism tilde = make_tilde(ds.roster(), AgentOrdering{{0, 1}});
    CHECK(mbg_robust_efficiency_audit(tilde, ds).pass);
  }
}

TEST_CASE("axiom monotonicity across the audited pairs") {
  ProfileDomain d = ex4_domain();
  std::vector<Mechanism> mechanisms = {make_ttc(), make_da(), make_sd(d.roster(), kF123),
                                       make_psi(), make_hat()};
  for (const Mechanism& m : mechanisms) {
    bool full = collusion_proof_audit(m, d).pass;
    bool mbg = mbg_collusion_proof_audit(m, d).pass;
    if (full) CHECK(mbg);  // the mbg groups are a subset of all groups
    bool group_sp = group_strategy_proof_audit(m, d).pass;
    bool sp = strategy_proof_audit(m, d).pass;
    if (group_sp) CHECK(sp);  // singletons are groups
  }
}

TEST_CASE("uniqueness probe") {
  SUBCASE("no one-profile deviation survives on the table domain") {
    ProfileDomain d = ex4_domain();
    auto v = uniqueness_probe(d);
    CHECK(v.pass);
    CHECK(v.profiles_checked == 216);
    CHECK(v.deviants_tested > 0);
    CHECK_FALSE(v.survivor.has_value());
  }
  SUBCASE("the stable matching deviation is rejected by the table logic") {
    ProfileDomain d = ex4_domain();
    Problem truth = fixtures::example4_problem();
    Matching stable = make_matching(truth, {1, 0, 1});  // (b, a, b)
    REQUIRE(is_pareto_efficient(truth, stable).pass);
    REQUIRE(is_mbg_quota_rational(truth, stable).pass);
    auto w = deviant_rejection_witness(d, kTruthfulIndex, stable);
    REQUIRE(w.has_value());
    // replay against the patched mechanism built from scratch
    const auto truthful_prefs = fixtures::example4_profile_truthful();
    Mechanism deviant{"deviant", [stable, truthful_prefs](const Problem& p) {
                        if (p.prefs == truthful_prefs) return stable;
                        return ttc_stepwise(p);
                      }};
    CHECK(replay_collusion_witness(deviant, d, *w, true));
  }
  SUBCASE("unit 2x2 domains have no survivors either") {
    for (const Problem& roster : fixtures::unit_2x2_problems()) {
      ProfileDomain d(roster);
      CHECK(uniqueness_probe(d).pass);
    }
  }
}

TEST_CASE("audits are deterministic across worker counts") {
  ProfileDomain d = ex4_domain();
  AuditOptions serial;
  AuditOptions parallel;
  parallel.workers = 4;
  for (const std::string& axiom : audit_axiom_names()) {
    AuditReport a = run_audit(make_da(), d, axiom, serial);
    AuditReport b = run_audit(make_da(), d, axiom, parallel);
    CHECK(a.pass == b.pass);
    CHECK(a.witness == b.witness);
    CHECK(a.cases == b.cases);
    CHECK(dump_canonical(report_json(d, a)) == dump_canonical(report_json(d, b)));
  }
  // repeated runs are byte-identical
  AuditReport a1 = run_audit(make_psi(), d, "reallocation-proofness", parallel);
  AuditReport a2 = run_audit(make_psi(), d, "reallocation-proofness", parallel);
  CHECK(dump_canonical(report_json(d, a1)) == dump_canonical(report_json(d, a2)));
}

TEST_CASE("group size guard narrows the search") {
  ProfileDomain d = ex4_domain();
  AuditOptions only_singletons;
  only_singletons.max_group_size = 1;
  // sd's collusion failures need two students trading
  CHECK(collusion_proof_audit(make_sd(d.roster(), kF123), d, only_singletons).pass);
  CHECK_FALSE(collusion_proof_audit(make_psi(), d, only_singletons).pass);
}

TEST_CASE("run_audit dispatch and report shape") {
  ProfileDomain d = ex4_domain();
  AuditReport report = run_audit(make_da(), d, "mbg-collusion-proofness");
  CHECK_FALSE(report.pass);
  Json j = report_json(d, report);
  CHECK(j["mechanism"] == "da");
  CHECK(j["axiom"] == "mbg-collusion-proofness");
  CHECK(j["domain"]["profiles"] == 216);
  CHECK(j["witness"]["kind"] == "collusion");
  CHECK(j["elapsed_ms"] == 0);
  Json timed = report_json(d, report, true);
  CHECK(timed["elapsed_ms"].get<long long>() >= 0);
  CHECK_THROWS_AS(run_audit(make_da(), d, "fairness"), Error);
}

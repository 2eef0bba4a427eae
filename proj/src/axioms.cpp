#include "ttcm/axioms.hpp"

#include <algorithm>

#include "ttcm/mbg.hpp"

namespace ttcm {

namespace {

bool dominates(const Problem& problem, const Matching& nu, const Matching& mu) {
  bool strict = false;
  for (int i = 0; i < problem.num_students(); ++i) {
    if (!problem.weakly_prefers(i, nu.at(i), mu.at(i))) return false;
    if (problem.prefers(i, nu.at(i), mu.at(i))) strict = true;
  }
  return strict;
}

std::vector<int> school_count(const Problem& problem, const Matching& m) {
  std::vector<int> count(problem.num_schools() + 1, 0);
  for (int a : m.assignment) ++count[a];
  return count;
}

}  // namespace

Verdict<ParetoWitness> is_pareto_efficient(const Problem& problem, const Matching& m,
                                           int enum_guard) {
  Verdict<ParetoWitness> verdict;
  for_each_matching(
      problem,
      [&](const Matching& nu) {
        ++verdict.cases;
        if (verdict.pass && dominates(problem, nu, m)) {
          verdict.pass = false;
          verdict.witness = ParetoWitness{nu};
        }
      },
      enum_guard);
  return verdict;
}

StabilityVerdict is_stable(const Problem& problem, const Matching& m) {
  StabilityVerdict verdict;
  const std::vector<int> filled = school_count(problem, m);
  auto note = [&verdict](const StabilityWitness& w) {
    if (!verdict.witness) verdict.witness = w;
    verdict.pass = false;
  };
  for (int i = 0; i < problem.num_students(); ++i) {
    for (int a = 0; a <= problem.num_schools(); ++a) {
      ++verdict.cases;
      if (!problem.prefers(i, a, m.at(i))) continue;
      // non-wastefulness: a preferred school must be full (the null school
      // never is)
      if (problem.is_null(a) || filled[a] < problem.capacities[a]) {
        note({i, a, std::nullopt});
        verdict.non_wasteful = false;
      }
      // fairness: nobody held by a preferred real school may rank below i
      if (!problem.is_null(a)) {
        for (int j = 0; j < problem.num_students(); ++j) {
          if (m.at(j) == a && problem.outranks(a, i, j)) {
            note({i, a, j});
            verdict.fair = false;
            break;
          }
        }
      }
    }
  }
  return verdict;
}

Verdict<QuotaPriorityWitness> respects_quota_priorities(const Problem& problem,
                                                        const Matching& m) {
  Verdict<QuotaPriorityWitness> verdict;
  for (int i = 0; i < problem.num_students(); ++i) {
    for (int a = 0; a <= problem.num_schools(); ++a) {
      ++verdict.cases;
      bool within = problem.is_null(a) || problem.prio_rank[a][i] < problem.capacities[a];
      if (within && problem.prefers(i, a, m.at(i))) {
        if (verdict.pass) verdict.witness = QuotaPriorityWitness{i, a};
        verdict.pass = false;
      }
    }
  }
  return verdict;
}

QuotaRationalityVerdict is_quota_rational(const Problem& problem, const Matching& m,
                                          int subset_guard) {
  QuotaRationalityVerdict verdict;
  const int n = problem.num_students();
  if (n > subset_guard) {
    // quota-rationality and stability coincide; the stability check scales
    StabilityVerdict st = is_stable(problem, m);
    verdict.pass = st.pass;
    verdict.cases = st.cases;
    verdict.via_stability_proxy = true;
    verdict.proxy_witness = st.witness;
    return verdict;
  }
  const unsigned full = n >= 1 ? (1u << n) - 1 : 0u;
  for (unsigned mask = 0; mask < ((n == 0) ? 1u : (1u << n)); ++mask) {
    if (n >= 1 && mask == full) continue;  // proper subsets only
    ++verdict.cases;
    if (!verdict.pass) continue;
    std::vector<int> removed;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) removed.push_back(i);
    ReducedProblem red = reduce_by_removal(problem, m, removed);
    Matching reduced_m = red.project_matching(problem, m);
    auto inner = respects_quota_priorities(red.problem, reduced_m);
    if (!inner.pass) {
      int student = red.student_parent[inner.witness->student];
      int school = red.problem.is_null(inner.witness->school)
                       ? problem.null_school()
                       : red.school_parent[inner.witness->school];
      verdict.pass = false;
      verdict.witness = RemovalWitness{std::move(removed), student, school};
    }
  }
  return verdict;
}

Verdict<MbgRemovalWitness> is_mbg_quota_rational(const Problem& problem, const Matching& m,
                                                 MbgSubsets reading) {
  Verdict<MbgRemovalWitness> verdict;
  MbgSequence seq = mbg_sequence(problem);
  const int groups = seq.group_count();
  if (groups > 30) throw Error("is_mbg_quota_rational: too many groups");

  std::vector<unsigned> masks;
  if (reading == MbgSubsets::all) {
    for (unsigned mask = 0; mask < (1u << groups); ++mask) masks.push_back(mask);
  } else {
    unsigned mask = 0;
    masks.push_back(mask);
    for (int k = 0; k < groups; ++k) masks.push_back(mask |= (1u << k));
  }

  for (unsigned mask : masks) {
    ++verdict.cases;
    if (!verdict.pass) continue;
    std::vector<int> removed = seq.union_of_groups(mask);
    ReducedProblem red = reduce_by_removal(problem, m, removed);
    Matching reduced_m = red.project_matching(problem, m);
    auto inner = respects_quota_priorities(red.problem, reduced_m);
    if (!inner.pass) {
      std::vector<int> levels;
      for (int k = 0; k < groups; ++k)
        if (mask & (1u << k)) levels.push_back(k);
      int student = red.student_parent[inner.witness->student];
      int school = red.problem.is_null(inner.witness->school)
                       ? problem.null_school()
                       : red.school_parent[inner.witness->school];
      verdict.pass = false;
      verdict.witness = MbgRemovalWitness{std::move(levels), std::move(removed), student, school};
    }
  }
  return verdict;
}

MbgRespectVerdict respects_mbgs(const Problem& problem, const Matching& m) {
  MbgRespectVerdict verdict;
  MbgSequence seq = mbg_sequence(problem);
  for (int k = 0; k < seq.group_count(); ++k) {
    ++verdict.cases;
    const MbgLevel& level = seq.levels[k];
    std::vector<int> expected, assigned;
    for (const auto& [student, school] : level.favorites) {
      expected.push_back(school);
      if (m.at(student) != school) verdict.per_student_pass = false;
    }
    for (int i : level.group) assigned.push_back(m.at(i));
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    std::sort(assigned.begin(), assigned.end());
    assigned.erase(std::unique(assigned.begin(), assigned.end()), assigned.end());
    if (assigned != expected && verdict.pass) {
      verdict.pass = false;
      verdict.witness = MbgRespectWitness{k, assigned, expected};
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Replay

bool replay_pareto_witness(const Problem& problem, const Matching& m, const ParetoWitness& w) {
  return capacity_feasible(problem, w.dominating.assignment) && dominates(problem, w.dominating, m);
}

bool replay_stability_witness(const Problem& problem, const Matching& m,
                              const StabilityWitness& w) {
  if (w.student < 0 || w.student >= problem.num_students()) return false;
  if (w.school < 0 || w.school > problem.num_schools()) return false;
  if (!problem.prefers(w.student, w.school, m.at(w.student))) return false;
  if (!w.occupant) {
    if (problem.is_null(w.school)) return true;  // the null school is never full
    int filled = 0;
    for (int a : m.assignment)
      if (a == w.school) ++filled;
    return filled < problem.capacities[w.school];
  }
  return m.at(*w.occupant) == w.school && problem.outranks(w.school, w.student, *w.occupant);
}

bool replay_quota_priority_witness(const Problem& problem, const Matching& m,
                                   const QuotaPriorityWitness& w) {
  if (w.student < 0 || w.student >= problem.num_students()) return false;
  if (w.school < 0 || w.school > problem.num_schools()) return false;
  int above = 0;
  for (int j = 0; j < problem.num_students(); ++j)
    if (j != w.student && problem.outranks(w.school, j, w.student)) ++above;
  bool within = problem.is_null(w.school) || above < problem.capacities[w.school];
  return within && problem.prefers(w.student, w.school, m.at(w.student));
}

bool replay_removal_witness(const Problem& problem, const Matching& m, const RemovalWitness& w) {
  ReducedProblem red = reduce_by_removal(problem, m, w.removed);
  Matching reduced_m = red.project_matching(problem, m);
  // translate the parent-level witness into the reduced problem
  int student = -1;
  for (int r = 0; r < static_cast<int>(red.student_parent.size()); ++r)
    if (red.student_parent[r] == w.student) student = r;
  if (student < 0) return false;
  int school = -1;
  if (w.school == problem.null_school()) {
    school = red.problem.null_school();
  } else {
    for (int r = 0; r < static_cast<int>(red.school_parent.size()); ++r)
      if (red.school_parent[r] == w.school) school = r;
  }
  if (school < 0) return false;
  return replay_quota_priority_witness(red.problem, reduced_m, {student, school});
}

bool replay_mbg_removal_witness(const Problem& problem, const Matching& m,
                                const MbgRemovalWitness& w) {
  MbgSequence seq = mbg_sequence(problem);
  unsigned mask = 0;
  for (int k : w.group_levels) {
    if (k < 0 || k >= seq.group_count()) return false;
    mask |= (1u << k);
  }
  if (seq.union_of_groups(mask) != w.removed) return false;
  return replay_removal_witness(problem, m, {w.removed, w.student, w.school});
}

bool replay_mbg_respect_witness(const Problem& problem, const Matching& m,
                                const MbgRespectWitness& w) {
  MbgSequence seq = mbg_sequence(problem);
  if (w.level < 0 || w.level >= seq.group_count()) return false;
  const MbgLevel& level = seq.levels[w.level];
  std::vector<int> expected, assigned;
  for (const auto& fav : level.favorites) expected.push_back(fav.second);
  for (int i : level.group) assigned.push_back(m.at(i));
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  std::sort(assigned.begin(), assigned.end());
  assigned.erase(std::unique(assigned.begin(), assigned.end()), assigned.end());
  return assigned != expected && assigned == w.assigned && expected == w.expected;
}

// ---------------------------------------------------------------------------
// JSON rendering

namespace {

Json school_list_json(const Problem& problem, const std::vector<int>& schools) {
  Json arr = Json::array();
  for (int a : schools) arr.push_back(problem.school_name(a));
  return arr;
}

Json student_list_json(const Problem& problem, const std::vector<int>& students) {
  Json arr = Json::array();
  for (int i : students) arr.push_back(problem.student_name(i));
  return arr;
}

}  // namespace

Json witness_json(const Problem& problem, const ParetoWitness& w) {
  return Json{{"kind", "dominating-matching"},
              {"dominating", matching_to_json(problem, w.dominating)["assignment"]}};
}

Json witness_json(const Problem& problem, const StabilityWitness& w) {
  Json j = Json::object();
  j["kind"] = w.occupant ? "justified-envy" : "wasteful";
  j["student"] = problem.student_name(w.student);
  j["school"] = problem.school_name(w.school);
  if (w.occupant) j["occupant"] = problem.student_name(*w.occupant);
  return j;
}

Json witness_json(const Problem& problem, const QuotaPriorityWitness& w) {
  return Json{{"kind", "quota-priority"},
              {"student", problem.student_name(w.student)},
              {"school", problem.school_name(w.school)}};
}

Json witness_json(const Problem& problem, const RemovalWitness& w) {
  return Json{{"kind", "quota-rationality"},
              {"removed", student_list_json(problem, w.removed)},
              {"student", problem.student_name(w.student)},
              {"school", problem.school_name(w.school)}};
}

Json witness_json(const Problem& problem, const MbgRemovalWitness& w) {
  return Json{{"kind", "mbg-quota-rationality"},
              {"removed_groups", w.group_levels},
              {"removed", student_list_json(problem, w.removed)},
              {"student", problem.student_name(w.student)},
              {"school", problem.school_name(w.school)}};
}

Json witness_json(const Problem& problem, const MbgRespectWitness& w) {
  return Json{{"kind", "mbg-respect"},
              {"level", w.level},
              {"assigned", school_list_json(problem, w.assigned)},
              {"expected", school_list_json(problem, w.expected)}};
}

}  // namespace ttcm

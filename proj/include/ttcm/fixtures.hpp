#pragma once

#include <vector>

#include "ttcm/model.hpp"

namespace ttcm::fixtures {

/// Five students, three schools (a:2, b:2, c:1), truncated input lists
/// completed in roster order. The canonical showcase for the
/// mutual-best-group partition: MBG = ({1,3,4}, {2,5}).
Problem example1_problem();

/// Three students, schools a:1 and b:2, priorities a:(1,2,3), b:(3,1,2),
/// preferences 1:(b,a,null), 2:(a,b,null), 3:(a,b,null). The roster shared
/// by the psi fixture, the collusion table and most audit domains.
Problem example4_problem();

/// Same roster with the given full preference orders (school indices:
/// 0 = a, 1 = b, 2 = null).
Problem example4_with(const std::vector<std::vector<int>>& prefs);

// Named profiles on the example4 roster.
std::vector<std::vector<int>> example4_profile_truthful();  // P
std::vector<std::vector<int>> example4_profile_swapped();   // (P1', P2, P3')
std::vector<std::vector<int>> example3_profile_designated();  // (P1', P2', P3)

/// Two students, one school a:1 with priority (2,1); both students rank the
/// school first. Serial dictatorship under f=(1,2) denies student 2 the
/// seat it holds top priority for: the canonical quota-rationality failure
/// for the tilde mechanism.
Problem tilde_2x1_problem();

/// Three students, two unit-capacity schools with priorities a:(1,2,3),
/// b:(3,1,2): contains the generalized priority cycle (a,b,1,2,3).
Problem ergin_cyclic_problem();

/// Two students, two unit-capacity schools; all eight priority structures
/// (a, b and null each ordered (1,2) or (2,1)). Preferences default to
/// (a,b,null) for both students.
std::vector<Problem> unit_2x2_problems();

/// The 2x2 roster whose priorities all agree with the ordering (1,2).
Problem aligned_2x2_problem();

}  // namespace ttcm::fixtures

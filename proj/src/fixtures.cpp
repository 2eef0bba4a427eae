#include "ttcm/fixtures.hpp"

namespace ttcm::fixtures {

namespace {

Problem build(std::vector<std::string> students, std::vector<std::string> schools,
              std::vector<int> capacities, std::vector<std::vector<int>> prefs,
              std::vector<std::vector<int>> priorities) {
  Problem p;
  p.students = std::move(students);
  p.schools = std::move(schools);
  p.capacities = std::move(capacities);
  p.prefs = std::move(prefs);
  p.priorities = std::move(priorities);
  p.finalize();
  return p;
}

}  // namespace

Problem example1_problem() {
  // schools: a=0, b=1, c=2, null=3; truncated lists completed in roster order
  return build({"1", "2", "3", "4", "5"}, {"a", "b", "c"}, {2, 2, 1},
               {
                   {1, 2, 0, 3},  // 1: b c a null
                   {0, 3, 1, 2},  // 2: a null | b c
                   {0, 1, 3, 2},  // 3: a b null | c
                   {2, 0, 3, 1},  // 4: c a null | b
                   {1, 0, 2, 3},  // 5: b a c null
               },
               {
                   {0, 3, 4, 2, 1},  // a: 1 4 5 3 | 2
                   {2, 1, 0, 4, 3},  // b: 3 2 1 5 | 4
                   {3, 4, 2, 1, 0},  // c: 4 5 3 2 | 1
                   {0, 1, 2, 3, 4},  // null: roster order
               });
}

Problem example4_problem() { return example4_with(example4_profile_truthful()); }

Problem example4_with(const std::vector<std::vector<int>>& prefs) {
  return build({"1", "2", "3"}, {"a", "b"}, {1, 2}, prefs,
               {
                   {0, 1, 2},  // a: 1 2 3
                   {2, 0, 1},  // b: 3 1 2
                   {0, 1, 2},  // null: roster order
               });
}

std::vector<std::vector<int>> example4_profile_truthful() {
  return {{1, 0, 2}, {0, 1, 2}, {0, 1, 2}};  // 1:(b,a,n) 2:(a,b,n) 3:(a,b,n)
}

std::vector<std::vector<int>> example4_profile_swapped() {
  return {{0, 1, 2}, {0, 1, 2}, {1, 0, 2}};  // 1:(a,b,n) 2:(a,b,n) 3:(b,a,n)
}

std::vector<std::vector<int>> example3_profile_designated() {
  return {{0, 1, 2}, {1, 0, 2}, {0, 1, 2}};  // 1:(a,b,n) 2:(b,a,n) 3:(a,b,n)
}

Problem tilde_2x1_problem() {
  return build({"1", "2"}, {"a"}, {1},
               {
                   {0, 1},  // 1: a null
                   {0, 1},  // 2: a null
               },
               {
                   {1, 0},  // a: 2 1
                   {0, 1},  // null: roster order
               });
}

Problem ergin_cyclic_problem() {
  return build({"1", "2", "3"}, {"a", "b"}, {1, 1},
               {{1, 0, 2}, {0, 1, 2}, {0, 1, 2}},
               {
                   {0, 1, 2},  // a: 1 2 3
                   {2, 0, 1},  // b: 3 1 2
                   {0, 1, 2},
               });
}

std::vector<Problem> unit_2x2_problems() {
  std::vector<Problem> out;
  const std::vector<std::vector<int>> orders = {{0, 1}, {1, 0}};
  for (const auto& pa : orders)
    for (const auto& pb : orders)
      for (const auto& pn : orders)
        out.push_back(build({"1", "2"}, {"a", "b"}, {1, 1}, {{0, 1, 2}, {0, 1, 2}},
                            {pa, pb, pn}));
  return out;
}

Problem aligned_2x2_problem() {
  return build({"1", "2"}, {"a", "b"}, {1, 1}, {{0, 1, 2}, {0, 1, 2}},
               {{0, 1}, {0, 1}, {0, 1}});
}

}  // namespace ttcm::fixtures

// Command-line front end: run mechanisms, compute mutual-best-group
// partitions, check axioms on matchings, audit mechanisms over profile
// domains, reproduce the built-in worked examples, and probe the
// characterization. Exit codes: 0 pass/success, 1 axiom failure with
// witness, 2 usage or input error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ttcm/audits.hpp"
#include "ttcm/axioms.hpp"
#include "ttcm/fixtures.hpp"
#include "ttcm/json_io.hpp"
#include "ttcm/mbg.hpp"
#include "ttcm/mechanisms.hpp"

using namespace ttcm;

namespace {

struct DomainArgs {
  std::string inline_domain;
  std::string domain_file;
  std::string restriction;
  long long guard = 10'000'000;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Problem roster_from_inline(const std::string& desc) {
  int students = -1, schools = -1;
  std::vector<int> caps;
  std::string priorities_file;
  for (const std::string& item : split(desc, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("domain: expected key=value, got \"" + item + "\"");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "students") {
      students = std::stoi(value);
    } else if (key == "schools") {
      schools = std::stoi(value);
    } else if (key == "caps") {
      for (const std::string& c : split(value, ':')) caps.push_back(std::stoi(c));
    } else if (key == "priorities") {
      priorities_file = value;
    } else {
      throw Error("domain: unknown key \"" + key + "\"");
    }
  }
  if (students < 0 || schools < 0) throw Error("domain: students= and schools= are required");
  if (caps.empty()) caps.assign(schools, 1);
  if (static_cast<int>(caps.size()) != schools)
    throw Error("domain: caps must list one capacity per school");

  Problem p;
  for (int i = 0; i < students; ++i) p.students.push_back(std::to_string(i + 1));
  for (int a = 0; a < schools; ++a) p.schools.push_back(std::string(1, 'a' + a));
  p.capacities = caps;
  for (int i = 0; i < students; ++i) {
    std::vector<int> order;
    for (int a = 0; a <= schools; ++a) order.push_back(a);
    p.prefs.push_back(order);
  }
  for (int a = 0; a <= schools; ++a) {
    std::vector<int> order;
    for (int i = 0; i < students; ++i) order.push_back(i);
    p.priorities.push_back(order);
  }
  if (!priorities_file.empty()) {
    Problem base = load_problem_file(priorities_file);
    if (base.students != p.students || base.schools != p.schools)
      throw Error("domain: priorities file roster does not match the inline roster");
    p.priorities = base.priorities;
    p.capacities = base.capacities;
  }
  p.finalize();
  return p;
}

ProfileDomain build_domain(const DomainArgs& args) {
  Problem roster;
  if (!args.domain_file.empty())
    roster = load_problem_file(args.domain_file);
  else if (!args.inline_domain.empty())
    roster = roster_from_inline(args.inline_domain);
  else
    throw Error("no domain given (use --domain or --domain-file)");
  DomainRestriction restriction = DomainRestriction::full;
  if (args.restriction == "identical")
    restriction = DomainRestriction::identical_preferences;
  else if (!args.restriction.empty())
    throw Error("unknown restriction \"" + args.restriction + "\"");
  return ProfileDomain(std::move(roster), restriction, args.guard);
}

// ---------------------------------------------------------------------------
// check

int run_check(const std::string& problem_path, const std::string& matching_path,
              std::vector<std::string> axioms, const std::string& mbg_subsets,
              const std::string& format) {
  Problem problem = load_problem_file(problem_path);
  Matching matching = load_matching_file(problem, matching_path);
  if (axioms.empty())
    axioms = {"pareto",           "stability",
              "quota-priorities", "quota-rationality",
              "mbg-quota-rationality", "respects-mbgs"};
  MbgSubsets reading = mbg_subsets == "prefix" ? MbgSubsets::prefix : MbgSubsets::all;

  bool all_pass = true;
  Json out = Json::array();
  for (const std::string& axiom : axioms) {
    Json verdict;
    if (axiom == "pareto") {
      verdict = verdict_json(problem, axiom, is_pareto_efficient(problem, matching));
    } else if (axiom == "stability") {
      verdict = verdict_json(problem, axiom, is_stable(problem, matching));
    } else if (axiom == "quota-priorities") {
      verdict = verdict_json(problem, axiom, respects_quota_priorities(problem, matching));
    } else if (axiom == "quota-rationality") {
      verdict = verdict_json(problem, axiom, is_quota_rational(problem, matching));
    } else if (axiom == "mbg-quota-rationality") {
      verdict = verdict_json(problem, axiom, is_mbg_quota_rational(problem, matching, reading));
    } else if (axiom == "respects-mbgs") {
      verdict = verdict_json(problem, axiom, respects_mbgs(problem, matching));
    } else {
      throw Error("unknown matching axiom \"" + axiom + "\"");
    }
    all_pass = all_pass && verdict["pass"].get<bool>();
    out.push_back(std::move(verdict));
  }
  if (format == "json") {
    std::cout << dump_canonical(out);
  } else {
    for (const Json& v : out) {
      std::cout << v["axiom"].get<std::string>() << ": "
                << (v["pass"].get<bool>() ? "pass" : "FAIL");
      if (!v["witness"].is_null()) std::cout << "  witness " << v["witness"].dump();
      std::cout << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// partition

int run_partition(const std::string& problem_path, const std::string& format) {
  Problem problem = load_problem_file(problem_path);
  MbgSequence seq = mbg_sequence(problem);
  if (format == "json") {
    Json levels = Json::array();
    for (const MbgLevel& level : seq.levels) {
      Json group = Json::array();
      for (int i : level.group) group.push_back(problem.student_name(i));
      Json schools = Json::array();
      for (int a = 0; a < level.subproblem.num_schools(); ++a)
        schools.push_back({{"id", level.subproblem.schools[a]},
                           {"capacity", level.subproblem.capacities[a]}});
      Json favorites = Json::object();
      for (const auto& [student, school] : level.favorites)
        favorites[problem.student_name(student)] = problem.school_name(school);
      levels.push_back({{"students", level.subproblem.students},
                        {"schools", std::move(schools)},
                        {"group", std::move(group)},
                        {"favorites", std::move(favorites)}});
    }
    std::cout << dump_canonical(Json{{"levels", std::move(levels)}});
    return 0;
  }
  std::ostringstream groups;
  groups << "(";
  for (int k = 0; k < seq.group_count(); ++k) {
    if (k) groups << ", ";
    groups << "{";
    for (size_t t = 0; t < seq.levels[k].group.size(); ++t) {
      if (t) groups << ",";
      groups << problem.student_name(seq.levels[k].group[t]);
    }
    groups << "}";
  }
  groups << ")";
  std::cout << "MBG = " << groups.str() << "\n";
  for (int k = 0; k < seq.group_count(); ++k) {
    const MbgLevel& level = seq.levels[k];
    std::cout << "level " << (k + 1) << ": students {";
    for (size_t t = 0; t < level.subproblem.students.size(); ++t) {
      if (t) std::cout << ",";
      std::cout << level.subproblem.students[t];
    }
    std::cout << "}; schools";
    if (level.subproblem.num_schools() == 0) std::cout << " (none)";
    for (int a = 0; a < level.subproblem.num_schools(); ++a)
      std::cout << " " << level.subproblem.schools[a] << ":"
                << level.subproblem.capacities[a];
    std::cout << "; group takes";
    for (const auto& [student, school] : level.favorites)
      std::cout << " " << problem.student_name(student) << ":"
                << problem.school_name(school);
    std::cout << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// repro

struct CheckLine {
  std::string name;
  bool ok;
  std::string expected;
  std::string actual;
};

class ReproCase {
 public:
  explicit ReproCase(std::string name) : name_(std::move(name)) {}

  void expect(const std::string& what, const std::string& expected, const std::string& actual) {
    lines_.push_back({what, expected == actual, expected, actual});
  }
  void expect_true(const std::string& what, bool ok) {
    lines_.push_back({what, ok, "true", ok ? "true" : "false"});
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool pass() const {
    for (const CheckLine& line : lines_)
      if (!line.ok) return false;
    return true;
  }
  void print_text(std::ostream& out) const {
    out << "case " << name_ << ": " << (pass() ? "pass" : "FAIL") << "\n";
    for (const CheckLine& line : lines_) {
      if (line.ok)
        out << "  ok: " << line.name << " = " << line.actual << "\n";
      else
        out << "  MISMATCH: " << line.name << " expected " << line.expected << " got "
            << line.actual << "\n";
    }
    for (const std::string& n : notes_) out << "  note: " << n << "\n";
  }
  Json to_json() const {
    Json checks = Json::array();
    for (const CheckLine& line : lines_)
      checks.push_back({{"name", line.name},
                        {"pass", line.ok},
                        {"expected", line.expected},
                        {"actual", line.actual}});
    return Json{{"case", name_}, {"pass", pass()}, {"checks", std::move(checks)},
                {"notes", notes_}};
  }

 private:
  std::string name_;
  std::vector<CheckLine> lines_;
  std::vector<std::string> notes_;
};

std::string matching_text(const Problem& p, const Matching& m) { return format_matching(p, m); }

Matching swap_first_third(const Problem& p, const Matching& m) {
  std::vector<int> a = m.assignment;
  std::swap(a[0], a[2]);
  return make_matching(p, std::move(a));
}

ReproCase repro_example1() {
  ReproCase c("example1");
  Problem p = fixtures::example1_problem();
  MbgSequence seq = mbg_sequence(p);
  std::ostringstream groups;
  for (int k = 0; k < seq.group_count(); ++k) {
    if (k) groups << " ";
    groups << "{";
    for (size_t t = 0; t < seq.levels[k].group.size(); ++t) {
      if (t) groups << ",";
      groups << p.student_name(seq.levels[k].group[t]);
    }
    groups << "}";
  }
  c.expect("mbg partition", "{1,3,4} {2,5}", groups.str());
  if (seq.group_count() == 2) {
    const Problem& sub = seq.levels[1].subproblem;
    std::ostringstream subtext;
    subtext << "students";
    for (const auto& s : sub.students) subtext << " " << s;
    subtext << "; schools";
    for (int a = 0; a < sub.num_schools(); ++a)
      subtext << " " << sub.schools[a] << ":" << sub.capacities[a];
    c.expect("second subproblem", "students 2 5; schools a:1 b:1", subtext.str());
  }
  c.expect("ttc matching", "(1:b, 2:a, 3:a, 4:c, 5:b)", matching_text(p, ttc_stepwise(p)));
  c.expect_true("compact route agrees", ttc_compact(p) == ttc_stepwise(p));
  return c;
}

ReproCase repro_example3(int workers) {
  ReproCase c("example3");
  AuditOptions opt;
  opt.workers = workers;
  Problem p = fixtures::example4_problem();
  ProfileDomain domain(p);
  MbgSequence seq = mbg_sequence(p);
  std::ostringstream groups;
  for (int k = 0; k < seq.group_count(); ++k) {
    if (k) groups << " ";
    groups << "{";
    for (size_t t = 0; t < seq.levels[k].group.size(); ++t) {
      if (t) groups << ",";
      groups << p.student_name(seq.levels[k].group[t]);
    }
    groups << "}";
  }
  c.expect("mbg partition", "{1,3} {2}", groups.str());

  Problem designated = fixtures::example4_with(fixtures::example3_profile_designated());
  c.expect("psi at the designated profile", "(1:a, 2:b, 3:null)",
           matching_text(designated, psi_fixture(designated)));
  c.expect("psi elsewhere", "(1:null, 2:null, 3:null)", matching_text(p, psi_fixture(p)));

  auto realloc = reallocation_proof_audit(make_psi(), domain, opt);
  c.expect_true("psi fails reallocation-proofness", !realloc.pass);
  if (realloc.witness) {
    c.expect_true("reported reallocation witness replays",
                  replay_reallocation_witness(make_psi(), domain, *realloc.witness));
    ReallocationWitness table{domain.full_index_of_profile(fixtures::example4_profile_truthful()),
                              0, 1, 0, 2};
    c.expect_true("the documented pair-and-fakes witness replays",
                  replay_reallocation_witness(make_psi(), domain, table));
  }

  // At the table profile itself no mutual best group gains by faking and
  // trading: the missing outsider report keeps psi at all-null.
  bool local_ok = true;
  const Matching before = psi_fixture(p);
  for (const auto& level : seq.levels) {
    const auto& group = level.group;
    const int R = domain.orders_per_student();
    long long combos = 1;
    for (size_t u = 0; u < group.size(); ++u) combos *= R;
    for (long long t = 0; t < combos && local_ok; ++t) {
      long long fj = domain.full_index_of_profile(fixtures::example4_profile_truthful());
      long long rest = t;
      for (int u = static_cast<int>(group.size()) - 1; u >= 0; --u) {
        fj = domain.replace_rank(fj, group[u], static_cast<int>(rest % R));
        rest /= R;
      }
      Matching after = psi_fixture(domain.instantiate_full(fj));
      std::vector<int> seats;
      for (int i : group) seats.push_back(after.at(i));
      std::sort(seats.begin(), seats.end());
      do {
        bool weak = true, strict = false;
        for (size_t u = 0; u < group.size(); ++u) {
          if (!p.weakly_prefers(group[u], seats[u], before.at(group[u]))) weak = false;
          if (p.prefers(group[u], seats[u], before.at(group[u]))) strict = true;
        }
        if (weak && strict) local_ok = false;
      } while (std::next_permutation(seats.begin(), seats.end()));
    }
  }
  c.expect_true("no group of the table profile gains by faking and trading", local_ok);

  auto global = mbg_collusion_proof_audit(make_psi(), domain, opt);
  if (!global.pass && global.witness)
    c.note("over the full 216-profile domain the mbg-collusion audit does find a witness: " +
           witness_json(domain, *global.witness).dump());
  return c;
}

ReproCase repro_example4(int workers) {
  ReproCase c("example4");
  AuditOptions opt;
  opt.workers = workers;
  Problem at_P = fixtures::example4_problem();
  Problem at_Pp = fixtures::example4_with(fixtures::example4_profile_swapped());
  ProfileDomain domain(at_P);
  const AgentOrdering f123{{0, 1, 2}};

  const Matching ttc_P = ttc_stepwise(at_P);
  const Matching ttc_Pp = ttc_stepwise(at_Pp);
  const Matching da_P = deferred_acceptance(at_P);
  const Matching da_Pp = deferred_acceptance(at_Pp);
  const Matching sd_P = serial_dictatorship(at_P, f123);
  const Matching sd_Pp = serial_dictatorship(at_Pp, f123);

  c.expect("row 1: ttc at P", "(1:b, 2:b, 3:a)", matching_text(at_P, ttc_P));
  c.expect("row 2: ttc at P'", "(1:a, 2:b, 3:b)", matching_text(at_Pp, ttc_Pp));
  c.expect("row 3: ttc reallocation", "(1:b, 2:b, 3:a)",
           matching_text(at_P, swap_first_third(at_P, ttc_Pp)));
  c.expect("row 4: sosm at P", "(1:b, 2:a, 3:b)", matching_text(at_P, da_P));
  c.expect("row 5: sosm at P'", "(1:a, 2:b, 3:b)", matching_text(at_Pp, da_Pp));
  c.expect("row 6: sosm reallocation", "(1:b, 2:b, 3:a)",
           matching_text(at_P, swap_first_third(at_P, da_Pp)));
  c.expect("row 7: sd at P", "(1:b, 2:a, 3:b)", matching_text(at_P, sd_P));
  c.expect("row 8: sd at P'", "(1:a, 2:b, 3:b)", matching_text(at_Pp, sd_Pp));
  c.expect("row 9: sd reallocation", "(1:b, 2:b, 3:a)",
           matching_text(at_P, swap_first_third(at_P, sd_Pp)));

  auto verdict = [&](const Mechanism& m) {
    return mbg_robust_efficiency_audit(m, domain, opt).pass ? std::string("Yes")
                                                            : std::string("No");
  };
  c.expect("mbg-robust efficiency: ttc", "Yes", verdict(make_ttc()));
  c.expect("mbg-robust efficiency: sosm", "No", verdict(make_da()));
  c.expect("mbg-robust efficiency: sd", "No", verdict(make_sd(at_P, f123)));
  return c;
}

ReproCase repro_independence(int workers) {
  ReproCase c("independence");
  AuditOptions opt;
  opt.workers = workers;

  // stable side: deferred acceptance is mbg-quota-rational profile by
  // profile but fails the mbg-robust efficiency audit
  ProfileDomain ex4(fixtures::example4_problem());
  bool da_qr = true;
  for (long long k = 0; k < ex4.size(); ++k) {
    Problem p = ex4.instantiate(k);
    if (!is_mbg_quota_rational(p, deferred_acceptance(p)).pass) da_qr = false;
  }
  c.expect_true("sosm is mbg-quota-rational on every profile", da_qr);
  c.expect_true("sosm fails mbg-robust efficiency",
                !mbg_robust_efficiency_audit(make_da(), ex4, opt).pass);

  // efficient side: the dictatorship-or-ttc composite passes the audit but
  // drops mbg-quota-rationality at the identical profile
  Problem roster = fixtures::tilde_2x1_problem();
  ProfileDomain small(roster);
  Mechanism tilde = make_tilde(roster, AgentOrdering{{0, 1}});
  c.expect_true("tilde passes mbg-robust efficiency on the two-student domain",
                mbg_robust_efficiency_audit(tilde, small, opt).pass);
  Problem identical = small.instantiate_full(0);  // both report (a, null)
  auto qr = is_mbg_quota_rational(identical, tilde.eval(identical));
  c.expect_true("tilde fails mbg-quota-rationality at the identical profile", !qr.pass);
  if (qr.witness) {
    c.expect("witness: student", "2", identical.student_name(qr.witness->student));
    c.expect("witness: school", "a", identical.school_name(qr.witness->school));
    c.expect("witness: removed groups", "0",
             std::to_string(qr.witness->group_levels.size()));
  }
  return c;
}

ReproCase repro_hat(int workers) {
  ReproCase c("hat");
  AuditOptions opt;
  opt.workers = workers;

  auto run_side = [&](const std::string& label, const Problem& roster) {
    ProfileDomain domain(roster);
    c.expect_true(label + ": strategy-proof",
                  strategy_proof_audit(make_hat(), domain, opt).pass);
    c.expect_true(label + ": group strategy-proof",
                  group_strategy_proof_audit(make_hat(), domain, opt).pass);
    bool efficient = true, rational = true;
    for (long long k = 0; k < domain.size(); ++k) {
      Problem p = domain.instantiate(k);
      Matching m = hat_mechanism(p);
      if (!is_pareto_efficient(p, m).pass) efficient = false;
      if (!is_mbg_quota_rational(p, m).pass) rational = false;
    }
    c.expect_true(label + ": efficient on every profile", efficient);
    c.expect_true(label + ": mbg-quota-rational on every profile", rational);
  };

  Problem acyclic = fixtures::example4_problem();
  c.expect_true("table priorities are ergin-acyclic", ergin_acyclic(acyclic));
  c.expect_true("acyclic branch runs deferred acceptance",
                hat_mechanism(acyclic) == deferred_acceptance(acyclic));
  run_side("acyclic side", acyclic);

  Problem cyclic = fixtures::ergin_cyclic_problem();
  ErginWitness w;
  c.expect_true("unit-capacity priorities contain a cycle", !ergin_acyclic(cyclic, &w));
  c.expect("cycle schools", "a,b", cyclic.school_name(w.school_a) + "," +
                                       cyclic.school_name(w.school_b));
  c.expect("cycle students", "1,2,3",
           cyclic.student_name(w.i) + "," + cyclic.student_name(w.j) + "," +
               cyclic.student_name(w.k));
  c.expect_true("cyclic branch runs top trading cycles",
                hat_mechanism(cyclic) == ttc_stepwise(cyclic));
  run_side("cyclic side", cyclic);
  return c;
}

int run_repro(const std::string& which, const std::string& format, int workers) {
  std::vector<ReproCase> cases;
  if (which == "example1" || which == "all") cases.push_back(repro_example1());
  if (which == "example3" || which == "all") cases.push_back(repro_example3(workers));
  if (which == "example4" || which == "all") cases.push_back(repro_example4(workers));
  if (which == "independence" || which == "all") cases.push_back(repro_independence(workers));
  if (which == "hat" || which == "all") cases.push_back(repro_hat(workers));
  if (cases.empty())
    throw Error("unknown repro case \"" + which +
                "\" (example1, example3, example4, independence, hat, all)");
  bool all_pass = true;
  if (format == "json") {
    Json out = Json::array();
    for (const ReproCase& c : cases) {
      out.push_back(c.to_json());
      all_pass = all_pass && c.pass();
    }
    std::cout << dump_canonical(out);
  } else {
    for (const ReproCase& c : cases) {
      c.print_text(std::cout);
      all_pass = all_pass && c.pass();
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"school-choice mechanism laboratory"};
  app.require_subcommand(1);

  std::string input_path, matching_path, mechanism_name = "ttc";
  std::string format = "text", mbg_subsets = "all", repro_case = "all";
  std::vector<std::string> axioms;
  DomainArgs domain_args;
  int workers = 1, max_group_size = 0;
  bool timings = false;

  CLI::App* solve = app.add_subcommand("solve", "run a mechanism on a problem file");
  solve->add_option("-i,--input", input_path, "problem JSON")->required();
  solve->add_option("--mechanism", mechanism_name, "ttc, ttc-compact, da, sd:<ids>, psi, tilde:<ids>, hat");
  solve->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* partition = app.add_subcommand("partition", "mutual best groups and subproblem chain");
  partition->add_option("-i,--input", input_path, "problem JSON")->required();
  partition->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* check = app.add_subcommand("check", "check matching axioms");
  check->add_option("-i,--input", input_path, "problem JSON")->required();
  check->add_option("-m,--matching", matching_path, "matching JSON")->required();
  check->add_option("--axiom", axioms,
                    "pareto, stability, quota-priorities, quota-rationality, "
                    "mbg-quota-rationality, respects-mbgs (repeatable; default all)");
  check->add_option("--mbg-subsets", mbg_subsets)->check(CLI::IsMember({"all", "prefix"}));
  check->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* audit = app.add_subcommand("audit", "audit a mechanism over a profile domain");
  audit->add_option("--mechanism", mechanism_name)->required();
  audit->add_option("--axiom", axioms, "audit axioms (repeatable; default all)");
  audit->add_option("--domain", domain_args.inline_domain,
                    "students=N,schools=M,caps=c1:c2,...[,priorities=FILE]");
  audit->add_option("--domain-file", domain_args.domain_file, "problem JSON supplying the roster");
  audit->add_option("--restrict", domain_args.restriction, "identical");
  audit->add_option("--profile-guard", domain_args.guard);
  audit->add_option("--workers", workers);
  audit->add_option("--max-group-size", max_group_size);
  audit->add_flag("--timings", timings, "emit measured elapsed_ms");
  audit->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* repro = app.add_subcommand("repro", "reproduce the built-in worked examples");
  repro->add_option("--case", repro_case, "example1, example3, example4, independence, hat, all");
  repro->add_option("--workers", workers);
  repro->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* probe = app.add_subcommand("probe-uniqueness",
                                       "reject one-profile deviations from top trading cycles");
  probe->add_option("--domain", domain_args.inline_domain);
  probe->add_option("--domain-file", domain_args.domain_file);
  probe->add_option("--restrict", domain_args.restriction);
  probe->add_option("--profile-guard", domain_args.guard);
  probe->add_option("--workers", workers);
  probe->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      Problem problem = load_problem_file(input_path);
      Mechanism mech = mechanism_by_name(mechanism_name, problem);
      Matching m = mech.eval(problem);
      if (format == "json") {
        Json out = matching_to_json(problem, m);
        out["mechanism"] = mech.name;
        std::cout << dump_canonical(out);
      } else {
        std::cout << mech.name << ": " << format_matching(problem, m) << "\n";
      }
      return 0;
    }
    if (partition->parsed()) return run_partition(input_path, format);
    if (check->parsed())
      return run_check(input_path, matching_path, axioms, mbg_subsets, format);
    if (audit->parsed()) {
      ProfileDomain domain = build_domain(domain_args);
      Mechanism mech = mechanism_by_name(mechanism_name, domain.roster());
      AuditOptions opt;
      opt.workers = workers;
      opt.max_group_size = max_group_size;
      if (axioms.empty()) axioms = audit_axiom_names();
      bool all_pass = true;
      Json out = Json::array();
      for (const std::string& axiom : axioms) {
        AuditReport report = run_audit(mech, domain, axiom, opt);
        all_pass = all_pass && report.pass;
        if (format == "json") {
          out.push_back(report_json(domain, report, timings));
        } else {
          std::cout << report.mechanism << " / " << report.axiom << ": "
                    << (report.pass ? "pass" : "FAIL") << " (" << report.profiles_checked
                    << " profiles, " << report.cases << " cases)";
          if (timings) std::cout << " [" << report.elapsed_ms << " ms]";
          std::cout << "\n";
          if (!report.witness.is_null())
            std::cout << "  witness " << report.witness.dump() << "\n";
        }
      }
      if (format == "json") std::cout << dump_canonical(out);
      return all_pass ? 0 : 1;
    }
    if (repro->parsed()) return run_repro(repro_case, format, workers);
    if (probe->parsed()) {
      ProfileDomain domain = build_domain(domain_args);
      AuditOptions opt;
      opt.workers = workers;
      UniquenessVerdict v = uniqueness_probe(domain, opt);
      if (format == "json") {
        Json out{{"pass", v.pass},
                 {"profiles_checked", v.profiles_checked},
                 {"deviants_tested", v.deviants_tested}};
        if (v.survivor) {
          Problem p = domain.instantiate_full(v.survivor->profile);
          out["survivor"] = Json{{"profile", profile_json(domain, v.survivor->profile)},
                                 {"matching", matching_to_json(p, v.survivor->matching)}};
        } else {
          out["survivor"] = nullptr;
        }
        std::cout << dump_canonical(out);
      } else {
        std::cout << "uniqueness probe: " << (v.pass ? "pass" : "FAIL") << " ("
                  << v.deviants_tested << " deviants over " << v.profiles_checked
                  << " profiles)\n";
        if (v.survivor) {
          Problem p = domain.instantiate_full(v.survivor->profile);
          std::cout << "  survivor at profile " << v.survivor->profile << ": "
                    << format_matching(p, v.survivor->matching) << "\n";
        }
      }
      return v.pass ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

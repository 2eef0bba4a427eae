#include "ttcm/audits.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "ttcm/mbg.hpp"

namespace ttcm {

namespace {

long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long long pow_ll(long long base, int exp, long long cap) {
  long long out = 1;
  for (int k = 0; k < exp; ++k) {
    if (out > cap / std::max<long long>(base, 1)) return cap + 1;
    out *= base;
  }
  return out;
}

long long binomial(int n, int k) {
  long long out = 1;
  for (int t = 1; t <= k; ++t) out = out * (n - t + 1) / t;
  return out;
}

}  // namespace

ProfileDomain::ProfileDomain(Problem roster, DomainRestriction restriction,
                             long long profile_guard)
    : roster_(std::move(roster)), restriction_(restriction) {
  const int n = roster_.num_students();
  orders_ = static_cast<int>(factorial(roster_.num_schools() + 1));
  full_size_ = pow_ll(orders_, n, profile_guard);
  if (full_size_ > profile_guard)
    throw Error("profile domain exceeds the enumeration guard of " +
                std::to_string(profile_guard) + " profiles");
  weights_.assign(n, 1);
  for (int i = n - 2; i >= 0; --i) weights_[i] = weights_[i + 1] * orders_;
  size_ = restriction_ == DomainRestriction::full ? full_size_
                                                  : (n == 0 ? 1 : orders_);
}

long long ProfileDomain::full_index(long long k) const {
  if (k < 0 || k >= size_) throw Error("profile index out of range");
  if (restriction_ == DomainRestriction::full) return k;
  long long fi = 0;
  for (long long w : weights_) fi += k * w;  // every student at rank k
  return fi;
}

std::vector<int> ProfileDomain::ranks_of_full(long long fi) const {
  const int n = roster_.num_students();
  std::vector<int> ranks(n, 0);
  for (int i = 0; i < n; ++i) ranks[i] = static_cast<int>((fi / weights_[i]) % orders_);
  return ranks;
}

long long ProfileDomain::full_index_of_ranks(const std::vector<int>& ranks) const {
  long long fi = 0;
  for (int i = 0; i < roster_.num_students(); ++i) fi += ranks[i] * weights_[i];
  return fi;
}

long long ProfileDomain::replace_rank(long long fi, int student, int rank) const {
  int old = rank_of_full(fi, student);
  return fi + (static_cast<long long>(rank) - old) * weights_[student];
}

int ProfileDomain::rank_of_full(long long fi, int student) const {
  return static_cast<int>((fi / weights_[student]) % orders_);
}

std::vector<int> ProfileDomain::order_of_rank(int rank) const {
  const int m = roster_.num_schools() + 1;
  std::vector<int> pool(m);
  for (int a = 0; a < m; ++a) pool[a] = a;
  std::vector<int> order;
  order.reserve(m);
  long long r = rank;
  for (int left = m; left >= 1; --left) {
    long long f = factorial(left - 1);
    int pick = static_cast<int>(r / f);
    r %= f;
    order.push_back(pool[pick]);
    pool.erase(pool.begin() + pick);
  }
  return order;
}

int ProfileDomain::rank_of_order(const std::vector<int>& order) const {
  const int m = roster_.num_schools() + 1;
  if (static_cast<int>(order.size()) != m) throw Error("rank_of_order: wrong length");
  std::vector<int> pool(m);
  for (int a = 0; a < m; ++a) pool[a] = a;
  long long rank = 0;
  for (int pos = 0; pos < m; ++pos) {
    auto it = std::find(pool.begin(), pool.end(), order[pos]);
    if (it == pool.end()) throw Error("rank_of_order: not a permutation");
    rank += (it - pool.begin()) * factorial(m - 1 - pos);
    pool.erase(it);
  }
  return static_cast<int>(rank);
}

long long ProfileDomain::full_index_of_profile(const std::vector<std::vector<int>>& prefs) const {
  std::vector<int> ranks;
  ranks.reserve(prefs.size());
  for (const auto& order : prefs) ranks.push_back(rank_of_order(order));
  return full_index_of_ranks(ranks);
}

Problem ProfileDomain::instantiate_full(long long fi) const {
  Problem p = roster_;
  const std::vector<int> ranks = ranks_of_full(fi);
  for (int i = 0; i < p.num_students(); ++i) p.prefs[i] = order_of_rank(ranks[i]);
  p.finalize();
  return p;
}

Json ProfileDomain::descriptor_json() const {
  Json j = Json::object();
  j["students"] = roster_.students;
  Json schools = Json::array();
  for (int a = 0; a < roster_.num_schools(); ++a)
    schools.push_back({{"id", roster_.schools[a]}, {"capacity", roster_.capacities[a]}});
  j["schools"] = std::move(schools);
  Json prios = Json::object();
  for (int a = 0; a <= roster_.num_schools(); ++a) {
    Json order = Json::array();
    for (int i : roster_.priorities[a]) order.push_back(roster_.students[i]);
    prios[roster_.school_name(a)] = std::move(order);
  }
  j["priorities"] = std::move(prios);
  j["restriction"] =
      restriction_ == DomainRestriction::full ? "full" : "identical-preferences";
  j["profiles"] = size_;
  return j;
}

void for_each_profile(const ProfileDomain& domain,
                      const std::function<void(long long, const Problem&)>& fn) {
  for (long long k = 0; k < domain.size(); ++k) fn(k, domain.instantiate(k));
}

// ---------------------------------------------------------------------------
// Shared audit machinery

namespace {

constexpr long long kCacheLimit = 1LL << 21;

/// Evaluates the mechanism over the whole full-index space up front when it
/// fits, so audit scans become table lookups.
struct OutcomeTable {
  std::vector<Matching> cache;
  const Mechanism* mech = nullptr;
  const ProfileDomain* domain = nullptr;

  Matching operator()(long long fi) const {
    if (!cache.empty()) return cache[fi];
    return mech->eval(domain->instantiate_full(fi));
  }
};

OutcomeTable precompute_outcomes(const Mechanism& mech, const ProfileDomain& domain,
                                 int workers) {
  OutcomeTable table;
  table.mech = &mech;
  table.domain = &domain;
  const long long total = domain.full_size();
  if (total > kCacheLimit) return table;
  table.cache.resize(total);
  const int threads = std::max(1, workers);
  std::atomic<long long> next{0};
  const long long block = 64;
  auto work = [&] {
    while (true) {
      long long base = next.fetch_add(block);
      if (base >= total) break;
      long long end = std::min(total, base + block);
      for (long long fi = base; fi < end; ++fi)
        table.cache[fi] = mech.eval(domain.instantiate_full(fi));
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return table;
}

/// Parallel scan of [0, count) for the smallest index where `fn` reports a
/// failure. `fn` must be pure. The result is independent of worker count:
/// every block below the winning index is fully scanned.
template <typename W, typename Fn>
std::optional<std::pair<long long, W>> scan_first_failure(long long count, int workers, Fn fn) {
  if (workers <= 1) {
    for (long long k = 0; k < count; ++k)
      if (auto w = fn(k)) return std::make_pair(k, std::move(*w));
    return std::nullopt;
  }
  std::atomic<long long> next{0};
  std::atomic<long long> best{count};
  std::mutex merge_mu;
  std::optional<std::pair<long long, W>> found;
  const long long block = 16;
  auto work = [&] {
    while (true) {
      long long base = next.fetch_add(block);
      if (base >= count || base >= best.load()) break;
      long long end = std::min(count, base + block);
      for (long long k = base; k < end && k < best.load(); ++k) {
        if (auto w = fn(k)) {
          std::lock_guard<std::mutex> lock(merge_mu);
          if (!found || k < found->first) found = std::make_pair(k, std::move(*w));
          long long cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
          break;  // later hits in this block cannot beat k
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return found;
}

std::vector<std::vector<int>> all_nonempty_subsets(int n) {
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(i);
    subsets.push_back(std::move(members));
  }
  return subsets;
}

std::vector<std::vector<int>> mbg_groups_of(const Problem& problem) {
  std::vector<std::vector<int>> groups;
  for (const MbgLevel& level : mbg_sequence(problem).levels) groups.push_back(level.group);
  return groups;
}

/// The collusion search for one true profile: joint misreports by each
/// candidate group, then every reallocation of the seats the group holds
/// after the misreport, judged by the true preferences. Enumeration order:
/// group, then misreport digits (first member most significant), then
/// reallocations in lexicographic seat order.
template <typename OutFn>
std::optional<CollusionWitness> collusion_profile_scan(
    const ProfileDomain& domain, const Problem& truth, long long fi, const OutFn& outcome,
    const std::vector<std::vector<int>>& candidate_groups, int max_group_size) {
  const int R = domain.orders_per_student();
  const Matching assigned = outcome(fi);
  for (const std::vector<int>& group : candidate_groups) {
    const int g = static_cast<int>(group.size());
    if (g == 0) continue;
    if (max_group_size > 0 && g > max_group_size) continue;
    bool all_at_top = true;
    for (int member : group)
      if (assigned.at(member) != truth.favorite(member)) {
        all_at_top = false;
        break;
      }
    if (all_at_top) continue;  // nobody can strictly improve

    const long long combos = pow_ll(R, g, 1LL << 62);
    std::vector<int> ranks(g, 0);
    for (long long t = 0; t < combos; ++t) {
      long long rest = t;
      for (int u = g - 1; u >= 0; --u) {
        ranks[u] = static_cast<int>(rest % R);
        rest /= R;
      }
      long long fj = fi;
      for (int u = 0; u < g; ++u) fj = domain.replace_rank(fj, group[u], ranks[u]);
      const Matching misreported = outcome(fj);
      std::vector<int> seats(g);
      for (int u = 0; u < g; ++u) seats[u] = misreported.at(group[u]);
      std::sort(seats.begin(), seats.end());
      do {
        bool weak = true, strict = false;
        for (int u = 0; u < g; ++u) {
          if (!truth.weakly_prefers(group[u], seats[u], assigned.at(group[u]))) {
            weak = false;
            break;
          }
          if (truth.prefers(group[u], seats[u], assigned.at(group[u]))) strict = true;
        }
        if (weak && strict) return CollusionWitness{fi, group, ranks, seats};
      } while (std::next_permutation(seats.begin(), seats.end()));
    }
  }
  return std::nullopt;
}

template <typename OutFn>
std::optional<GroupSpWitness> group_sp_profile_scan(
    const ProfileDomain& domain, const Problem& truth, long long fi, const OutFn& outcome,
    const std::vector<std::vector<int>>& candidate_groups, int max_group_size) {
  const int R = domain.orders_per_student();
  const Matching assigned = outcome(fi);
  for (const std::vector<int>& group : candidate_groups) {
    const int g = static_cast<int>(group.size());
    if (max_group_size > 0 && g > max_group_size) continue;
    bool all_at_top = true;
    for (int member : group)
      if (assigned.at(member) != truth.favorite(member)) {
        all_at_top = false;
        break;
      }
    if (all_at_top) continue;

    const long long combos = pow_ll(R, g, 1LL << 62);
    std::vector<int> ranks(g, 0);
    for (long long t = 0; t < combos; ++t) {
      long long rest = t;
      for (int u = g - 1; u >= 0; --u) {
        ranks[u] = static_cast<int>(rest % R);
        rest /= R;
      }
      long long fj = fi;
      for (int u = 0; u < g; ++u) fj = domain.replace_rank(fj, group[u], ranks[u]);
      const Matching misreported = outcome(fj);
      bool weak = true, strict = false;
      for (int u = 0; u < g; ++u) {
        int now = misreported.at(group[u]);
        int before = assigned.at(group[u]);
        if (!truth.weakly_prefers(group[u], now, before)) {
          weak = false;
          break;
        }
        if (truth.prefers(group[u], now, before)) strict = true;
      }
      if (weak && strict) return GroupSpWitness{fi, group, ranks};
    }
  }
  return std::nullopt;
}

long long subset_misreport_cases(int n, int R, int max_group_size) {
  long long total = 0;
  const int cap = max_group_size > 0 ? std::min(n, max_group_size) : n;
  for (int s = 1; s <= cap; ++s) total += binomial(n, s) * pow_ll(R, s, 1LL << 62);
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Audits

AuditVerdict<SpWitness> strategy_proof_audit(const Mechanism& mech, const ProfileDomain& domain,
                                             const AuditOptions& opt) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int n = domain.num_students();
  const int R = domain.orders_per_student();
  auto per_profile = [&](long long k) -> std::optional<SpWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    const Matching assigned = outcome(fi);
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < R; ++r) {
        const Matching out = outcome(domain.replace_rank(fi, i, r));
        if (truth.prefers(i, out.at(i), assigned.at(i))) return SpWitness{fi, i, r};
      }
    }
    return std::nullopt;
  };
  auto hit = scan_first_failure<SpWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<SpWitness> verdict;
  verdict.profiles_checked = domain.size();
  verdict.cases = domain.size() * n * R;
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

AuditVerdict<GroupSpWitness> group_strategy_proof_audit(const Mechanism& mech,
                                                        const ProfileDomain& domain,
                                                        const AuditOptions& opt) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int n = domain.num_students();
  const int R = domain.orders_per_student();
  const auto subsets = all_nonempty_subsets(n);
  auto per_profile = [&](long long k) -> std::optional<GroupSpWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    return group_sp_profile_scan(domain, truth, fi, outcome, subsets, opt.max_group_size);
  };
  auto hit = scan_first_failure<GroupSpWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<GroupSpWitness> verdict;
  verdict.profiles_checked = domain.size();
  verdict.cases = domain.size() * subset_misreport_cases(n, R, opt.max_group_size);
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

AuditVerdict<ReallocationWitness> reallocation_proof_audit(const Mechanism& mech,
                                                           const ProfileDomain& domain,
                                                           const AuditOptions& opt) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int n = domain.num_students();
  const int R = domain.orders_per_student();
  auto per_profile = [&](long long k) -> std::optional<ReallocationWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    const Matching assigned = outcome(fi);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int ri = 0; ri < R; ++ri) {
          const Matching alone_i = outcome(domain.replace_rank(fi, i, ri));
          if (alone_i.at(i) != assigned.at(i)) continue;
          for (int rj = 0; rj < R; ++rj) {
            const Matching alone_j = outcome(domain.replace_rank(fi, j, rj));
            if (alone_j.at(j) != assigned.at(j)) continue;
            const long long fj = domain.replace_rank(domain.replace_rank(fi, i, ri), j, rj);
            const Matching joint = outcome(fj);
            if (joint.at(i) == assigned.at(i) || joint.at(j) == assigned.at(j)) continue;
            // the pair swaps its joint assignments
            const int swap_i = joint.at(j);
            const int swap_j = joint.at(i);
            bool weak = truth.weakly_prefers(i, swap_i, assigned.at(i)) &&
                        truth.weakly_prefers(j, swap_j, assigned.at(j));
            bool strict = truth.prefers(i, swap_i, assigned.at(i)) ||
                          truth.prefers(j, swap_j, assigned.at(j));
            if (weak && strict) return ReallocationWitness{fi, i, j, ri, rj};
          }
        }
      }
    }
    return std::nullopt;
  };
  auto hit = scan_first_failure<ReallocationWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<ReallocationWitness> verdict;
  verdict.profiles_checked = domain.size();
  verdict.cases = domain.size() * binomial(n, 2) * R * R;
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

AuditVerdict<CollusionWitness> collusion_proof_audit(const Mechanism& mech,
                                                     const ProfileDomain& domain,
                                                     const AuditOptions& opt) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int n = domain.num_students();
  const int R = domain.orders_per_student();
  const auto subsets = all_nonempty_subsets(n);
  auto per_profile = [&](long long k) -> std::optional<CollusionWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    return collusion_profile_scan(domain, truth, fi, outcome, subsets, opt.max_group_size);
  };
  auto hit = scan_first_failure<CollusionWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<CollusionWitness> verdict;
  verdict.profiles_checked = domain.size();
  verdict.cases = domain.size() * subset_misreport_cases(n, R, opt.max_group_size);
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

AuditVerdict<CollusionWitness> mbg_collusion_proof_audit(const Mechanism& mech,
                                                         const ProfileDomain& domain,
                                                         const AuditOptions& opt) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int R = domain.orders_per_student();
  auto per_profile = [&](long long k) -> std::optional<CollusionWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    return collusion_profile_scan(domain, truth, fi, outcome, mbg_groups_of(truth),
                                  opt.max_group_size);
  };
  auto hit = scan_first_failure<CollusionWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<CollusionWitness> verdict;
  verdict.profiles_checked = domain.size();
  // group structure varies per profile; tally the full search space
  for (long long k = 0; k < domain.size(); ++k) {
    const Problem truth = domain.instantiate(k);
    for (const auto& group : mbg_groups_of(truth)) {
      int g = static_cast<int>(group.size());
      if (opt.max_group_size > 0 && g > opt.max_group_size) continue;
      verdict.cases += pow_ll(R, g, 1LL << 62);
    }
  }
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

namespace {

AuditVerdict<RobustWitness> robust_audit_impl(const Mechanism& mech, const ProfileDomain& domain,
                                              const AuditOptions& opt, bool mbg_variant) {
  OutcomeTable outcome = precompute_outcomes(mech, domain, opt.workers);
  const int n = domain.num_students();
  const int R = domain.orders_per_student();
  const auto subsets = mbg_variant ? std::vector<std::vector<int>>{} : all_nonempty_subsets(n);
  auto per_profile = [&](long long k) -> std::optional<RobustWitness> {
    const long long fi = domain.full_index(k);
    const Problem truth = domain.instantiate_full(fi);
    const Matching assigned = outcome(fi);
    auto pareto = is_pareto_efficient(truth, assigned, opt.pareto_guard);
    if (!pareto.pass)
      return RobustWitness{EfficiencyWitness{fi, pareto.witness->dominating}, std::nullopt};
    std::vector<std::vector<int>> local_groups;
    const std::vector<std::vector<int>>* groups = &subsets;
    if (mbg_variant) {
      local_groups = mbg_groups_of(truth);
      groups = &local_groups;
    }
    auto collusion =
        collusion_profile_scan(domain, truth, fi, outcome, *groups, opt.max_group_size);
    if (collusion) return RobustWitness{std::nullopt, std::move(collusion)};
    return std::nullopt;
  };
  auto hit = scan_first_failure<RobustWitness>(domain.size(), opt.workers, per_profile);
  AuditVerdict<RobustWitness> verdict;
  verdict.profiles_checked = domain.size();
  long long matchings = static_cast<long long>(all_matchings(domain.roster(), opt.pareto_guard).size());
  verdict.cases = domain.size() * matchings;
  if (mbg_variant) {
    for (long long k = 0; k < domain.size(); ++k) {
      const Problem truth = domain.instantiate(k);
      for (const auto& group : mbg_groups_of(truth)) {
        int g = static_cast<int>(group.size());
        if (opt.max_group_size > 0 && g > opt.max_group_size) continue;
        verdict.cases += pow_ll(R, g, 1LL << 62);
      }
    }
  } else {
    verdict.cases += domain.size() * subset_misreport_cases(n, R, opt.max_group_size);
  }
  if (hit) {
    verdict.pass = false;
    verdict.witness = std::move(hit->second);
  }
  return verdict;
}

}  // namespace

AuditVerdict<RobustWitness> robust_efficiency_audit(const Mechanism& mech,
                                                    const ProfileDomain& domain,
                                                    const AuditOptions& opt) {
  return robust_audit_impl(mech, domain, opt, false);
}

AuditVerdict<RobustWitness> mbg_robust_efficiency_audit(const Mechanism& mech,
                                                        const ProfileDomain& domain,
                                                        const AuditOptions& opt) {
  return robust_audit_impl(mech, domain, opt, true);
}

// ---------------------------------------------------------------------------
// Uniqueness probe

namespace {

struct ProbeCell {
  long long deviants = 0;
  std::optional<Matching> survivor;
};

}  // namespace

UniquenessVerdict uniqueness_probe(const ProfileDomain& domain, const AuditOptions& opt) {
  const Mechanism ttc = make_ttc();
  OutcomeTable outcome = precompute_outcomes(ttc, domain, opt.workers);
  const long long count = domain.size();

  std::vector<Problem> truths;
  truths.reserve(count);
  std::vector<std::vector<std::vector<int>>> groups(count);
  for (long long k = 0; k < count; ++k) {
    truths.push_back(domain.instantiate(k));
    groups[k] = mbg_groups_of(truths.back());
  }
  const std::vector<Matching> candidates = all_matchings(domain.roster(), opt.pareto_guard);

  std::vector<ProbeCell> cells(count);
  std::atomic<long long> next{0};
  auto work = [&] {
    while (true) {
      long long k = next.fetch_add(1);
      if (k >= count) break;
      const long long fi = domain.full_index(k);
      const Problem& truth = truths[k];
      const Matching ttc_out = outcome(fi);
      for (const Matching& mu : candidates) {
        if (mu == ttc_out) continue;
        if (!is_pareto_efficient(truth, mu, opt.pareto_guard).pass) continue;
        if (!is_mbg_quota_rational(truth, mu).pass) continue;
        ++cells[k].deviants;
        auto patched = [&, fi](long long f2) -> Matching {
          return f2 == fi ? mu : outcome(f2);
        };
        bool rejected = false;
        for (long long kk = 0; kk < count && !rejected; ++kk) {
          if (collusion_profile_scan(domain, truths[kk], domain.full_index(kk), patched,
                                     groups[kk], opt.max_group_size))
            rejected = true;
        }
        if (!rejected && !cells[k].survivor) cells[k].survivor = mu;
      }
    }
  };
  const int threads = std::max(1, opt.workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  UniquenessVerdict verdict;
  verdict.profiles_checked = count;
  for (long long k = 0; k < count; ++k) {
    verdict.deviants_tested += cells[k].deviants;
    if (cells[k].survivor && verdict.pass) {
      verdict.pass = false;
      verdict.survivor = DeviantSurvivor{domain.full_index(k), *cells[k].survivor};
    }
  }
  return verdict;
}

std::optional<CollusionWitness> deviant_rejection_witness(const ProfileDomain& domain,
                                                          long long full_profile_index,
                                                          const Matching& deviant_outcome,
                                                          const AuditOptions& opt) {
  const Mechanism ttc = make_ttc();
  OutcomeTable outcome = precompute_outcomes(ttc, domain, opt.workers);
  auto patched = [&](long long f2) -> Matching {
    return f2 == full_profile_index ? deviant_outcome : outcome(f2);
  };
  for (long long k = 0; k < domain.size(); ++k) {
    const Problem truth = domain.instantiate(k);
    auto hit = collusion_profile_scan(domain, truth, domain.full_index(k), patched,
                                      mbg_groups_of(truth), opt.max_group_size);
    if (hit) return hit;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Replay

bool replay_sp_witness(const Mechanism& mech, const ProfileDomain& domain, const SpWitness& w) {
  const Problem truth = domain.instantiate_full(w.profile);
  const Matching before = mech.eval(truth);
  const Matching after = mech.eval(domain.instantiate_full(
      domain.replace_rank(w.profile, w.student, w.misreport_rank)));
  return truth.prefers(w.student, after.at(w.student), before.at(w.student));
}

bool replay_group_sp_witness(const Mechanism& mech, const ProfileDomain& domain,
                             const GroupSpWitness& w) {
  if (w.group.empty() || w.group.size() != w.misreport_ranks.size()) return false;
  const Problem truth = domain.instantiate_full(w.profile);
  const Matching before = mech.eval(truth);
  long long fj = w.profile;
  for (size_t u = 0; u < w.group.size(); ++u)
    fj = domain.replace_rank(fj, w.group[u], w.misreport_ranks[u]);
  const Matching after = mech.eval(domain.instantiate_full(fj));
  bool strict = false;
  for (size_t u = 0; u < w.group.size(); ++u) {
    int i = w.group[u];
    if (!truth.weakly_prefers(i, after.at(i), before.at(i))) return false;
    if (truth.prefers(i, after.at(i), before.at(i))) strict = true;
  }
  return strict;
}

bool replay_reallocation_witness(const Mechanism& mech, const ProfileDomain& domain,
                                 const ReallocationWitness& w) {
  const Problem truth = domain.instantiate_full(w.profile);
  const Matching before = mech.eval(truth);
  const Matching alone_i =
      mech.eval(domain.instantiate_full(domain.replace_rank(w.profile, w.first, w.misreport_first)));
  const Matching alone_j = mech.eval(
      domain.instantiate_full(domain.replace_rank(w.profile, w.second, w.misreport_second)));
  const long long fj = domain.replace_rank(domain.replace_rank(w.profile, w.first, w.misreport_first),
                                           w.second, w.misreport_second);
  const Matching joint = mech.eval(domain.instantiate_full(fj));
  if (alone_i.at(w.first) != before.at(w.first)) return false;
  if (alone_j.at(w.second) != before.at(w.second)) return false;
  if (joint.at(w.first) == before.at(w.first)) return false;
  if (joint.at(w.second) == before.at(w.second)) return false;
  const int swap_i = joint.at(w.second);
  const int swap_j = joint.at(w.first);
  if (!truth.weakly_prefers(w.first, swap_i, before.at(w.first))) return false;
  if (!truth.weakly_prefers(w.second, swap_j, before.at(w.second))) return false;
  return truth.prefers(w.first, swap_i, before.at(w.first)) ||
         truth.prefers(w.second, swap_j, before.at(w.second));
}

bool replay_collusion_witness(const Mechanism& mech, const ProfileDomain& domain,
                              const CollusionWitness& w, bool require_mbg_group) {
  if (w.group.empty() || w.group.size() != w.misreport_ranks.size() ||
      w.group.size() != w.reallocation.size())
    return false;
  const Problem truth = domain.instantiate_full(w.profile);
  if (require_mbg_group) {
    bool is_group = false;
    for (const auto& group : mbg_groups_of(truth))
      if (group == w.group) is_group = true;
    if (!is_group) return false;
  }
  const Matching before = mech.eval(truth);
  long long fj = w.profile;
  for (size_t u = 0; u < w.group.size(); ++u)
    fj = domain.replace_rank(fj, w.group[u], w.misreport_ranks[u]);
  const Matching after = mech.eval(domain.instantiate_full(fj));
  // the reallocation must redistribute exactly the seats the group holds
  std::vector<int> seats, realloc = w.reallocation;
  for (int i : w.group) seats.push_back(after.at(i));
  std::sort(seats.begin(), seats.end());
  std::sort(realloc.begin(), realloc.end());
  if (seats != realloc) return false;
  bool strict = false;
  for (size_t u = 0; u < w.group.size(); ++u) {
    int i = w.group[u];
    if (!truth.weakly_prefers(i, w.reallocation[u], before.at(i))) return false;
    if (truth.prefers(i, w.reallocation[u], before.at(i))) strict = true;
  }
  return strict;
}

bool replay_efficiency_witness(const Mechanism& mech, const ProfileDomain& domain,
                               const EfficiencyWitness& w) {
  const Problem truth = domain.instantiate_full(w.profile);
  const Matching assigned = mech.eval(truth);
  return replay_pareto_witness(truth, assigned, ParetoWitness{w.dominating});
}

bool replay_robust_witness(const Mechanism& mech, const ProfileDomain& domain,
                           const RobustWitness& w, bool mbg_variant) {
  if (w.efficiency) return replay_efficiency_witness(mech, domain, *w.efficiency);
  if (w.collusion) return replay_collusion_witness(mech, domain, *w.collusion, mbg_variant);
  return false;
}

// ---------------------------------------------------------------------------
// Reports

const std::vector<std::string>& audit_axiom_names() {
  static const std::vector<std::string> names = {
      "strategy-proofness",     "group-strategy-proofness", "reallocation-proofness",
      "collusion-proofness",    "mbg-collusion-proofness",  "robust-efficiency",
      "mbg-robust-efficiency"};
  return names;
}

Json profile_json(const ProfileDomain& domain, long long full_index) {
  const Problem p = domain.instantiate_full(full_index);
  Json prefs = Json::object();
  for (int i = 0; i < p.num_students(); ++i) {
    Json order = Json::array();
    for (int a : p.prefs[i]) order.push_back(p.school_name(a));
    prefs[p.students[i]] = std::move(order);
  }
  return Json{{"index", full_index}, {"preferences", std::move(prefs)}};
}

namespace {

Json order_json(const ProfileDomain& domain, int rank) {
  Json arr = Json::array();
  for (int a : domain.order_of_rank(rank)) arr.push_back(domain.roster().school_name(a));
  return arr;
}

Json misreports_json(const ProfileDomain& domain, const std::vector<int>& group,
                     const std::vector<int>& ranks) {
  Json j = Json::object();
  for (size_t u = 0; u < group.size(); ++u)
    j[domain.roster().student_name(group[u])] = order_json(domain, ranks[u]);
  return j;
}

Json student_list(const ProfileDomain& domain, const std::vector<int>& students) {
  Json arr = Json::array();
  for (int i : students) arr.push_back(domain.roster().student_name(i));
  return arr;
}

}  // namespace

Json witness_json(const ProfileDomain& domain, const SpWitness& w) {
  return Json{{"kind", "manipulation"},
              {"profile", profile_json(domain, w.profile)},
              {"student", domain.roster().student_name(w.student)},
              {"misreport", order_json(domain, w.misreport_rank)}};
}

Json witness_json(const ProfileDomain& domain, const GroupSpWitness& w) {
  return Json{{"kind", "group-manipulation"},
              {"profile", profile_json(domain, w.profile)},
              {"group", student_list(domain, w.group)},
              {"misreports", misreports_json(domain, w.group, w.misreport_ranks)}};
}

Json witness_json(const ProfileDomain& domain, const ReallocationWitness& w) {
  return Json{{"kind", "reallocation"},
              {"profile", profile_json(domain, w.profile)},
              {"pair", student_list(domain, {w.first, w.second})},
              {"misreports", misreports_json(domain, {w.first, w.second},
                                             {w.misreport_first, w.misreport_second})}};
}

Json witness_json(const ProfileDomain& domain, const CollusionWitness& w) {
  Json realloc = Json::object();
  for (size_t u = 0; u < w.group.size(); ++u)
    realloc[domain.roster().student_name(w.group[u])] =
        domain.roster().school_name(w.reallocation[u]);
  return Json{{"kind", "collusion"},
              {"profile", profile_json(domain, w.profile)},
              {"group", student_list(domain, w.group)},
              {"misreports", misreports_json(domain, w.group, w.misreport_ranks)},
              {"reallocation", std::move(realloc)}};
}

Json witness_json(const ProfileDomain& domain, const EfficiencyWitness& w) {
  const Problem p = domain.instantiate_full(w.profile);
  return Json{{"kind", "pareto"},
              {"profile", profile_json(domain, w.profile)},
              {"dominating", matching_to_json(p, w.dominating)["assignment"]}};
}

Json witness_json(const ProfileDomain& domain, const RobustWitness& w) {
  Json inner =
      w.efficiency ? witness_json(domain, *w.efficiency) : witness_json(domain, *w.collusion);
  inner["component"] = w.efficiency ? "efficiency" : "collusion";
  return inner;
}

namespace {

template <typename W>
AuditReport to_report(const Mechanism& mech, const ProfileDomain& domain,
                      const std::string& axiom, const AuditVerdict<W>& verdict,
                      long long elapsed_ms) {
  AuditReport report;
  report.mechanism = mech.name;
  report.axiom = axiom;
  report.pass = verdict.pass;
  report.witness = verdict.witness ? witness_json(domain, *verdict.witness) : Json(nullptr);
  report.profiles_checked = verdict.profiles_checked;
  report.cases = verdict.cases;
  report.elapsed_ms = elapsed_ms;
  return report;
}

}  // namespace

AuditReport run_audit(const Mechanism& mech, const ProfileDomain& domain,
                      const std::string& axiom, const AuditOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };
  if (axiom == "strategy-proofness")
    return to_report(mech, domain, axiom, strategy_proof_audit(mech, domain, opt), elapsed());
  if (axiom == "group-strategy-proofness")
    return to_report(mech, domain, axiom, group_strategy_proof_audit(mech, domain, opt),
                     elapsed());
  if (axiom == "reallocation-proofness")
    return to_report(mech, domain, axiom, reallocation_proof_audit(mech, domain, opt), elapsed());
  if (axiom == "collusion-proofness")
    return to_report(mech, domain, axiom, collusion_proof_audit(mech, domain, opt), elapsed());
  if (axiom == "mbg-collusion-proofness")
    return to_report(mech, domain, axiom, mbg_collusion_proof_audit(mech, domain, opt),
                     elapsed());
  if (axiom == "robust-efficiency")
    return to_report(mech, domain, axiom, robust_efficiency_audit(mech, domain, opt), elapsed());
  if (axiom == "mbg-robust-efficiency")
    return to_report(mech, domain, axiom, mbg_robust_efficiency_audit(mech, domain, opt),
                     elapsed());
  throw Error("unknown audit axiom \"" + axiom + "\"");
}

Json report_json(const ProfileDomain& domain, const AuditReport& report, bool include_timing) {
  Json j = Json::object();
  j["mechanism"] = report.mechanism;
  j["domain"] = domain.descriptor_json();
  j["axiom"] = report.axiom;
  j["pass"] = report.pass;
  j["witness"] = report.witness;
  j["profiles_checked"] = report.profiles_checked;
  j["cases"] = report.cases;
  j["elapsed_ms"] = include_timing ? report.elapsed_ms : 0;
  return j;
}

}  // namespace ttcm

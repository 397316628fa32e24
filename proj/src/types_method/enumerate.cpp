#include <algorithm>
#include <numeric>

#include "ldp/types_method.hpp"

namespace ldp {
namespace {

using Multiset = std::vector<std::pair<LocalProfile, std::int64_t>>;

// All multisets of `bins` profiles summing to `balls`, for one symbol class.
class ClassEnumerator {
 public:
  ClassEnumerator(std::int64_t bins, std::vector<std::int64_t> balls, std::int64_t cap)
      : bins_(bins), remaining_(std::move(balls)), cap_(cap) {
    build_candidates();
  }

  std::vector<Multiset> run() {
    Multiset current;
    descend(0, bins_, std::accumulate(remaining_.begin(), remaining_.end(), std::int64_t{0}),
            current);
    return std::move(out_);
  }

 private:
  // Profiles l <= balls componentwise, by degree descending then
  // lexicographically descending; the zero profile comes last.
  void build_candidates() {
    const std::size_t m = remaining_.size();
    LocalProfile l = LocalProfile::zeros(m);
    while (true) {
      candidates_.push_back(l);
      std::size_t b = 0;
      for (; b < m; ++b) {
        if (l[b] < static_cast<std::uint32_t>(remaining_[b])) {
          ++l[b];
          break;
        }
        l[b] = 0;
      }
      if (b == m) break;
    }
    std::sort(candidates_.begin(), candidates_.end(),
              [](const LocalProfile& x, const LocalProfile& y) {
                if (x.degree() != y.degree()) return x.degree() > y.degree();
                return y < x;
              });
  }

  void descend(std::size_t i, std::int64_t bins_left, std::int64_t balls_left, Multiset& current) {
    if (balls_left == 0) {
      if (bins_left > 0) current.emplace_back(LocalProfile::zeros(remaining_.size()), bins_left);
      out_.push_back(current);
      if (bins_left > 0) current.pop_back();
      if (static_cast<std::int64_t>(out_.size()) > cap_) {
        throw BudgetError("type enumeration exceeded the budget of " + std::to_string(cap_) +
                          " types");
      }
      return;
    }
    if (i >= candidates_.size() || bins_left == 0) return;
    const auto& l = candidates_[i];
    const auto deg = static_cast<std::int64_t>(l.degree());
    // Later candidates have degree <= deg.
    if (deg == 0 || balls_left > bins_left * deg) return;

    std::int64_t max_copies = bins_left;
    for (std::size_t b = 0; b < l.size(); ++b) {
      if (l[b] > 0) max_copies = std::min(max_copies, remaining_[b] / l[b]);
    }
    for (std::int64_t c = max_copies; c >= 0; --c) {
      for (std::size_t b = 0; b < l.size(); ++b) remaining_[b] -= c * l[b];
      if (c > 0) current.emplace_back(l, c);
      descend(i + 1, bins_left - c, balls_left - c * deg, current);
      if (c > 0) current.pop_back();
      for (std::size_t b = 0; b < l.size(); ++b) remaining_[b] += c * l[b];
    }
  }

  std::int64_t bins_;
  std::vector<std::int64_t> remaining_;
  std::int64_t cap_;
  std::vector<LocalProfile> candidates_;
  std::vector<Multiset> out_;
};

}  // namespace

TypeClass enumerate_type_class(const QuantizedTargets& t, const EnumerationBudget& budget) {
  if (t.total_balls() > budget.max_balls) {
    throw BudgetError("type enumeration needs " + std::to_string(t.total_balls()) +
                      " balls, above the budget of " + std::to_string(budget.max_balls));
  }
  const std::size_t m = t.colors();
  std::vector<std::vector<Multiset>> per_class(m);
  std::int64_t product = 1;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<std::int64_t> balls(m);
    for (std::size_t b = 0; b < m; ++b) balls[b] = t.balls(b, a);
    const bool any_balls = std::any_of(balls.begin(), balls.end(), [](auto x) { return x > 0; });
    if (t.bins(a) == 0) {
      if (any_balls) {
        throw FeasibilityError("balls addressed to symbol " + t.alphabet().symbol(a) +
                               ", which has no bins");
      }
      per_class[a].push_back({});
      continue;
    }
    per_class[a] = ClassEnumerator(t.bins(a), std::move(balls), budget.max_types).run();
    product *= static_cast<std::int64_t>(per_class[a].size());
    if (product > budget.max_types) {
      throw BudgetError("type class has more than " + std::to_string(budget.max_types) +
                        " members");
    }
  }

  std::map<ProfileCounts, mpq_class> members;
  std::vector<std::size_t> pick(m, 0);
  while (true) {
    std::map<ProfileKey, std::int64_t> counts;
    for (std::size_t a = 0; a < m; ++a) {
      for (const auto& [profile, c] : per_class[a][pick[a]]) {
        counts.emplace(ProfileKey{static_cast<std::uint32_t>(a), profile}, c);
      }
    }
    ProfileCounts type(t.alphabet(), t.n(), std::move(counts));
    auto p = exact_type_probability(type, t);
    members.emplace(std::move(type), std::move(p));

    std::size_t a = 0;
    for (; a < m; ++a) {
      if (++pick[a] < per_class[a].size()) break;
      pick[a] = 0;
    }
    if (a == m) break;
  }

  TypeClass out{t, {}};
  out.members.reserve(members.size());
  for (auto& [type, p] : members) out.members.push_back(TypeMember{type, p});
  return out;
}

}  // namespace ldp

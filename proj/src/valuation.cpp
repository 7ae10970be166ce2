#include "graphfair/valuation.hpp"

#include "graphfair/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace graphfair {

AdditiveValuation::AdditiveValuation(std::vector<Rational> values) : values_(std::move(values)) {
  for (auto& q : values_) {
    q.canonicalize();
    if (sgn(q) < 0) throw InputError("additive values must be non-negative");
  }
}

Rational AdditiveValuation::value(std::span<const VertexId> set) const {
  Rational sum = 0;
  for (VertexId v : set) {
    if (v < 0 || static_cast<std::size_t>(v) >= values_.size())
      throw InputError("vertex " + std::to_string(v) + " outside the valuation universe");
    sum += values_[static_cast<std::size_t>(v)];
  }
  return sum;
}

Rational AdditiveValuation::total() const {
  return std::accumulate(values_.begin(), values_.end(), Rational(0));
}

std::optional<std::vector<std::int64_t>> AdditiveValuation::integer_weights() const {
  mpz_class denominator = 1;
  for (const auto& q : values_) mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), q.get_den_mpz_t());
  std::vector<std::int64_t> out;
  out.reserve(values_.size());
  const mpz_class limit = mpz_class(1) << 40;
  mpz_class sum = 0;
  for (const auto& q : values_) {
    const mpz_class w = q.get_num() * (denominator / q.get_den());
    sum += w;
    if (w > limit || sum > limit * 16) return std::nullopt;
    out.push_back(w.get_si());
  }
  return out;
}

Valuation::Valuation(AdditiveValuation v)
    : impl_(std::make_shared<const std::variant<AdditiveValuation, ValuationOracle>>(std::move(v))) {}
Valuation::Valuation(ValuationOracle v)
    : impl_(std::make_shared<const std::variant<AdditiveValuation, ValuationOracle>>(std::move(v))) {}

std::size_t Valuation::universe_size() const {
  return std::visit([](const auto& v) { return v.universe_size(); }, *impl_);
}

Rational Valuation::value(std::span<const VertexId> set) const {
  if (const auto* add = additive()) return add->value(set);
  const auto& orc = std::get<ValuationOracle>(*impl_);
  for (VertexId v : set)
    if (v < 0 || static_cast<std::size_t>(v) >= orc.universe_size())
      throw InputError("vertex " + std::to_string(v) + " outside the valuation universe");
  return orc.value(set);
}

const AdditiveValuation* Valuation::additive() const noexcept { return std::get_if<AdditiveValuation>(impl_.get()); }
const ValuationOracle* Valuation::oracle() const noexcept { return std::get_if<ValuationOracle>(impl_.get()); }

bool Valuation::same_as(const Valuation& other) const {
  if (impl_ == other.impl_) return true;
  const auto *a = additive(), *b = other.additive();
  return a && b && *a == *b;
}

ValuationProfile::ValuationProfile(std::vector<Valuation> agents) : agents_(std::move(agents)) {
  if (agents_.empty()) throw InputError("a profile needs at least one agent");
  for (const auto& v : agents_)
    if (v.universe_size() != agents_.front().universe_size())
      throw InputError("profile valuations disagree on the universe");
}

ValuationProfile ValuationProfile::common(const Valuation& v, std::size_t agents) {
  return ValuationProfile(std::vector<Valuation>(agents, v));
}

bool ValuationProfile::is_common() const {
  return std::all_of(agents_.begin(), agents_.end(), [&](const Valuation& v) { return v.same_as(agents_.front()); });
}

ValuationProfile ValuationProfile::subset(std::span<const std::size_t> agents) const {
  std::vector<Valuation> picked;
  for (auto i : agents) picked.push_back(agents_.at(i));
  return ValuationProfile(std::move(picked));
}

MonotonicityReport check_monotone(const Valuation& v, std::size_t trials, std::uint64_t seed) {
  MonotonicityReport report;
  const std::size_t n = v.universe_size();
  const auto record_negative = [&](const VertexSet& s, const Rational& q) {
    if (sgn(q) < 0) report.violations.push_back({s, {}, q, q});
  };
  const auto compare = [&](const VertexSet& x, const Rational& vx, const VertexSet& y, const Rational& vy) {
    ++report.checks;
    if (vx > vy) report.violations.push_back({x, y, vx, vy});
  };

  const Rational empty_value = v.value(std::span<const VertexId>{});
  if (empty_value != 0) report.violations.push_back({{}, {}, empty_value, empty_value});

  if (n <= kExhaustiveMonotoneUniverse) {
    report.exhaustive = true;
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<Rational> memo(subsets);
    const auto members = [](std::size_t mask) {
      VertexSet s;
      for (int b = 0; mask >> b; ++b)
        if ((mask >> b) & 1) s.push_back(b);
      return s;
    };
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      memo[mask] = v.value(members(mask));
      record_negative(members(mask), memo[mask]);
    }
    for (std::size_t mask = 0; mask < subsets; ++mask)
      for (std::size_t b = 0; b < n; ++b)
        if (!((mask >> b) & 1)) compare(members(mask), memo[mask], members(mask | (std::size_t{1} << b)),
                                        memo[mask | (std::size_t{1} << b)]);
    return report;
  }

  std::mt19937_64 rng(seed);
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t big = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    const std::size_t small = std::uniform_int_distribution<std::size_t>(0, big)(rng);
    VertexSet y(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(big));
    VertexSet x(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(small));
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const Rational vx = v.value(x), vy = v.value(y);
    record_negative(x, vx);
    record_negative(y, vy);
    compare(x, vx, y, vy);
  }
  return report;
}

PrefixSums::PrefixSums(const AdditiveValuation& v, const Enumeration& order) : prefix_(order.size() + 1, 0) {
  for (std::size_t i = 1; i <= order.size(); ++i) prefix_[i] = prefix_[i - 1] + v[order.at(i)];
}

Rational PrefixSums::segment(std::size_t s, std::size_t t) const {
  if (s > t) return 0;
  if (s == 0 || t >= prefix_.size()) throw InputError("prefix-sum segment out of range");
  return prefix_[t] - prefix_[s - 1];
}

ValuationProfile parse_valuations(std::istream& in, const Multigraph& g, std::size_t agents) {
  if (agents == 0) throw InputError("agent count must be positive");
  const std::size_t n = g.vertex_count();
  std::vector<Rational> shared(n, 0);
  std::vector<std::map<VertexId, Rational>> specific(agents);
  std::map<VertexId, bool> shared_seen;

  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;
    const auto where = " at line " + std::to_string(lineno);
    if (words.size() != 3) throw InputError("expected 'agent vertex value'" + where);
    const VertexId v = g.vertex(words[1]);
    const Rational q = parse_rational(words[2]);
    if (sgn(q) < 0) throw InputError("negative value" + where);
    if (words[0] == "*") {
      if (shared_seen[v]) throw InputError("duplicate '*' entry" + where);
      shared_seen[v] = true;
      shared[static_cast<std::size_t>(v)] = q;
      continue;
    }
    std::size_t agent = 0;
    try {
      agent = std::stoul(words[0]);
    } catch (const std::exception&) {
      throw InputError("bad agent index '" + words[0] + "'" + where);
    }
    if (agent < 1 || agent > agents) throw InputError("agent index out of range" + where);
    if (!specific[agent - 1].emplace(v, q).second) throw InputError("duplicate entry" + where);
  }

  std::vector<Valuation> out;
  for (std::size_t i = 0; i < agents; ++i) {
    if (specific[i].empty() && i > 0 && specific[0].empty()) {
      out.push_back(out.front());
      continue;
    }
    std::vector<Rational> values = shared;
    for (const auto& [v, q] : specific[i]) values[static_cast<std::size_t>(v)] = q;
    out.emplace_back(AdditiveValuation(std::move(values)));
  }
  return ValuationProfile(std::move(out));
}

ValuationProfile read_valuation_file(const std::string& path, const Multigraph& g, std::size_t agents) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open valuation file '" + path + "'");
  return parse_valuations(in, g, agents);
}

std::size_t max_agent_in_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open valuation file '" + path + "'");
  std::size_t best = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string agent;
    if (!(tokens >> agent) || agent == "*") continue;
    try {
      best = std::max<std::size_t>(best, std::stoul(agent));
    } catch (const std::exception&) {
      throw InputError("bad agent index '" + agent + "'");
    }
  }
  return best;
}

void write_valuations(std::ostream& out, const Multigraph& g, const ValuationProfile& p) {
  const auto emit = [&](const std::string& agent, const Valuation& v) {
    const auto* add = v.additive();
    if (!add) throw InputError("only additive valuations can be written to a file");
    for (std::size_t x = 0; x < add->universe_size(); ++x)
      if (sgn((*add)[static_cast<VertexId>(x)]) != 0)
        out << agent << ' ' << g.vertex_name(static_cast<VertexId>(x)) << ' '
            << to_string((*add)[static_cast<VertexId>(x)]) << '\n';
  };
  if (p.is_common()) {
    emit("*", p[0]);
    return;
  }
  for (std::size_t i = 0; i < p.agent_count(); ++i) emit(std::to_string(i + 1), p[i]);
}

}  // namespace graphfair

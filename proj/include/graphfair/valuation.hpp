#pragma once

#include "graphfair/multigraph.hpp"
#include "graphfair/rational.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace graphfair {

class AdditiveValuation {
 public:
  AdditiveValuation() = default;
  explicit AdditiveValuation(std::vector<Rational> values);  // rejects negatives

  std::size_t universe_size() const noexcept { return values_.size(); }
  const Rational& operator[](VertexId v) const { return values_.at(static_cast<std::size_t>(v)); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  Rational value(std::span<const VertexId> set) const;
  Rational total() const;

  // Integer weights proportional to the values when they fit comfortably in 64 bits.
  std::optional<std::vector<std::int64_t>> integer_weights() const;

  bool operator==(const AdditiveValuation&) const = default;

 private:
  std::vector<Rational> values_;
};

class ValuationOracle {
 public:
  using Evaluator = std::function<Rational(std::span<const VertexId>)>;

  ValuationOracle(std::size_t universe, Evaluator evaluator, bool declared_monotone = true)
      : universe_(universe), evaluator_(std::move(evaluator)), monotone_(declared_monotone) {}

  std::size_t universe_size() const noexcept { return universe_; }
  bool declared_monotone() const noexcept { return monotone_; }
  Rational value(std::span<const VertexId> set) const { return evaluator_(set); }

 private:
  std::size_t universe_;
  Evaluator evaluator_;
  bool monotone_;
};

// Immutable handle over either representation; cheap to copy.
class Valuation {
 public:
  Valuation(AdditiveValuation v);
  Valuation(ValuationOracle v);

  std::size_t universe_size() const;
  // Throws InputError for vertices outside the universe.
  Rational value(std::span<const VertexId> set) const;
  Rational value(std::initializer_list<VertexId> set) const {
    return value(std::span<const VertexId>(set.begin(), set.size()));
  }
  const AdditiveValuation* additive() const noexcept;
  const ValuationOracle* oracle() const noexcept;
  bool same_as(const Valuation& other) const;

 private:
  std::shared_ptr<const std::variant<AdditiveValuation, ValuationOracle>> impl_;
};

class ValuationProfile {
 public:
  ValuationProfile() = default;
  explicit ValuationProfile(std::vector<Valuation> agents);  // n >= 1, shared universe
  static ValuationProfile common(const Valuation& v, std::size_t agents);

  std::size_t agent_count() const noexcept { return agents_.size(); }
  std::size_t universe_size() const { return agents_.front().universe_size(); }
  const Valuation& operator[](std::size_t agent) const { return agents_.at(agent); }
  const std::vector<Valuation>& agents() const noexcept { return agents_; }
  // True when every agent has the same valuation.
  bool is_common() const;
  ValuationProfile subset(std::span<const std::size_t> agents) const;

 private:
  std::vector<Valuation> agents_;
};

struct MonotonicityViolation {
  VertexSet smaller;
  VertexSet larger;  // empty for a negative value report
  Rational smaller_value;
  Rational larger_value;
};

struct MonotonicityReport {
  std::size_t checks = 0;
  bool exhaustive = false;
  std::vector<MonotonicityViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr std::size_t kExhaustiveMonotoneUniverse = 12;

// Samples chains X subset Y, or checks every single-element extension when the
// universe has at most 12 elements. Deterministic for a given seed.
MonotonicityReport check_monotone(const Valuation& v, std::size_t trials, std::uint64_t seed);

// Cumulative values along an enumeration; positions are 1-based.
class PrefixSums {
 public:
  PrefixSums(const AdditiveValuation& v, const Enumeration& order);
  Rational segment(std::size_t s, std::size_t t) const;  // zero when s > t

 private:
  std::vector<Rational> prefix_;
};

// Lines `agent vertex value`, agents 1-based; `*` sets every agent. Specific
// lines override `*` lines; unlisted pairs are 0.
ValuationProfile parse_valuations(std::istream& in, const Multigraph& g, std::size_t agents);
ValuationProfile read_valuation_file(const std::string& path, const Multigraph& g, std::size_t agents);
// Largest agent index mentioned in a valuation file, or 0 when only `*` lines exist.
std::size_t max_agent_in_file(const std::string& path);
void write_valuations(std::ostream& out, const Multigraph& g, const ValuationProfile& p);

}  // namespace graphfair

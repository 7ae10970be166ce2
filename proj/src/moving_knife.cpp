#include "graphfair/moving_knife.hpp"

#include "graphfair/blocks.hpp"
#include "graphfair/error.hpp"

#include <algorithm>
#include <sstream>

namespace graphfair {

namespace {

// Values of I ∪ P(1..l) and of segments P(s..t) for each agent.
class Scorer {
 public:
  Scorer(const ValuationProfile& profile, const VertexSet& endowment, const Enumeration& p)
      : profile_(profile), endowment_(endowment), p_(p) {
    for (std::size_t i = 0; i < profile.agent_count(); ++i) {
      if (const auto* add = profile[i].additive()) {
        prefix_.emplace_back(PrefixSums(*add, p));
        base_.push_back(add->value(endowment));
      } else {
        prefix_.emplace_back(std::nullopt);
        base_.push_back(0);
      }
    }
  }

  Rational segment(std::size_t i, std::size_t s, std::size_t t) const {
    if (s > t) return 0;
    if (prefix_[i]) return prefix_[i]->segment(s, t);
    return profile_[i].value(p_.segment(s, t));
  }

  Rational left(std::size_t i, std::size_t l) const {
    if (prefix_[i]) return base_[i] + prefix_[i]->segment(1, l);
    VertexSet set = endowment_;
    const auto head = p_.segment(1, l);
    set.insert(set.end(), head.begin(), head.end());
    return profile_[i].value(set);
  }

  std::vector<std::size_t> ties(std::size_t i, std::size_t first, std::size_t last) const {
    std::vector<std::size_t> out;
    for (std::size_t a = first; a <= last; ++a)
      if (segment(i, first, a) >= segment(i, a + 1, last) && segment(i, a, last) >= segment(i, first, a - 1))
        out.push_back(a);
    return out;
  }

 private:
  const ValuationProfile& profile_;
  const VertexSet& endowment_;
  const Enumeration& p_;
  std::vector<std::optional<PrefixSums>> prefix_;
  std::vector<Rational> base_;
};

LumpyAnalysis analyse(const Scorer& sc, std::size_t agents, std::size_t first, std::size_t last) {
  LumpyAnalysis an;
  an.first = first;
  an.last = last;
  for (std::size_t i = 0; i < agents; ++i) {
    an.ties.push_back(sc.ties(i, first, last));
    if (an.ties.back().empty())
      throw InvariantViolation("agent " + std::to_string(i + 1) + " has no lumpy tie over P(" +
                               std::to_string(first) + ".." + std::to_string(last) +
                               "); valuation is not monotone");
    an.leftmost.push_back(an.ties.back().front());
  }
  return an;
}

AgentRole role_of(const std::vector<std::size_t>& ties, std::size_t r) {
  if (std::binary_search(ties.begin(), ties.end(), r)) return AgentRole::Middle;
  return ties.back() < r ? AgentRole::Left : AgentRole::Right;
}

void require_monotone(const ValuationProfile& profile, const KnifeOptions& options) {
  if (!options.reject_nonmonotone) return;
  for (std::size_t i = 0; i < profile.agent_count(); ++i) {
    if (profile[i].additive()) continue;
    const auto report = check_monotone(profile[i], options.monotone_trials, options.monotone_seed + i);
    if (!report.ok())
      throw InputError("valuation of agent " + std::to_string(i + 1) + " is not monotone");
  }
}

std::string set_text(const std::vector<std::size_t>& agents) {
  std::string s = "{";
  for (std::size_t x = 0; x < agents.size(); ++x) s += (x ? "," : "") + std::to_string(agents[x] + 1);
  return s + "}";
}

VertexSet join(VertexSet a, const VertexSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::string to_string(KnifeStep step) {
  switch (step) {
    case KnifeStep::Step1: return "1";
    case KnifeStep::Step2a: return "2a";
    case KnifeStep::Step2b: return "2b";
    case KnifeStep::Step2c: return "2c";
    case KnifeStep::Step3: return "3";
  }
  return "?";
}

std::string KnifeState::dump() const {
  std::ostringstream out;
  out << "l=" << l << " r=" << r << " m=" << order.size() << " |I|=" << endowment.size()
      << " step=" << to_string(step) << " terminated=" << terminated << " suspended=" << suspended;
  for (const auto& t : trace)
    out << "\n  step=" << to_string(t.step) << " l=" << t.l << " r=" << t.r << " shouters=" << set_text(t.shouters);
  return out.str();
}

std::vector<std::size_t> lumpy_ties(const Valuation& v, const Enumeration& p, std::size_t first, std::size_t last) {
  const ValuationProfile single({v});
  const VertexSet none;
  return Scorer(single, none, p).ties(0, first, last);
}

std::vector<std::size_t> lumpy_ties(const Valuation& v, const Enumeration& p) {
  return lumpy_ties(v, p, 1, p.size());
}

LumpyAnalysis median_lumpy_tie(const Enumeration& p, const ValuationProfile& three, std::size_t first,
                               std::size_t last) {
  if (three.agent_count() != 3) throw InputError("median lumpy tie needs exactly three agents");
  if (first > last || last > p.size()) throw InputError("empty enumeration range");
  const VertexSet none;
  LumpyAnalysis an = analyse(Scorer(three, none, p), 3, first, last);
  auto sorted = an.leftmost;
  std::sort(sorted.begin(), sorted.end());
  an.r = sorted[1];
  std::size_t left = 0, middle = 0, right = 0;
  for (const auto& t : an.ties) {
    an.roles.push_back(role_of(t, an.r));
    left += an.roles.back() == AgentRole::Left;
    middle += an.roles.back() == AgentRole::Middle;
    right += an.roles.back() == AgentRole::Right;
  }
  if (left > 1 || right > 1 || middle < 1)
    throw InvariantViolation("median lumpy tie role counts violated; valuation is not monotone");
  return an;
}

LumpyAnalysis median_lumpy_tie(const Enumeration& p, const ValuationProfile& three) {
  return median_lumpy_tie(p, three, 1, p.size());
}

bool is_median_lumpy_tie(std::size_t r, const LumpyAnalysis& an) {
  if (r < an.first || r > an.last || an.ties.size() != 3) return false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::binary_search(an.ties[i].begin(), an.ties[i].end(), r)) continue;
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    const auto low = [&](std::size_t x) { return an.ties[x].front() <= r; };
    const auto high = [&](std::size_t x) { return an.ties[x].back() >= r; };
    if ((low(j) && high(k)) || (low(k) && high(j))) return true;
  }
  return false;
}

PairSplit lumpy_allocation(std::array<std::size_t, 2> pair, std::size_t r, const Enumeration& p,
                           const ValuationProfile& three, std::size_t first, std::size_t last) {
  const VertexSet none;
  const Scorer sc(three, none, p);
  const auto ti = sc.ties(pair[0], first, last), tk = sc.ties(pair[1], first, last);
  if (ti.empty() || tk.empty()) throw InvariantViolation("lumpy allocation: agent without a lumpy tie");
  std::size_t i = pair[0], k = pair[1];
  auto ties_i = ti;
  if (tk.front() < ti.front()) {
    std::swap(i, k);
    ties_i = tk;
  }
  const VertexSet before = p.segment(first, r - 1), after = p.segment(r + 1, last);
  const VertexSet with_r_after = p.segment(r, last), with_r_before = p.segment(first, r);
  switch (role_of(ties_i, r)) {
    case AgentRole::Left:
      return {{i, k}, {before, with_r_after}};
    case AgentRole::Middle:
      if (sc.segment(k, first, r - 1) >= sc.segment(k, r + 1, last)) return {{i, k}, {with_r_after, before}};
      return {{i, k}, {with_r_before, after}};
    case AgentRole::Right:
      break;
  }
  throw InvariantViolation("lumpy allocation: v_r is not a median lumpy tie for this pair");
}

KnifeRun a_discrete(const VertexSet& endowment, const Enumeration& p, std::size_t r0,
                    const ValuationProfile& three, const KnifeOptions& options) {
  if (three.agent_count() != 3) throw InputError("a_discrete needs exactly three agents");
  const std::size_t m = p.size();
  if (m == 0 || r0 < 1 || r0 > m) throw InputError("a_discrete: r0 outside 1..m");
  require_monotone(three, options);

  const Scorer sc(three, endowment, p);
  KnifeRun run;
  KnifeState& st = run.state;
  st.endowment = endowment;
  st.order = p;
  st.l = 0;
  st.r = r0;

  const auto fail = [&](const std::string& what) -> void {
    throw InvariantViolation("a_discrete: " + what + "\n" + st.dump());
  };
  const auto median_over = [&](std::size_t first) {
    return first <= m && is_median_lumpy_tie(st.r, analyse(sc, 3, first, m));
  };

  bool strong_start = true;
  if (options.verify) {
    if (!median_over(1)) throw InputError("a_discrete: v_r0 is not a median lumpy tie over P");
    for (std::size_t i = 0; i < 3; ++i) {
      const Rational own = sc.left(i, 0), lhs = sc.segment(i, 1, r0 - 1), rhs = sc.segment(i, r0 + 1, m);
      if (own > lhs && own > rhs)
        throw InputError("a_discrete: agent " + std::to_string(i + 1) + " strictly prefers I to both sides");
      if (own >= lhs && own >= rhs) strong_start = false;
    }
  }
  const auto lemma = [&](bool holds, const std::string& what) {
    if (!options.verify || holds) return;
    if (strong_start) fail("lemma violated: " + what);
    st.lemma_notes.push_back(what + " at l=" + std::to_string(st.l) + " r=" + std::to_string(st.r));
  };

  // Shouters weakly prefer L to both M = P(mid_from..r-1) and R = P(r+1..m).
  const auto shouters = [&](std::size_t mid_from) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 3; ++i) {
      const Rational own = sc.left(i, st.l);
      if (own >= sc.segment(i, mid_from, st.r - 1) && own >= sc.segment(i, st.r + 1, m)) out.push_back(i);
    }
    return out;
  };
  const auto record = [&](KnifeStep step, const std::vector<std::size_t>& who, std::size_t mid_from) {
    st.step = step;
    st.left = join(endowment, p.segment(1, st.l));
    st.middle = p.segment(mid_from, st.r - 1);
    st.right = p.segment(st.r + 1, m);
    st.trace.push_back({options.stage, step, st.l, st.r, who});
  };
  const auto contains = [](const std::vector<std::size_t>& v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };

  std::vector<VertexSet> bundles(3);
  const auto finish_form_two = [&](std::size_t s, std::size_t s_left) {
    const std::size_t c = 3 - s - s_left;
    const VertexSet near = p.segment(st.l + 1, st.r - 1), far = p.segment(st.r, m);
    const bool takes_near = sc.segment(c, st.l + 1, st.r - 1) >= sc.segment(c, st.r, m);
    bundles[s_left] = join(endowment, p.segment(1, st.l));
    bundles[c] = takes_near ? near : far;
    bundles[s] = takes_near ? far : near;
    st.form = KnifeForm::II;
    st.hidden = {p.at(st.l + 1), p.at(st.r)};
  };

  if (options.suspend_at && *options.suspend_at == 0) {
    st.suspended = true;
    return run;
  }

  std::vector<std::size_t> previous;
  enum class Next { One, Two, Three, Done } next = Next::One;
  while (next != Next::Done) {
    if (st.l >= st.r || st.r > m) fail("index order l < r <= m broken");
    if (next == Next::One) {
      const auto who = shouters(st.l + 2);
      record(KnifeStep::Step1, who, st.l + 2);
      if (who.size() >= 2) {
        const auto an = analyse(sc, 3, st.l + 1, m);
        std::optional<std::size_t> s;
        for (std::size_t i : who)
          if (!s && std::binary_search(an.ties[i].begin(), an.ties[i].end(), st.r)) s = i;
        if (!s) fail("no shouter is a middle agent over P(l+1..m)");
        std::size_t s_left = 3;
        for (std::size_t i : who)
          if (i != *s && s_left == 3) s_left = i;
        const Rational lv = sc.left(*s, st.l), mv = sc.segment(*s, st.l + 2, st.r - 1);
        const Rational near = sc.segment(*s, st.l + 1, st.r - 1), far = sc.segment(*s, st.r, m),
                       rv = sc.segment(*s, st.r + 1, m);
        lemma(near > lv, "step 1: v(v_{l+1} + M) > v(L) for the middle shouter");
        lemma(lv >= mv, "step 1: v(L) >= v(M) for the middle shouter");
        lemma(far >= near, "step 1: v(v_r + R) >= v(v_{l+1} + M) for the middle shouter");
        lemma(near > rv, "step 1: v(v_{l+1} + M) > v(R) for the middle shouter");
        finish_form_two(*s, s_left);
        next = Next::Done;
        continue;
      }
      previous = who;
      next = Next::Two;
    } else if (next == Next::Two) {
      bool median = median_over(st.l + 2);
      if (!median) {
        if (st.r + 1 > m) fail("right knife ran past v_m");
        ++st.r;
        median = median_over(st.l + 2);
      }
      const auto who = shouters(st.l + 2);
      if (who.size() >= 2) {
        record(KnifeStep::Step2a, who, st.l + 2);
        std::optional<std::size_t> s;
        for (std::size_t i : who)
          if (!s && !contains(previous, i)) s = i;
        if (!s) fail("step 2a without a new shouter");
        std::size_t s_left = 3;
        for (std::size_t i : who)
          if (i != *s && contains(previous, i) && s_left == 3) s_left = i;
        for (std::size_t i : who)
          if (i != *s && s_left == 3) s_left = i;
        const Rational lv = sc.left(*s, st.l);
        lemma(sc.segment(*s, st.r, m) > lv, "step 2a: v(v_r + R) > v(L) for the new shouter");
        lemma(lv >= sc.segment(*s, st.l + 2, st.r - 1), "step 2a: v(L) >= v(M) for the new shouter");
        finish_form_two(*s, s_left);
        next = Next::Done;
      } else if (median) {
        record(KnifeStep::Step2b, who, st.l + 2);
        previous = who;
        next = Next::Three;
      } else {
        record(KnifeStep::Step2c, who, st.l + 2);
        previous = who;
      }
    } else {
      ++st.l;
      if (st.l >= st.r) fail("left knife reached the right knife");
      if (options.verify && !median_over(st.l + 1)) fail("v_r is not a median lumpy tie over P(l+1..m)");
      const auto who = shouters(st.l + 1);
      record(KnifeStep::Step3, who, st.l + 1);
      if (who.empty()) {
        if (options.suspend_at && st.l == *options.suspend_at) {
          st.suspended = true;
          return run;
        }
        next = Next::One;
        continue;
      }
      std::size_t s_left = 3;
      for (std::size_t i : who)
        if (contains(previous, i) && s_left == 3) s_left = i;
      if (s_left == 3) s_left = who.front();
      std::array<std::size_t, 2> pair{};
      for (std::size_t i = 0, x = 0; i < 3; ++i)
        if (i != s_left) pair[x++] = i;
      const PairSplit split = lumpy_allocation(pair, st.r, p, three, st.l + 1, m);
      bundles[s_left] = join(endowment, p.segment(1, st.l));
      bundles[split.agents[0]] = split.bundles[0];
      bundles[split.agents[1]] = split.bundles[1];
      st.form = KnifeForm::I;
      st.hidden = {p.at(st.l), p.at(st.r)};
      next = Next::Done;
    }
  }

  st.terminated = true;
  Allocation result(std::move(bundles));
  if (options.verify) {
    const VertexSet hidden{st.hidden[0], st.hidden[1]};
    for (std::size_t i = 0; i < 3; ++i) {
      const Rational own = three[i].value(result.bundles[i]);
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == j) continue;
        VertexSet visible;
        for (VertexId v : result.bundles[j])
          if (v != hidden[0] && v != hidden[1]) visible.push_back(v);
        if (three[i].value(visible) > own) fail("result is not EF up to the hiding pair");
      }
    }
  }
  run.allocation = std::move(result);
  return run;
}

LipsRun lips_ef1_three(const Multigraph& g, const ValuationProfile& three, const KnifeOptions& options) {
  if (three.agent_count() != 3) throw InputError("lips procedure needs exactly three agents");
  if (three.universe_size() != g.vertex_count()) throw InputError("valuation universe differs from the graph");
  const auto lab = lips_labeling(g);
  if (!lab) throw InputError("graph '" + g.name() + "' is not in the lips class");
  const LipsStagePlan plan = lips_stage_plan(g, *lab);
  require_monotone(three, options);

  KnifeOptions opts = options;
  opts.reject_nonmonotone = false;
  LipsRun out;

  const auto finish = [&](KnifeRun&& run, std::size_t stage) {
    out.trace.insert(out.trace.end(), run.state.trace.begin(), run.state.trace.end());
    out.stage = stage;
    out.state = std::move(run.state);
    if (!run.allocation) return false;
    out.allocation = std::move(*run.allocation);
    if (!is_contiguous(g, out.allocation) || !is_efk_outer(g, out.allocation, three, 1))
      throw InvariantViolation("lips procedure produced an allocation that is not contiguous EF1_outer\n" +
                               out.state.dump());
    return true;
  };

  // Stage 1: no endowment, P = X1 . Y1.
  const Enumeration p1 = plan.x1.concat(plan.y1);
  opts.stage = 1;
  opts.suspend_at = plan.x1.size();
  if (finish(a_discrete({}, p1, median_lumpy_tie(p1, three).r, three, opts), 1)) return out;

  // Stage 2: endowment V(X1), P = X2 . Y2, same v_r.
  VertexId knife = out.state.order.at(out.state.r);
  VertexSet endowment = plan.x1.order();
  const Enumeration p2 = plan.x2.concat(plan.y2);
  opts.stage = 2;
  opts.suspend_at = plan.x2.size();
  if (finish(a_discrete(endowment, p2, *p2.position_of(knife), three, opts), 2)) return out;

  // Stage 3: walk the top-right cycle, direction chosen by where v_r sits in Y2.
  knife = out.state.order.at(out.state.r);
  endowment.insert(endowment.end(), plan.x2.order().begin(), plan.x2.order().end());
  const bool past_c1 = *plan.y2.position_of(knife) > *plan.y2.position_of(lab->c1);
  const Enumeration& p3 = past_c1 ? plan.x3 : plan.x3_alt;
  opts.stage = 3;
  opts.suspend_at.reset();
  if (finish(a_discrete(endowment, p3, *p3.position_of(knife), three, opts), 3)) return out;
  throw InvariantViolation("lips procedure did not terminate in stage 3\n" + out.state.dump());
}

std::optional<Allocation> two_agent_ef1(const Multigraph& g, const ValuationProfile& two,
                                        const KnifeOptions& options) {
  if (two.agent_count() != 2) throw InputError("cut-and-choose needs exactly two agents");
  if (two.universe_size() != g.vertex_count()) throw InputError("valuation universe differs from the graph");
  require_monotone(two, options);
  const auto order = bipolar_numbering(g);
  if (!order) return std::nullopt;
  if (order->empty()) return Allocation(std::vector<VertexSet>(2));

  const auto ties = lumpy_ties(two[0], *order);
  if (ties.empty()) throw InvariantViolation("agent 1 has no lumpy tie; valuation is not monotone");
  const std::size_t r = ties.front();
  const VertexSet before = order->before(r), after = order->after(r);
  const bool chooser_takes_before = two[1].value(before) >= two[1].value(after);
  Allocation a({chooser_takes_before ? order->segment(r, order->size()) : order->segment(1, r),
                chooser_takes_before ? before : after});
  if (!is_contiguous(g, a) || !is_efk_outer(g, a, two, 1))
    throw InvariantViolation("cut-and-choose produced an allocation that is not contiguous EF1_outer");
  return a;
}

}  // namespace graphfair

#include "nerb/attack.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nerb/error.hpp"

namespace nerb {

namespace {

constexpr std::size_t kAttemptFactor = 100;  // rejection-sampling cap

struct StrategyInfo {
  AttackStrategy strategy;
  const char* name;
  bool deterministic;
  bool labels;
};

constexpr StrategyInfo kStrategies[kNumStrategies] = {
    {AttackStrategy::kAddRand, "add_rand", false, false},
    {AttackStrategy::kAddDeg, "add_deg", false, false},
    {AttackStrategy::kAddPa, "add_pa", false, false},
    {AttackStrategy::kAddDa, "add_da", false, false},
    {AttackStrategy::kAddDd, "add_dd", false, false},
    {AttackStrategy::kAddCe, "add_ce", false, true},
    {AttackStrategy::kDelRand, "del_rand", false, false},
    {AttackStrategy::kDelDeg, "del_deg", true, false},
    {AttackStrategy::kDelPa, "del_pa", true, false},
    {AttackStrategy::kDelDa, "del_da", true, false},
    {AttackStrategy::kDelDd, "del_dd", true, false},
    {AttackStrategy::kDelDi, "del_di", false, true},
    {AttackStrategy::kRewRand, "rew_rand", false, false},
    {AttackStrategy::kDice, "dice", false, true},
};

const StrategyInfo& info(AttackStrategy s) {
  for (const auto& i : kStrategies) {
    if (i.strategy == s) return i;
  }
  throw std::invalid_argument("unknown attack strategy");
}

}  // namespace

const char* to_string(AttackStrategy s) { return info(s).name; }

std::optional<AttackStrategy> attack_strategy_from_string(
    const std::string& name) {
  for (const auto& i : kStrategies) {
    if (name == i.name) return i.strategy;
  }
  return std::nullopt;
}

std::vector<AttackStrategy> all_strategies() {
  std::vector<AttackStrategy> out;
  for (const auto& i : kStrategies) out.push_back(i.strategy);
  return out;
}

bool is_deterministic(AttackStrategy s) { return info(s).deterministic; }
bool requires_labels(AttackStrategy s) { return info(s).labels; }

bool is_deletion(AttackStrategy s) {
  switch (s) {
    case AttackStrategy::kDelRand:
    case AttackStrategy::kDelDeg:
    case AttackStrategy::kDelPa:
    case AttackStrategy::kDelDa:
    case AttackStrategy::kDelDd:
    case AttackStrategy::kDelDi:
      return true;
    default:
      return false;
  }
}

bool is_addition(AttackStrategy s) {
  switch (s) {
    case AttackStrategy::kAddRand:
    case AttackStrategy::kAddDeg:
    case AttackStrategy::kAddPa:
    case AttackStrategy::kAddDa:
    case AttackStrategy::kAddDd:
    case AttackStrategy::kAddCe:
      return true;
    default:
      return false;
  }
}

std::size_t requested_changes(double budget, std::size_t num_edges) {
  return static_cast<std::size_t>(
      std::floor(budget * static_cast<double>(num_edges) + 0.5));
}

std::string AttackLog::to_json() const {
  std::ostringstream out;
  out << "{\"strategy\":\"" << to_string(strategy) << "\",\"seed\":" << seed
      << ",\"budget\":" << budget << ",\"requested\":" << requested_changes
      << ",\"achieved\":" << achieved_changes << ",\"added\":[";
  for (std::size_t i = 0; i < added.size(); ++i) {
    if (i) out << ',';
    out << '[' << added[i].u << ',' << added[i].v << ']';
  }
  out << "],\"removed\":[";
  for (std::size_t i = 0; i < removed.size(); ++i) {
    if (i) out << ',';
    out << '[' << removed[i].u << ',' << removed[i].v << ']';
  }
  out << "]";
  if (!shortfall_reason.empty()) {
    out << ",\"shortfall\":\"" << shortfall_reason << "\"";
  }
  out << "}";
  return out.str();
}

namespace {

// ---------------------------------------------------------------------------
// shared helpers

struct AttackCtx {
  Graph& g;                 // graph being mutated
  const Graph& original;    // pre-attack graph
  const LabelMap* labels;
  const AttackSpec& spec;
  AttackLog& log;
  Rng& rng;
  std::size_t attempts = 0;
  std::size_t attempt_cap = 0;

  bool attempts_left() { return attempts++ < attempt_cap; }
};

void note_shortfall(AttackCtx& ctx, const std::string& reason) {
  if (ctx.log.shortfall_reason.empty()) ctx.log.shortfall_reason = reason;
}

bool deletable(const AttackCtx& ctx, Edge e, bool degree_condition) {
  if (degree_condition) {
    const Graph& dg = ctx.spec.degree_check_on_original ? ctx.original : ctx.g;
    if (dg.degree(e.u) < 2 || dg.degree(e.v) < 2) return false;
  }
  if (!ctx.spec.allow_disconnect && is_disconnecting(ctx.g, e)) return false;
  return true;
}

// Uniform choice among edges of the current graph passing `eligible`, by
// rejection sampling with an exhaustive fallback once the cap is hit.
template <typename Pred>
std::optional<Edge> pick_edge(AttackCtx& ctx, Pred eligible) {
  const auto& edges = ctx.g.edges();
  if (edges.empty()) return std::nullopt;
  while (ctx.attempts_left()) {
    Edge e = edges[ctx.rng.uniform_index(edges.size())];
    if (eligible(e)) return e;
  }
  std::vector<Edge> candidates;
  for (const Edge& e : edges) {
    if (eligible(e)) candidates.push_back(e);
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[ctx.rng.uniform_index(candidates.size())];
}

// Uniform choice among node pairs passing `eligible` (which must imply
// non-edge and no self-loop), same rejection + fallback scheme.
template <typename Pred>
std::optional<Edge> pick_pair(AttackCtx& ctx, Pred eligible) {
  const std::size_t n = ctx.g.num_nodes();
  if (n < 2) return std::nullopt;
  while (ctx.attempts_left()) {
    NodeId a = static_cast<NodeId>(ctx.rng.uniform_index(n));
    NodeId b = static_cast<NodeId>(ctx.rng.uniform_index(n));
    if (a == b) continue;
    Edge e = make_edge(a, b);
    if (eligible(e)) return e;
  }
  std::vector<Edge> candidates;
  for (NodeId a = 0; a + 1 < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      Edge e{a, b};
      if (eligible(e)) candidates.push_back(e);
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[ctx.rng.uniform_index(candidates.size())];
}

// ---------------------------------------------------------------------------
// additions

void add_random(AttackCtx& ctx, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    auto e = pick_pair(ctx, [&](Edge e) { return !ctx.g.has_edge(e.u, e.v); });
    if (!e) {
      note_shortfall(ctx, "no non-edges left");
      return;
    }
    ctx.g.add_edge(e->u, e->v);
    ctx.log.added.push_back(*e);
  }
}

// add_deg: source uniform, destination ~ degree.
// add_pa: both source and destination ~ degree.
void add_degree_based(AttackCtx& ctx, std::size_t count, bool pa) {
  const std::size_t n = ctx.g.num_nodes();
  if (n < 2) {
    note_shortfall(ctx, "fewer than two nodes");
    return;
  }
  std::vector<double> w(n);
  for (std::size_t k = 0; k < count; ++k) {
    bool done = false;
    while (!done && ctx.attempts_left()) {
      // degrees refreshed on the current graph each attempt
      double total = 0.0;
      for (NodeId v = 0; v < n; ++v) {
        w[v] = static_cast<double>(ctx.g.degree(v));
        total += w[v];
      }
      if (total <= 0.0) break;
      NodeId src = pa ? static_cast<NodeId>(ctx.rng.weighted_index(w))
                      : static_cast<NodeId>(ctx.rng.uniform_index(n));
      NodeId dst = static_cast<NodeId>(ctx.rng.weighted_index(w));
      if (src == dst || ctx.g.has_edge(src, dst)) continue;
      ctx.g.add_edge(src, dst);
      ctx.log.added.push_back(make_edge(src, dst));
      done = true;
    }
    if (!done) {
      note_shortfall(ctx, "degree-based sampling exhausted attempt cap");
      return;
    }
  }
}

// add_da / add_dd. Source ~ |d_i - mu|; destination ~ 1/|d_i - d_j| for the
// assortative variant (equal degrees get twice the max finite weight) and
// ~ |d_i - d_j| for the disassortative one.
void add_assortative(AttackCtx& ctx, std::size_t count, bool assortative) {
  const std::size_t n = ctx.g.num_nodes();
  EdgeDegreeMoments mom =
      edge_degree_moments(ctx.original, ctx.spec.moment_mode);
  if (mom.sigma <= 0.0) {
    throw UndefinedStatistic(
        "assortativity attack refused: sigma = 0 (all endpoint degrees equal)");
  }
  std::vector<double> ws(n), wd(n);
  for (std::size_t k = 0; k < count; ++k) {
    bool done = false;
    while (!done && ctx.attempts_left()) {
      double total = 0.0;
      for (NodeId v = 0; v < n; ++v) {
        ws[v] = std::abs(static_cast<double>(ctx.g.degree(v)) - mom.mu);
        total += ws[v];
      }
      if (total <= 0.0) break;
      NodeId src = static_cast<NodeId>(ctx.rng.weighted_index(ws));
      const double di = static_cast<double>(ctx.g.degree(src));
      double max_finite = 0.0;
      double wtotal = 0.0;
      std::size_t equal_candidates = 0;
      for (NodeId j = 0; j < n; ++j) {
        if (j == src || ctx.g.has_edge(src, j)) {
          wd[j] = 0.0;
          continue;
        }
        const double gap = std::abs(di - static_cast<double>(ctx.g.degree(j)));
        if (assortative) {
          if (gap == 0.0) {
            wd[j] = -1.0;  // placeholder, resolved below
            ++equal_candidates;
          } else {
            wd[j] = 1.0 / gap;
            max_finite = std::max(max_finite, wd[j]);
          }
        } else {
          wd[j] = gap;
        }
      }
      if (assortative && equal_candidates > 0) {
        const double cap = max_finite > 0.0 ? 2.0 * max_finite : 1.0;
        for (NodeId j = 0; j < n; ++j) {
          if (wd[j] < 0.0) wd[j] = cap;
        }
      }
      for (NodeId j = 0; j < n; ++j) wtotal += wd[j];
      if (wtotal <= 0.0) continue;  // no destination for this source
      NodeId dst = static_cast<NodeId>(ctx.rng.weighted_index(wd));
      ctx.g.add_edge(src, dst);
      ctx.log.added.push_back(make_edge(src, dst));
      done = true;
    }
    if (!done) {
      note_shortfall(ctx, "assortativity sampling exhausted attempt cap");
      return;
    }
  }
}

bool cross_label(const LabelMap& labels, Edge e) {
  return labels.has_label(e.u) && labels.has_label(e.v) &&
         labels.label(e.u) != labels.label(e.v);
}

// One add_ce insertion; returns the edge or nullopt on exhaustion.
std::optional<Edge> add_cross_label_one(AttackCtx& ctx) {
  auto e = pick_pair(ctx, [&](Edge e) {
    return !ctx.g.has_edge(e.u, e.v) && cross_label(*ctx.labels, e);
  });
  if (e) {
    ctx.g.add_edge(e->u, e->v);
    ctx.log.added.push_back(*e);
  }
  return e;
}

void add_cross_label(AttackCtx& ctx, std::size_t count) {
  if (ctx.labels->num_classes() < 2) {
    throw std::invalid_argument(
        "add_ce requires at least two distinct labels");
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!add_cross_label_one(ctx)) {
      note_shortfall(ctx, "no cross-label non-edges left");
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// deletions

std::optional<Edge> delete_random_one(AttackCtx& ctx) {
  auto e = pick_edge(ctx, [&](Edge e) { return deletable(ctx, e, true); });
  if (e) {
    ctx.g.remove_edge(e->u, e->v);
    ctx.log.removed.push_back(*e);
  }
  return e;
}

void delete_random(AttackCtx& ctx, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    if (!delete_random_one(ctx)) {
      note_shortfall(ctx, "no eligible edges left for deletion");
      return;
    }
  }
}

std::optional<Edge> delete_intra_label_one(AttackCtx& ctx) {
  auto e = pick_edge(ctx, [&](Edge e) {
    return ctx.labels->has_label(e.u) && ctx.labels->has_label(e.v) &&
           ctx.labels->label(e.u) == ctx.labels->label(e.v) &&
           deletable(ctx, e, false);
  });
  if (e) {
    ctx.g.remove_edge(e->u, e->v);
    ctx.log.removed.push_back(*e);
  }
  return e;
}

void delete_intra_label(AttackCtx& ctx, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    if (!delete_intra_label_one(ctx)) {
      note_shortfall(ctx, "no eligible intra-label edges left");
      return;
    }
  }
}

// Scores computed once on the pre-attack graph; ties broken by canonical
// edge order so the result is a pure function of the input.
void delete_ranked(AttackCtx& ctx, std::size_t count, AttackStrategy s) {
  struct Scored {
    double score;
    Edge e;
  };
  const Graph& g0 = ctx.original;
  double mu = 0.0, sigma = 0.0;
  if (s == AttackStrategy::kDelDa || s == AttackStrategy::kDelDd) {
    EdgeDegreeMoments mom = edge_degree_moments(g0, ctx.spec.moment_mode);
    if (mom.sigma <= 0.0) {
      throw UndefinedStatistic(
          "ranked assortativity deletion refused: sigma = 0");
    }
    mu = mom.mu;
    sigma = mom.sigma;
  }
  std::vector<Scored> ranked;
  ranked.reserve(g0.num_edges());
  for (const Edge& e : g0.edges()) {
    const double di = static_cast<double>(g0.degree(e.u));
    const double dj = static_cast<double>(g0.degree(e.v));
    double score = 0.0;
    switch (s) {
      case AttackStrategy::kDelDeg:
        score = di + dj;
        break;
      case AttackStrategy::kDelPa:
        score = di * dj;
        break;
      case AttackStrategy::kDelDa:
        score = edge_assortativity_score(g0, e, mu, sigma);
        break;
      case AttackStrategy::kDelDd:
        score = -edge_assortativity_score(g0, e, mu, sigma);
        break;
      default:
        throw std::logic_error("delete_ranked: not a ranked strategy");
    }
    ranked.push_back({score, e});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.e < b.e;
  });
  for (const Scored& c : ranked) {
    if (ctx.log.removed.size() >= count) break;
    if (!deletable(ctx, c.e, false)) continue;  // skip, do not abort
    ctx.g.remove_edge(c.e.u, c.e.v);
    ctx.log.removed.push_back(c.e);
  }
  if (ctx.log.removed.size() < count) {
    note_shortfall(ctx, "ranking exhausted before budget met");
  }
}

// ---------------------------------------------------------------------------
// rewiring and DICE

void rewire_random(AttackCtx& ctx, std::size_t count) {
  const std::size_t n = ctx.g.num_nodes();
  std::size_t rewired = 0;
  while (rewired < count) {
    auto removed = pick_edge(ctx, [&](Edge e) { return deletable(ctx, e, true); });
    if (!removed) {
      note_shortfall(ctx, "no eligible edges left to rewire");
      break;
    }
    ctx.g.remove_edge(removed->u, removed->v);
    // the kept endpoint v_i is a fair pick between the two ends
    NodeId i = ctx.rng.coin() ? removed->u : removed->v;
    NodeId j = (i == removed->u) ? removed->v : removed->u;
    std::optional<NodeId> k;
    while (ctx.attempts_left()) {
      NodeId cand = static_cast<NodeId>(ctx.rng.uniform_index(n));
      if (cand == i || cand == j || ctx.g.has_edge(i, cand)) continue;
      k = cand;
      break;
    }
    if (!k) {  // exhaustive fallback
      for (NodeId cand = 0; cand < n; ++cand) {
        if (cand != i && cand != j && !ctx.g.has_edge(i, cand)) {
          k = cand;
          break;
        }
      }
    }
    if (!k) {
      ctx.g.add_edge(removed->u, removed->v);  // roll back
      note_shortfall(ctx, "no replacement endpoint available");
      break;
    }
    ctx.g.add_edge(i, *k);
    ctx.log.removed.push_back(*removed);
    ctx.log.added.push_back(make_edge(i, *k));
    ++rewired;
  }
  ctx.log.achieved_changes = rewired;
}

void dice(AttackCtx& ctx, std::size_t count) {
  if (ctx.labels->num_classes() < 2) {
    throw std::invalid_argument("dice requires at least two distinct labels");
  }
  std::size_t ops = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const bool remove_first = ctx.rng.coin();
    bool ok = false;
    if (remove_first) {
      ok = delete_intra_label_one(ctx).has_value() ||
           add_cross_label_one(ctx).has_value();
    } else {
      ok = add_cross_label_one(ctx).has_value() ||
           delete_intra_label_one(ctx).has_value();
    }
    if (!ok) {
      note_shortfall(ctx, "both DICE actions exhausted");
      break;
    }
    ++ops;
  }
  ctx.log.achieved_changes = ops;
}

void validate(const Graph& g, const LabelMap* labels, const AttackSpec& spec) {
  if (spec.budget < 0.0) {
    throw std::invalid_argument("attack budget must be non-negative");
  }
  const bool bounded = is_deletion(spec.strategy) ||
                       spec.strategy == AttackStrategy::kRewRand ||
                       spec.strategy == AttackStrategy::kDice;
  if (bounded && spec.budget >= 1.0) {
    throw std::invalid_argument(
        "deletion/rewire budgets must be below 1.0 (fraction of M)");
  }
  if (requires_labels(spec.strategy)) {
    if (labels == nullptr || labels->size() != g.num_nodes()) {
      throw std::invalid_argument(
          std::string(to_string(spec.strategy)) + " requires node labels");
    }
  }
}

}  // namespace

std::pair<Graph, AttackLog> apply_attack(const Graph& g,
                                         const LabelMap* labels,
                                         const AttackSpec& spec) {
  validate(g, labels, spec);
  Graph attacked = g;
  AttackLog log;
  log.strategy = spec.strategy;
  log.seed = spec.seed;
  log.budget = spec.budget;
  log.requested_changes = requested_changes(spec.budget, g.num_edges());

  // Deterministic strategies must not depend on the seed; they still get an
  // RNG object, but never draw from it.
  Rng rng(is_deterministic(spec.strategy) ? 0 : spec.seed);
  AttackCtx ctx{attacked, g, labels, spec, log, rng};
  ctx.attempt_cap = kAttemptFactor * std::max<std::size_t>(
                                         log.requested_changes, 1);

  const std::size_t count = log.requested_changes;
  if (count > 0) {
    switch (spec.strategy) {
      case AttackStrategy::kAddRand:
        add_random(ctx, count);
        break;
      case AttackStrategy::kAddDeg:
        add_degree_based(ctx, count, /*pa=*/false);
        break;
      case AttackStrategy::kAddPa:
        add_degree_based(ctx, count, /*pa=*/true);
        break;
      case AttackStrategy::kAddDa:
        add_assortative(ctx, count, /*assortative=*/true);
        break;
      case AttackStrategy::kAddDd:
        add_assortative(ctx, count, /*assortative=*/false);
        break;
      case AttackStrategy::kAddCe:
        add_cross_label(ctx, count);
        break;
      case AttackStrategy::kDelRand:
        delete_random(ctx, count);
        break;
      case AttackStrategy::kDelDeg:
      case AttackStrategy::kDelPa:
      case AttackStrategy::kDelDa:
      case AttackStrategy::kDelDd:
        delete_ranked(ctx, count, spec.strategy);
        break;
      case AttackStrategy::kDelDi:
        delete_intra_label(ctx, count);
        break;
      case AttackStrategy::kRewRand:
        rewire_random(ctx, count);
        break;
      case AttackStrategy::kDice:
        dice(ctx, count);
        break;
    }
  }
  if (spec.strategy != AttackStrategy::kRewRand &&
      spec.strategy != AttackStrategy::kDice) {
    log.achieved_changes = log.added.size() + log.removed.size();
  }
  return {std::move(attacked), std::move(log)};
}

}  // namespace nerb

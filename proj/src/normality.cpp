#include "causal/normality.hpp"

#include <map>

#include "causal/error.hpp"

namespace causal {

struct NormalityOrder::Closure {
  std::map<World, std::size_t> index;
  std::vector<std::vector<bool>> reach;  // reach[i][j]: world i ⪰ world j
};

NormalityOrder NormalityOrder::flat() { return NormalityOrder{}; }

NormalityOrder NormalityOrder::ranked(RankFn rank) {
  NormalityOrder o;
  o.kind_ = Kind::Rank;
  o.rank_ = std::move(rank);
  return o;
}

NormalityOrder NormalityOrder::from_relation(const std::vector<std::pair<World, World>>& pairs) {
  auto c = std::make_shared<Closure>();
  for (const auto& [a, b] : pairs) {
    c->index.emplace(a, c->index.size());
    c->index.emplace(b, c->index.size());
  }
  const std::size_t n = c->index.size();
  c->reach.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) c->reach[i][i] = true;
  for (const auto& [a, b] : pairs) c->reach[c->index.at(a)][c->index.at(b)] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!c->reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (c->reach[k][j]) c->reach[i][j] = true;
      }
    }
  }
  NormalityOrder o;
  o.kind_ = Kind::Relation;
  o.closure_ = std::move(c);
  return o;
}

bool NormalityOrder::at_least_as_normal(const World& a, const World& b) const {
  switch (kind_) {
    case Kind::Flat:
      return true;
    case Kind::Rank:
      return rank_(a) <= rank_(b);
    case Kind::Relation: {
      if (a == b) return true;
      auto ia = closure_->index.find(a);
      auto ib = closure_->index.find(b);
      if (ia == closure_->index.end() || ib == closure_->index.end()) return false;
      return closure_->reach[ia->second][ib->second];
    }
  }
  return false;
}

std::optional<long> NormalityOrder::rank(const World& w) const {
  switch (kind_) {
    case Kind::Flat:
      return 0;
    case Kind::Rank:
      return rank_(w);
    case Kind::Relation:
      return std::nullopt;
  }
  return std::nullopt;
}

void NormalityOrder::validate(const Signature& sig) const {
  if (kind_ != Kind::Relation) return;
  for (const auto& [w, _] : closure_->index) {
    if (w.values.size() != sig.endogenous_count()) throw InvalidModel("normality relation lists a partial world");
    for (VarIndex i = 0; i < w.values.size(); ++i) {
      if (!sig.endogenous_range(i).contains(w.values[i])) {
        throw ValueOutOfRange("normality relation lists a world outside the model's ranges");
      }
    }
  }
}

}  // namespace causal

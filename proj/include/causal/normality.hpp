#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "causal/model.hpp"

namespace causal {

// Reflexive, transitive "at least as normal as" relation on worlds.
// Two representations: a rank function (lower rank = more normal, which
// always yields a total preorder) or an explicit relation over listed worlds
// (any partial preorder; unlisted worlds are only related to themselves).
class NormalityOrder {
 public:
  using RankFn = std::function<long(const World&)>;

  // Every world is exactly as normal as every other.
  static NormalityOrder flat();
  static NormalityOrder ranked(RankFn rank);
  // Takes the reflexive-transitive closure of the given (more-or-equally
  // normal, less-or-equally normal) pairs.
  static NormalityOrder from_relation(const std::vector<std::pair<World, World>>& pairs);

  // a ⪰ b
  bool at_least_as_normal(const World& a, const World& b) const;
  // a ≻ b
  bool strictly_more_normal(const World& a, const World& b) const {
    return at_least_as_normal(a, b) && !at_least_as_normal(b, a);
  }
  bool is_flat() const { return kind_ == Kind::Flat; }
  bool is_total() const { return kind_ != Kind::Relation; }
  std::optional<long> rank(const World& w) const;

  // Relation form only: listed worlds must be worlds of sig.
  void validate(const Signature& sig) const;

 private:
  enum class Kind { Flat, Rank, Relation };
  struct Closure;

  Kind kind_ = Kind::Flat;
  RankFn rank_;
  std::shared_ptr<const Closure> closure_;
};

struct ExtendedCausalModel {
  CausalModel base;
  NormalityOrder order;
};

}  // namespace causal

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fortify/concat.hpp"
#include "fortify/game.hpp"

namespace fortify {

struct RepeatOptions {
  std::uint64_t max_edges = 2'000'000;
  /// Cap on |E|^k * (sigma_x sigma_y)^k, the size of the relation tables.
  std::uint64_t max_relation_bits = std::uint64_t{1} << 31;
};

/// k-fold parallel repetition. Tuple vertices (v_1, ..., v_k) have index
/// v_1 n^(k-1) + ... + v_k; tuple labels are little-endian, label a of a
/// left tuple has coordinate i equal to (a / sigma_x^(i-1)) mod sigma_x. Edge
/// copies are all k-tuples of base edge copies and a relation accepts iff
/// every coordinate is accepted.
Game repeat_game(const Game& g, std::size_t k, const RepeatOptions& options = {});

/// Coordinate i (0-based) of a little-endian tuple label.
Label tuple_coordinate(std::uint64_t label, std::size_t i, std::size_t sigma);

/// The partition of all query tuples of G^k used to derive the recursive
/// bound, computed for one strategy of G^k. A query falls into the rectangle
/// fixed by its first k-1 edges and the labels the strategy gives to their
/// endpoints; A0 holds queries whose rectangle is not accepting, A1 those in
/// accepting rectangles with both sides of density >= delta, A2 the rest.
struct PartitionAccounting {
  std::size_t k = 0;
  std::uint64_t total = 0;
  std::uint64_t a0 = 0;
  std::uint64_t a1 = 0;
  std::uint64_t a2 = 0;
  std::uint64_t wins = 0;
  std::uint64_t wins_in_a1 = 0;
  std::uint64_t wins_in_a2 = 0;
  std::uint64_t large_rectangles = 0;
  /// |A1| + |A2| <= val(G^(k-1)) |E|^k.
  bool first_rounds_ok = false;
  /// Wins inside every large accepting rectangle are at most that
  /// rectangle's sub-game value times its edge count.
  bool rectangles_ok = false;
  /// Wins in A1 are at most (val(G) + epsilon) |A1|.
  bool a1_ok = false;
  /// |A2| <= 2 delta |E|^k |Sigma|^(k-1), with |Sigma| = sigma_x sigma_y
  /// (sigma_y for projection games).
  double a2_bound = 0.0;
  bool a2_ok = false;
};

PartitionAccounting partition_accounting(const Game& g, std::size_t k, const Labeling& strategy, double delta,
                                         double epsilon, const Ratio& value_previous,
                                         const ValueOptions& options = {});

struct RecursionStep {
  std::size_t j = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool precondition_ok = false;
  bool holds = false;
};

struct ProjectionCheck {
  bool symmetrized_biregular = false;
  bool robust = false;
  bool precondition_ok = false;
  double val_sym = 0.0;
  double val_sym_repeated = 0.0;
  double bound = 0.0;
  std::optional<bool> holds;
  std::string skipped;
};

struct RepetitionReport {
  std::size_t k = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  Ratio val_base;
  /// val(G^j) for j = 1..k.
  std::vector<Ratio> values;
  double val_repeated = 0.0;
  bool biregular = false;
  /// G passed audit_game at (delta, epsilon).
  bool robust = false;
  double measured_epsilon = 0.0;
  /// 2 delta (sigma_x sigma_y)^(k-1) < epsilon.
  bool precondition_ok = false;
  bool sandwich_ok = false;
  std::vector<RecursionStep> steps;
  double bound_general = 0.0;
  /// Set when robust, bi-regular and the precondition holds.
  std::optional<bool> bound_holds;
  std::optional<ProjectionCheck> projection;
  std::optional<PartitionAccounting> partition;
};

struct RecursionOptions {
  RepeatOptions repeat;
  ValueOptions value;
  bool check_projection = true;
  bool check_partition = true;
};

RepetitionReport verify_recursion(const Game& g, std::size_t k, double delta, double epsilon,
                                  const RecursionOptions& options = {});

}  // namespace fortify

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "btv/tree.hpp"

namespace btv {

/// Source of every nondeterministic decision: leaf statuses and
/// nondeterministic blackboard writes.
class LeafOracle {
 public:
  virtual ~LeafOracle() = default;

  /// `ordinal` is the number of leaves that already executed in this tick.
  virtual Status leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) = 0;

  /// Index into the written variable's domain, in [0, domain_size).
  virtual int choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) = 0;
};

/// Recorded decisions keyed by tick and leaf.
struct OracleTable {
  std::map<std::pair<int, std::uint32_t>, Status> statuses;
  std::map<std::tuple<int, std::uint32_t, std::size_t>, int> values;

  void merge(const OracleTable& other);
  std::string describe(const Tree& tree) const;
  bool operator==(const OracleTable&) const = default;
};

/// Replays a table; asking for anything that was not recorded is an OracleError.
class ReplayOracle : public LeafOracle {
 public:
  explicit ReplayOracle(OracleTable table) : table_(std::move(table)) {}

  Status leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) override;
  int choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) override;

  const OracleTable& table() const { return table_; }

 private:
  OracleTable table_;
};

/// Uniform choices from a seeded mt19937_64.
class RandomOracle : public LeafOracle {
 public:
  explicit RandomOracle(std::uint64_t seed) : rng_(seed) {}

  Status leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) override;
  int choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) override;

 private:
  std::mt19937_64 rng_;
};

/// Depth-first enumeration of every decision sequence. Choice points are
/// discovered lazily, so a leaf that never runs never multiplies the count.
///
///   EnumeratingOracle oracle;
///   do { run(..., oracle); use(oracle.table()); } while (oracle.advance());
class EnumeratingOracle : public LeafOracle {
 public:
  Status leaf_status(int tick, int ordinal, NodeId leaf, StatusSet domain) override;
  int choose_value(int tick, NodeId leaf, std::size_t effect, int domain_size) override;

  /// Moves to the next decision sequence; false once every sequence was produced.
  bool advance();
  /// Forgets all progress.
  void reset();

  /// Decisions made since the last advance()/reset().
  const OracleTable& table() const { return table_; }

 private:
  struct Choice {
    int value;
    int arity;
  };
  int next_choice(int arity);

  std::vector<Choice> stack_;
  std::size_t pos_ = 0;
  OracleTable table_;
};

}  // namespace btv

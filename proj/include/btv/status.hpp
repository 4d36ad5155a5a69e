#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace btv {

/// Result of ticking a node. Invalid marks a node that did not run this tick.
enum class Status : std::uint8_t { Invalid = 0, Success = 1, Failure = 2, Running = 3 };

/// The three statuses a running node may return, in canonical order.
inline constexpr std::array<Status, 3> kRunStatuses = {Status::Success, Status::Failure,
                                                       Status::Running};

constexpr char status_letter(Status s) {
  switch (s) {
    case Status::Success: return 'S';
    case Status::Failure: return 'F';
    case Status::Running: return 'R';
    case Status::Invalid: break;
  }
  return 'I';
}

/// Enumeration literal used for the status domain in SMV output.
constexpr std::string_view status_smv_name(Status s) {
  switch (s) {
    case Status::Success: return "success";
    case Status::Failure: return "failure";
    case Status::Running: return "running";
    case Status::Invalid: break;
  }
  return "invalid";
}

/// Accepts both the single-letter form (S/F/R/I) and the SMV literal.
std::optional<Status> parse_status(std::string_view text);

/// Position of a running status in kRunStatuses (S=0, F=1, R=2).
constexpr int run_index(Status s) { return static_cast<int>(s) - 1; }

constexpr bool is_resolved(Status s) { return s == Status::Success || s == Status::Failure; }

/// Non-empty subset of {Success, Failure, Running}.
class StatusSet {
 public:
  constexpr StatusSet() = default;
  constexpr StatusSet(std::initializer_list<Status> statuses) {
    for (Status s : statuses) insert(s);
  }

  static constexpr StatusSet all() {
    return StatusSet{Status::Success, Status::Failure, Status::Running};
  }

  constexpr void insert(Status s) {
    if (s != Status::Invalid) bits_ |= static_cast<std::uint8_t>(1u << run_index(s));
  }
  constexpr bool contains(Status s) const {
    return s != Status::Invalid && (bits_ & (1u << run_index(s))) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    return ((bits_ >> 0) & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1);
  }
  constexpr std::uint8_t bits() const { return bits_; }

  /// Members in canonical S, F, R order.
  std::vector<Status> members() const {
    std::vector<Status> out;
    for (Status s : kRunStatuses)
      if (contains(s)) out.push_back(s);
    return out;
  }

  constexpr bool operator==(const StatusSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

}  // namespace btv

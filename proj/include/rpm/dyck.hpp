#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rpm {

/// Largest width for which the state space is enumerated densely.
/// binomial(20, 10) = 184756 states.
inline constexpr int kMaxEnumerationWidth = 20;

/// Stable configuration of the periodic raise and peel model.
///
/// The interface is stored as heights h[0..L-1] at sites 1..L, measured from
/// the mid-line of the substrate. Valid profiles have unit steps (cyclically),
/// h_i = i (mod 2) for the 1-based site index and touch the substrate, which
/// under this parity means the minimum height is 0 or 1.
class DyckConfig {
 public:
  /// Validates the profile; throws InvalidArgument if it is not stable.
  explicit DyckConfig(std::vector<int> heights);

  int width() const noexcept { return static_cast<int>(h_.size()); }

  /// Height at 1-based site i, indices taken mod L.
  int height(int site) const noexcept;

  std::span<const int> heights() const noexcept { return h_; }

  /// Step bits: bit k (0-based) is 1 when the step from site k+1 to k+2 goes up.
  std::uint64_t step_word() const noexcept;

  /// Builds the canonical profile of a balanced cyclic step word.
  static DyckConfig from_step_word(std::uint64_t word, int width);

  /// Hex serialization: L-bit integer whose most significant bit is the step
  /// from site 1 to site 2, up = 1, zero padded to ceil(L/4) digits.
  std::string to_hex() const;
  static DyckConfig from_hex(std::string_view hex, int width);

  friend bool operator==(const DyckConfig&, const DyckConfig&) = default;

 private:
  struct Unchecked {};
  DyckConfig(std::vector<int> heights, Unchecked) : h_(std::move(heights)) {}

  std::vector<int> h_;
};

/// Throws InvalidArgument unless width is even and in [2, 64].
void check_width(int width);

/// Throws InvalidArgument unless width is even and at least 2 (no enumeration bound).
void check_even_width(int width);

/// True if the profile satisfies every invariant of DyckConfig.
bool is_stable_profile(std::span<const int> heights);

/// The substrate (1,0,1,0,...).
DyckConfig substrate(int width);

enum class SiteKind { Peak, Valley, GlobalValley, SlopeUp, SlopeDown };

SiteKind classify_site(const DyckConfig& c, int site);

enum class DropKind { Reflection, Adsorption, LocalAvalanche, GlobalAvalanche };

struct DropOutcome {
  DyckConfig next;
  int tiles_removed = 0;  // includes the dropped tile when an avalanche occurs
  bool global = false;
  DropKind kind = DropKind::Reflection;
};

/// Drops a tile at 1-based site i and relaxes the surface.
DropOutcome drop_tile(const DyckConfig& c, int site);

int peaks_count(const DyckConfig& c);

/// Dense index in [0, binomial(L, L/2)), colex order of the step word.
struct StateIndex {
  std::uint64_t index = 0;
  int width = 0;
};

StateIndex rank(const DyckConfig& c);
DyckConfig unrank(StateIndex s);

/// Number of stable configurations of the given width.
std::uint64_t state_count(int width);

/// Every stable configuration of the given width, ordered by rank.
std::vector<DyckConfig> enumerate_states(int width);

}  // namespace rpm

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bsep {

enum class Metric { hs, bures };

/// Division algebra of the free entries; the value is the Dyson index β.
enum class Algebra { real = 1, complex = 2, quaternion = 4 };

/// 1-based position (row < col) of a free off-diagonal entry.
struct EntryPair {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(const EntryPair&, const EntryPair&) = default;
  friend constexpr auto operator<=>(const EntryPair&, const EntryPair&) = default;
};

inline constexpr EntryPair kEntry12{1, 2};
inline constexpr EntryPair kEntry14{1, 4};
inline constexpr EntryPair kEntry23{2, 3};

/// A free entry pair (ρ_ij, ρ_ji). `zeroed` quaternion components are pinned
/// to zero; the last component (k) is the one removed.
struct FreeEntry {
  EntryPair pos;
  int zeroed = 0;

  friend bool operator==(const FreeEntry&, const FreeEntry&) = default;
};

/// Which off-diagonal pairs of a two-qubit density matrix are free, over which
/// algebra, and which metric measures volume.
struct Scenario {
  Metric metric = Metric::bures;
  Algebra algebra = Algebra::real;
  std::vector<FreeEntry> entries;

  int beta() const { return static_cast<int>(algebra); }

  /// Number of real coordinates carried by entry `e`.
  std::size_t entry_coords(std::size_t e) const;
  std::size_t offdiag_dimension() const;
  /// Three diagonal coordinates plus the off-diagonal ones.
  std::size_t dimension() const { return 3 + offdiag_dimension(); }

  bool has_entry(EntryPair pos) const;
  bool is_single_23() const;
  /// The [(1,4),(2,3)] shape, whose entries are swapped by partial transposition.
  bool is_cross_pair() const;
  bool is_chain() const;  ///< [(1,2),(2,3)]
  bool quaternionic() const { return algebra == Algebra::quaternion; }
  int zeroed() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses "bures:[(2,3)]:quat", "hs:[(1,4),(2,3)]:complex", "bures:[(2,3)]:quat-1".
/// Entries are stored sorted, so `to_string(parse_scenario(s))` is canonical.
Scenario parse_scenario(std::string_view text);
std::string to_string(const Scenario& s);

/// Also accepts table notation, "bures:[~(2,3)]" or "[^(2,3)]-1"; a bare label
/// takes `metric`. Marks (~ complex, ^ quaternionic) must agree across entries.
Scenario parse_selector(std::string_view text, Metric metric = Metric::bures);

/// Notation used in tables: [(2,3)], [~(2,3)], [^(2,3)], [^(2,3)]-1, ...
std::string shape_label(const Scenario& s);

std::string_view to_string(Metric m);
std::string_view to_string(Algebra a);
Metric parse_metric(std::string_view text);

}  // namespace bsep

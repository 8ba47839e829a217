#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace magicmps {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
/// Y = [[0, -i], [i, 0]].
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// Word over {I, X, Y, Z}, one letter per site (site 0 first).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {}
  explicit PauliString(std::size_t n) : letters_(n, Pauli::I) {}

  /// Parses "IXYZ"-style text; throws std::invalid_argument on other letters.
  static PauliString parse(std::string_view text);
  /// Inverse of code(): base-4 digits with site 0 most significant.
  static PauliString from_code(std::uint64_t code, std::size_t n);

  std::size_t size() const { return letters_.size(); }
  Pauli operator[](std::size_t k) const { return letters_[k]; }
  Pauli& operator[](std::size_t k) { return letters_[k]; }
  const std::vector<Pauli>& letters() const { return letters_; }

  std::uint64_t code() const;
  std::string str() const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  std::vector<Pauli> letters_;
};

}  // namespace magicmps

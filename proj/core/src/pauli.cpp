#include "magicmps/pauli.hpp"

#include <stdexcept>

namespace magicmps {

char to_char(Pauli p) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  return kLetters[static_cast<int>(p)];
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, C(0.0, -1.0), C(0.0, 1.0), 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(Pauli::I); break;
      case 'X': letters.push_back(Pauli::X); break;
      case 'Y': letters.push_back(Pauli::Y); break;
      case 'Z': letters.push_back(Pauli::Z); break;
      default: throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::from_code(std::uint64_t code, std::size_t n) {
  std::vector<Pauli> letters(n);
  for (std::size_t k = n; k-- > 0;) {
    letters[k] = static_cast<Pauli>(code & 3U);
    code >>= 2;
  }
  return PauliString(std::move(letters));
}

std::uint64_t PauliString::code() const {
  std::uint64_t c = 0;
  for (Pauli p : letters_) c = (c << 2) | static_cast<std::uint64_t>(p);
  return c;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(to_char(p));
  return s;
}

}  // namespace magicmps

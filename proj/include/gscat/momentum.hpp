#pragma once

#include <cctype>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gscat {

/// Momentum k = (p/q)·π with 0 < p/q < 1 in lowest terms.
class Momentum {
 public:
  Momentum() = default;

  Momentum(int p, int q) : p_(p), q_(q) {
    if (q <= 0 || p <= 0 || p >= q) throw std::invalid_argument("Momentum: need 0 < p/q < 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("Momentum: p/q must be reduced");
  }

  int p() const { return p_; }
  int q() const { return q_; }

  double value() const { return std::numbers::pi * p_ / q_; }

  /// "p/q", the fraction of π.
  std::string str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

  /// Accepts "p/q" (fraction of π), "pi/q", "p*pi/q" and "ppi/q".
  static Momentum parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    const auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("Momentum: expected p/q or p*pi/q: " + std::string(text));
    std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (auto pi = num.find("pi"); pi != std::string::npos) {
      if (pi + 2 != num.size()) throw std::invalid_argument("Momentum: malformed " + std::string(text));
      num.erase(pi);
      if (!num.empty() && num.back() == '*') num.pop_back();
      if (num.empty()) num = "1";
    }
    try {
      std::size_t used = 0;
      const int p = std::stoi(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing");
      const int q = std::stoi(den, &used);
      if (used != den.size()) throw std::invalid_argument("trailing");
      return Momentum(p, q);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("Momentum: malformed " + std::string(text));
    }
  }

  friend bool operator==(const Momentum&, const Momentum&) = default;
  friend bool operator<(const Momentum& a, const Momentum& b) {
    return long(a.p_) * b.q_ < long(b.p_) * a.q_;
  }

 private:
  int p_ = 1;
  int q_ = 2;
};

/// The nine momenta pπ/q with q ∈ {2, 3, 4, 5}, in the order π/4, π/3, π/2,
/// 2π/3, 3π/4, π/5, 2π/5, 3π/5, 4π/5.
inline std::vector<Momentum> default_momenta() {
  return {{1, 4}, {1, 3}, {1, 2}, {2, 3}, {3, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}};
}

}  // namespace gscat

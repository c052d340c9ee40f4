#pragma once

// graph6 codec (nauty/geng format). Only the subset needed for n <= 12 is
// accepted on input, but the long size header is decoded so that oversize
// graphs produce a range error rather than a parse error.

#include <stdexcept>
#include <string>
#include <string_view>

#include "gscat/graph.hpp"

namespace gscat {

class Graph6Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline constexpr int kG6Bias = 63;
inline constexpr int kG6Max = 126;
}  // namespace detail

inline std::string write_graph6(const Graph& g) {
  const int n = g.order();
  std::string out;
  out.push_back(char(detail::kG6Bias + n));
  int acc = 0;
  int nbits = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++nbits == 6) {
        out.push_back(char(detail::kG6Bias + acc));
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits > 0) out.push_back(char(detail::kG6Bias + (acc << (6 - nbits))));
  return out;
}

inline Graph parse_graph6(std::string_view text) {
  using detail::kG6Bias;
  using detail::kG6Max;
  if (text.starts_with(">>graph6<<")) text.remove_prefix(10);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw Graph6Error("graph6: empty line");

  for (char c : text) {
    const int b = static_cast<unsigned char>(c);
    if (b < kG6Bias || b > kG6Max) throw Graph6Error("graph6: illegal byte " + std::to_string(b));
  }

  std::size_t pos = 0;
  long n = static_cast<unsigned char>(text[0]) - kG6Bias;
  pos = 1;
  if (n == 63) {
    // Long header: '~' followed by 18 bits, or "~~" followed by 36 bits.
    if (text.size() >= 2 && text[1] == '~') throw Graph6Error("graph6: vertex count out of range");
    if (text.size() < 4) throw Graph6Error("graph6: truncated size header");
    n = 0;
    for (int i = 1; i <= 3; ++i) n = (n << 6) | (static_cast<unsigned char>(text[i]) - kG6Bias);
    pos = 4;
    if (n < 63) throw Graph6Error("graph6: malformed size header");
  }
  if (n < 1 || n > kMaxVertices) throw Graph6Error("graph6: vertex count out of range");

  const long nbits = n * (n - 1) / 2;
  const long nbytes = (nbits + 5) / 6;
  if (long(text.size() - pos) != nbytes) throw Graph6Error("graph6: wrong body length");

  Graph g(static_cast<int>(n));
  long k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int byte = static_cast<unsigned char>(text[pos + k / 6]) - kG6Bias;
      if ((byte >> (5 - k % 6)) & 1) g.add_edge(i, j);
    }
  }
  if (nbits % 6 != 0) {
    const int last = static_cast<unsigned char>(text.back()) - kG6Bias;
    const int pad = int(6 - nbits % 6);
    if (last & ((1 << pad) - 1)) throw Graph6Error("graph6: nonzero padding bits");
  }
  return g;
}

}  // namespace gscat

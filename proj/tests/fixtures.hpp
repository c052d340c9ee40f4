#pragma once

// Graphs with known behaviour, labelled as drawn.

#include <array>
#include <utility>
#include <vector>

#include "gscat/graph.hpp"
#include "gscat/ports.hpp"

namespace fixtures {

using gscat::Graph;
using gscat::PortAssignment;

struct Tailed {
  Graph graph;
  PortAssignment ports;  // in0, in1, out0, out1
};

inline Graph make(int n, std::vector<std::pair<int, int>> edges) { return Graph(n, edges); }

// two isolated vertices, one register each
inline Tailed isolated_identity() { return {make(2, {}), PortAssignment({0, 1, 0, 1})}; }
inline Tailed isolated_x() { return {make(2, {}), PortAssignment({0, 1, 1, 0})}; }

// edge plus a 3-path; R_Z(-pi/2) at k = pi/2, length 1
inline Tailed rz_minus_half() { return {make(5, {{0, 1}, {2, 3}, {3, 4}}), PortAssignment({0, 2, 1, 2})}; }

// five vertices, identity at pi/3 with length 1/2
inline Tailed half_length_identity() {
  return {make(5, {{0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}}), PortAssignment({1, 2, 1, 2})};
}

// nine vertices, rotation about z by an irrational multiple of pi at pi/3
inline Tailed irrational_rotation() {
  return {make(9, {{0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {0, 8}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 6},
                   {2, 7}, {2, 8}, {3, 4}, {3, 5}, {3, 7}, {3, 8}, {4, 6}, {4, 7}, {4, 8}, {5, 6}, {5, 8}, {7, 8}}),
          PortAssignment({7, 0, 5, 0})};
}

// eight vertices at pi/4: sqrt(X) up to conjugation, length 5 - 2 sqrt 2
inline Tailed root_x() {
  return {make(8, {{0, 4}, {0, 5}, {0, 7}, {1, 4}, {1, 6}, {1, 7}, {2, 5}, {2, 7}, {3, 6}, {3, 7}, {5, 7}, {6, 7}}),
          PortAssignment({0, 1, 2, 3})};
}

// identity companion of root_x, same length
inline Tailed root_x_identity() {
  return {make(8, {{0, 4}, {0, 7}, {1, 5}, {1, 7}, {2, 6}, {2, 7}, {3, 6}, {3, 7}, {4, 7}, {5, 7}, {6, 7}}),
          PortAssignment({0, 5, 4, 1})};
}

// path of L edges carrying register 0, isolated vertex carrying register 1
inline Tailed path(int L) {
  Graph g(L + 2);
  for (int i = 0; i < L; ++i) g.add_edge(i, i + 1);
  return {g, PortAssignment({0, L + 1, L, L + 1})};
}

}  // namespace fixtures

#pragma once

#include <vector>

#include "eh/hypergraph.hpp"
#include "eh/matching.hpp"

namespace eh::test {

inline Hypergraph k6_3() { return complete_hypergraph(6, 3); }

inline Hypergraph k4_graph() { return complete_hypergraph(4, 2); }

// Uniform weighting w on every edge of g.
inline FractionalMatching uniform_weights(const Hypergraph& g, double w) {
    return FractionalMatching::constant(g, w);
}

// K_6^(3) with the uniform perfect fractional matching x_e = 0.1.
struct K6WithUniform {
    Hypergraph g = k6_3();
    FractionalMatching x = uniform_weights(g, 0.1);
};

} // namespace eh::test

#pragma once

#include "dreg/types.hpp"

namespace dreg {

/// Weighted digraph on nodes {0..n}; node 0 is the leader.
/// adjacency(i, j) > 0 iff there is an arc j -> i (agent i hears agent j).
class Topology {
public:
    explicit Topology(Mat adjacency);

    /// Builds from an arc list (from, to, weight).
    struct Arc {
        int from;
        int to;
        double weight = 1.0;
    };
    static Topology from_arcs(int followers, std::initializer_list<Arc> arcs);

    int followers() const noexcept { return static_cast<int>(adjacency_.rows()) - 1; }
    int nodes() const noexcept { return static_cast<int>(adjacency_.rows()); }
    const Mat& adjacency() const noexcept { return adjacency_; }
    double weight(int i, int j) const { return adjacency_(i, j); }

private:
    Mat adjacency_;
};

struct GraphReport {
    bool leader_reachable = false;
    bool follower_subgraph_undirected = false;
    bool h_positive_definite = false;
    double h_min_eigenvalue = 0.0;

    bool all() const noexcept {
        return leader_reachable && follower_subgraph_undirected && h_positive_definite;
    }
};

Mat laplacian(const Topology& topology);

/// Laplacian with leader row and column deleted.
Mat follower_submatrix(const Topology& topology);

/// eig_tol is relative to the largest eigenvalue magnitude of sym(H).
GraphReport check_connectivity(const Topology& topology, double eig_tol = 1e-10);

/// e_vi = sum_j a_ij (y_i - y_j); outputs(0) is the leader output.
Vec neighborhood_error(const Topology& topology, const Vec& outputs);

/// Allocation-free variant for the integrator inner loop.
void neighborhood_error(const Topology& topology, const Vec& outputs, Vec& out);

}  // namespace dreg

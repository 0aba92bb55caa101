#include "dreg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace dreg {

double Mu::operator[](std::size_t i) const {
    switch (i) {
        case 0: return v;
        case 1: return x;
        case 2: return d1;
        case 3: return d2;
        case 4: return d3;
    }
    throw std::out_of_range("Mu index");
}

double& Mu::operator[](std::size_t i) {
    switch (i) {
        case 0: return v;
        case 1: return x;
        case 2: return d1;
        case 3: return d2;
        case 4: return d3;
    }
    throw std::out_of_range("Mu index");
}

Topology::Topology(Mat adjacency) : adjacency_(std::move(adjacency)) {
    if (adjacency_.rows() < 2 || adjacency_.rows() != adjacency_.cols())
        throw Error("invalid_topology", "topology: adjacency must be square with at least one follower");
    for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
        if (adjacency_(i, i) != 0.0)
            throw Error("invalid_topology", "topology: adjacency diagonal must be zero");
        for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
            if (!(adjacency_(i, j) >= 0.0) || !std::isfinite(adjacency_(i, j)))
                throw Error("invalid_topology", "topology: adjacency entries must be finite and nonnegative");
        }
    }
}

Topology Topology::from_arcs(int followers, std::initializer_list<Arc> arcs) {
    Mat a = Mat::Zero(followers + 1, followers + 1);
    for (const auto& arc : arcs) a(arc.to, arc.from) = arc.weight;
    return Topology(std::move(a));
}

Mat laplacian(const Topology& topology) {
    const Mat& a = topology.adjacency();
    Mat l = -a;
    for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) = a.row(i).sum();
    return l;
}

Mat follower_submatrix(const Topology& topology) {
    const int n = topology.followers();
    return laplacian(topology).bottomRightCorner(n, n);
}

GraphReport check_connectivity(const Topology& topology, double eig_tol) {
    const Mat& a = topology.adjacency();
    const int nodes = topology.nodes();
    GraphReport report;

    // BFS from the leader along arc directions j -> i.
    std::vector<char> seen(nodes, 0);
    std::queue<int> frontier;
    seen[0] = 1;
    frontier.push(0);
    while (!frontier.empty()) {
        const int j = frontier.front();
        frontier.pop();
        for (int i = 0; i < nodes; ++i) {
            if (!seen[i] && a(i, j) > 0.0) {
                seen[i] = 1;
                frontier.push(i);
            }
        }
    }
    report.leader_reachable = std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });

    report.follower_subgraph_undirected = true;
    for (int i = 1; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j)
            if (a(i, j) != a(j, i)) report.follower_subgraph_undirected = false;

    const Mat h = follower_submatrix(topology);
    const Mat sym = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(sym, Eigen::EigenvaluesOnly);
    const Vec& lambdas = eig.eigenvalues();
    report.h_min_eigenvalue = lambdas.minCoeff();
    const double scale = std::max(lambdas.cwiseAbs().maxCoeff(), 1e-300);
    report.h_positive_definite = report.h_min_eigenvalue > eig_tol * scale;
    return report;
}

void neighborhood_error(const Topology& topology, const Vec& outputs, Vec& out) {
    const Mat& a = topology.adjacency();
    const int n = topology.followers();
    require_dims(outputs.size() == n + 1, "neighborhood_error");
    out.resize(n);
    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) acc += a(i, j) * (outputs(i) - outputs(j));
        out(i - 1) = acc;
    }
}

Vec neighborhood_error(const Topology& topology, const Vec& outputs) {
    Vec out;
    neighborhood_error(topology, outputs, out);
    return out;
}

}  // namespace dreg

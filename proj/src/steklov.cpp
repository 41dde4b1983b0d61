#include "steklab/steklov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "steklab/errors.hpp"

namespace steklab::steklov {

using mesh::SurfaceMesh;
using mesh::Vec2;

Condition BoundaryConditionMap::condition(const std::string& name) const {
    auto it = by_name.find(name);
    return it == by_name.end() ? Condition::steklov : it->second;
}

namespace {

void local_stiffness(const std::array<Vec2, 3>& p, Eigen::Matrix3d& K) {
    Vec2 e0 = p[2] - p[1], e1 = p[0] - p[2], e2 = p[1] - p[0];
    double A2 = e2.x() * (-e1.y()) - e2.y() * (-e1.x());  // 2 * signed area
    double A = 0.5 * std::abs(A2);
    if (!(A > 1e-14)) throw AssemblyError("assemble_stiffness: degenerate element");
    std::array<Vec2, 3> e = {e0, e1, e2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) K(i, j) = e[i].dot(e[j]) / (4.0 * A);
}

}  // namespace

SpMat assemble_stiffness(const SurfaceMesh& m) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(m.tris.size() * 9);
    Eigen::Matrix3d K;
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const mesh::Tri& tr = m.tris[t];
        double A = m.triangle_chart_area(static_cast<int>(t));
        if (!(std::abs(A) > 1e-14))
            throw AssemblyError("assemble_stiffness: degenerate element " + std::to_string(t) +
                                " (chart area " + std::to_string(A) + ")");
        local_stiffness(tr.p, K);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trip.emplace_back(tr.v[i], tr.v[j], K(i, j));
    }
    SpMat S(m.n_vertices, m.n_vertices);
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
}

SpMat assemble_stiffness_metric(const SurfaceMesh& m) {
    // carries g^{ij} sqrt(g) = delta_ij through explicitly, with the
    // conformal factor evaluated at the element barycenter
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(m.tris.size() * 9);
    Eigen::Matrix3d K;
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const mesh::Tri& tr = m.tris[t];
        local_stiffness(tr.p, K);
        Vec2 bary = (tr.p[0] + tr.p[1] + tr.p[2]) / 3.0;
        double lam = m.charts[tr.chart].conformal_factor(bary);
        double inv_metric = 1.0 / (lam * lam);  // g^{ij} = delta_ij / lambda^2
        double area_elem = lam * lam;           // sqrt(det g)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.emplace_back(tr.v[i], tr.v[j], inv_metric * area_elem * K(i, j));
    }
    SpMat S(m.n_vertices, m.n_vertices);
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
}

namespace {

void check_has_steklov(const SurfaceMesh& m, const BoundaryConditionMap& bc) {
    for (const auto& name : m.boundary_names)
        if (bc.condition(name) == Condition::steklov) return;
    throw DomainError("boundary conditions: at least one component must be Steklov");
}

}  // namespace

SpMat assemble_boundary_mass(const SurfaceMesh& m, const BoundaryConditionMap& bc) {
    check_has_steklov(m, bc);
    constexpr double g1 = 0.5 - 0.28867513459481287;
    constexpr double g2 = 0.5 + 0.28867513459481287;
    std::vector<Eigen::Triplet<double>> trip;
    for (const mesh::BoundaryEdge& e : m.bedges) {
        if (bc.condition(m.boundary_names[e.component]) != Condition::steklov) continue;
        const mesh::ChartSpec& ch = m.charts[e.chart];
        double L = (e.p[1] - e.p[0]).norm();
        double m11 = 0, m12 = 0, m22 = 0;
        for (double xi : {g1, g2}) {
            Vec2 q = e.p[0] + xi * (e.p[1] - e.p[0]);
            double w = 0.5 * L * ch.conformal_factor(q);
            m11 += w * (1 - xi) * (1 - xi);
            m12 += w * xi * (1 - xi);
            m22 += w * xi * xi;
        }
        trip.emplace_back(e.va, e.va, m11);
        trip.emplace_back(e.va, e.vb, m12);
        trip.emplace_back(e.vb, e.va, m12);
        trip.emplace_back(e.vb, e.vb, m22);
    }
    SpMat M(m.n_vertices, m.n_vertices);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

SpectrumResult solve_steklov(const SurfaceMesh& m, const BoundaryConditionMap& bc, int count) {
    if (count < 1) throw DomainError("solve_steklov: count must be >= 1");
    check_has_steklov(m, bc);

    SpMat S = assemble_stiffness(m);
    SpMat Mb = assemble_boundary_mass(m, bc);

    // classify nodes
    std::vector<int> kind(m.n_vertices, 0);  // 0 free interior, 1 steklov, 2 dirichlet
    for (const mesh::BoundaryEdge& e : m.bedges) {
        Condition c = bc.condition(m.boundary_names[e.component]);
        int k = c == Condition::steklov ? 1 : (c == Condition::dirichlet ? 2 : 0);
        if (k) {
            kind[e.va] = k;
            kind[e.vb] = k;
        }
    }
    std::vector<int> bnodes, inodes;
    for (int v = 0; v < m.n_vertices; ++v) {
        if (kind[v] == 1) bnodes.push_back(v);
        else if (kind[v] == 0) inodes.push_back(v);
    }
    int nb = static_cast<int>(bnodes.size());
    int ni = static_cast<int>(inodes.size());
    if (nb == 0) throw AssemblyError("solve_steklov: no Steklov boundary nodes");
    if (count > nb)
        throw DomainError("solve_steklov: requested " + std::to_string(count) +
                          " eigenpairs but the reduced problem has only " + std::to_string(nb));
    std::vector<int> pos(m.n_vertices, -1);
    for (int i = 0; i < ni; ++i) pos[inodes[i]] = i;
    std::vector<int> bpos(m.n_vertices, -1);
    for (int i = 0; i < nb; ++i) bpos[bnodes[i]] = i;

    // S_II and S_IB from triplets
    std::vector<Eigen::Triplet<double>> tII, tIB;
    Eigen::MatrixXd Sbb = Eigen::MatrixXd::Zero(nb, nb);
    for (int kcol = 0; kcol < S.outerSize(); ++kcol) {
        for (SpMat::InnerIterator it(S, kcol); it; ++it) {
            int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (kind[r] == 2 || kind[c] == 2) continue;  // Dirichlet eliminated
            bool rb = kind[r] == 1, cb = kind[c] == 1;
            if (!rb && !cb) tII.emplace_back(pos[r], pos[c], it.value());
            else if (!rb && cb) tIB.emplace_back(pos[r], bpos[c], it.value());
            else if (rb && cb) Sbb(bpos[r], bpos[c]) += it.value();
        }
    }
    SpMat SII(ni, ni), SIB(ni, nb);
    SII.setFromTriplets(tII.begin(), tII.end());
    SIB.setFromTriplets(tIB.begin(), tIB.end());

    // discrete Dirichlet-to-Neumann operator on the Steklov nodes
    Eigen::MatrixXd dtn = Sbb;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    Eigen::MatrixXd X;  // interior responses, kept for eigenvector recovery
    if (ni > 0) {
        ldlt.compute(SII);
        if (ldlt.info() != Eigen::Success)
            throw AssemblyError("solve_steklov: interior block factorization failed");
        X.resize(ni, nb);
        constexpr int chunk = 64;
        Eigen::MatrixXd rhs;
        for (int c0 = 0; c0 < nb; c0 += chunk) {
            int nc = std::min(chunk, nb - c0);
            rhs = Eigen::MatrixXd(SIB.middleCols(c0, nc));
            X.middleCols(c0, nc) = ldlt.solve(rhs);
        }
        dtn.noalias() -= Eigen::MatrixXd(SIB.transpose()) * X;
    }
    dtn = 0.5 * (dtn + dtn.transpose().eval());  // enforce symmetry against roundoff

    Eigen::MatrixXd Mbb(nb, nb);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) Mbb(i, j) = Mb.coeff(bnodes[i], bnodes[j]);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dtn, Mbb);
    if (es.info() != Eigen::Success)
        throw AssemblyError("solve_steklov: dense generalized eigensolver failed");

    SpectrumResult out;
    out.mesh_h = m.target_h;
    out.num_vertices = m.n_vertices;
    out.num_steklov_nodes = nb;
    out.num_eliminated = ni;
    out.steklov_nodes = bnodes;
    out.boundary_traces.resize(nb, count);
    out.interior_values.resize(m.n_vertices, count);
    out.interior_values.setZero();

    for (int k = 0; k < count; ++k) {
        double sig = es.eigenvalues()(k);
        if (sig < -1e-10)
            throw AssemblyError("solve_steklov: negative eigenvalue " + std::to_string(sig));
        if (std::abs(sig) < 1e-10) sig = 0.0;
        out.eigenvalues.push_back(sig);
        Eigen::VectorXd ub = es.eigenvectors().col(k);
        out.boundary_traces.col(k) = ub;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(m.n_vertices);
        for (int i = 0; i < nb; ++i) full(bnodes[i]) = ub(i);
        if (ni > 0) {
            Eigen::VectorXd ui = -(X * ub);
            for (int i = 0; i < ni; ++i) full(inodes[i]) = ui(i);
        }
        out.interior_values.col(k) = full;
        Eigen::VectorXd r = S * full - es.eigenvalues()(k) * (Mb * full);
        for (int v = 0; v < m.n_vertices; ++v)
            if (kind[v] == 2) r(v) = 0.0;  // constrained rows carry the reaction force
        double res = r.norm();
        out.residuals.push_back(res);
        if (res > 1e-8)
            throw AssemblyError("solve_steklov: eigenpair residual " + std::to_string(res) +
                                " exceeds 1e-8");
    }
    // cluster nearly-degenerate eigenvalues (1e-9 relative)
    out.cluster.resize(count, 0);
    for (int k = 1; k < count; ++k) {
        double a = out.eigenvalues[k - 1], b = out.eigenvalues[k];
        bool same = std::abs(b - a) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
        out.cluster[k] = same ? out.cluster[k - 1] : out.cluster[k - 1] + 1;
    }
    return out;
}

double rayleigh_quotient(const SurfaceMesh& m, const BoundaryConditionMap& bc,
                         const Eigen::VectorXd& nodal) {
    if (nodal.size() != m.n_vertices)
        throw DomainError("rayleigh_quotient: nodal vector size mismatch");
    SpMat S = assemble_stiffness(m);
    SpMat Mb = assemble_boundary_mass(m, bc);
    double num = nodal.dot(S * nodal);
    double den = nodal.dot(Mb * nodal);
    if (den <= 0.0)
        throw DomainError("rayleigh_quotient: zero boundary norm on the Steklov part");
    return num / den;
}

}  // namespace steklab::steklov

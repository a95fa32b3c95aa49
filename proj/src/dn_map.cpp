#include "fmse/dn_map.hpp"

#include <Eigen/Eigenvalues>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmse/fd_weights.hpp"

namespace fmse {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::uint64_t hash_grid(const Grid& grid) {
    std::uint64_t h = fnv1a(&grid.n1, sizeof(grid.n1));
    h = fnv1a(grid.spec.box_lo.data(), sizeof(double) * 2, h);
    h = fnv1a(grid.spec.box_hi.data(), sizeof(double) * 2, h);
    h = fnv1a(&grid.spec.dim, sizeof(int), h);
    return h;
}

ExteriorBasis make_bump_basis(const Grid& grid, const std::string& window,
                              const std::vector<Point>& centers,
                              const std::vector<double>& radii) {
    if (centers.size() != radii.size() || centers.empty())
        throw SpecViolation("basis needs matching non-empty centers and radii");
    const Region& win = (window == "W1") ? grid.spec.w1 : grid.spec.w2;
    const auto& mask = (window == "W1") ? grid.in_w1 : grid.in_w2;

    ExteriorBasis b;
    b.window = window;
    b.centers = centers;
    b.radii = radii;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        ScalarField f = bump(grid, centers[k], radii[k], 1.0);
        for (Eigen::Index i = 0; i < f.size(); ++i) {
            if (f[i] != 0.0 && !mask[i])
                throw SpecViolation("basis bump leaks outside its window");
        }
        if (f.cwiseAbs().maxCoeff() == 0.0)
            throw SpecViolation("basis bump is not resolved on the grid");
        b.fields.push_back(std::move(f));
    }
    // linear independence on window nodes: Gram rank
    const int m = b.size();
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) G(i, j) = b.fields[i].dot(b.fields[j]) * grid.w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.eigenvalues().minCoeff() < 1e-12 * es.eigenvalues().maxCoeff())
        throw SpecViolation("basis bumps are numerically dependent on window nodes");
    return b;
}

DnEngine::DnEngine(const Grid& grid, double s, const MagneticPotential& A, const Nonlinearity& a,
                   const SolverOptions& opts)
    : grid_(grid),
      a_(a),
      opts_(opts),
      M0_full_([&] {
          std::vector<int> all(grid.n_nodes());
          for (Eigen::Index i = 0; i < grid.n_nodes(); ++i) all[i] = static_cast<int>(i);
          return A.is_zero() ? assemble_frac_laplacian(grid, s, {}, &all)
                             : assemble_magnetic(grid, s, A, nullptr, {}, &all);
      }()),
      L_(grid, s, A.is_zero() ? nullptr : &A, &a.c(1)) {}

double DnEngine::pairing(const ScalarField& u, const ScalarField& v) const {
    Eigen::VectorXd Mu = M0_full_.apply(u);
    double acc = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) acc += v[i] * Mu[i];
    ScalarField au = eval_a(a_, u, grid_);
    double bulk = 0;
    for (int i : grid_.interior_nodes)
        if (v[i] != 0.0) bulk += au[i] * v[i];
    return (acc + bulk) * grid_.w;
}

double DnEngine::pairing_linear_operator(const ScalarField& u, const ScalarField& v) const {
    Eigen::VectorXd Mu = M0_full_.apply(u);
    double acc = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) acc += v[i] * Mu[i];
    double bulk = 0;
    for (int i : grid_.interior_nodes)
        if (v[i] != 0.0) bulk += a_.c(1)[i] * u[i] * v[i];
    return (acc + bulk) * grid_.w;
}

Solution DnEngine::solve_data(const ScalarField& g) const {
    return solve_nonlinear(L_, a_, g, opts_);
}

double dn_pairing(const MagneticPotential& A, const Nonlinearity& a, const ScalarField& g,
                  const ScalarField& v_ext, const Grid& grid, double s,
                  const SolverOptions& opts) {
    if (g.cwiseAbs().maxCoeff() > opts.eps0)
        std::fprintf(stderr, "warning: exterior data amplitude exceeds eps0\n");
    DnEngine engine(grid, s, A, a, opts);
    Solution sol = engine.solve_data(g);
    return engine.pairing(sol.u, v_ext);
}

DnData dn_derivatives(const MagneticPotential& A, const Nonlinearity& a,
                      const ExteriorBasis& basisW1, const ExteriorBasis& basisW2, const Grid& grid,
                      double s, int K, const DnStencil& stencil, const SolverOptions& opts) {
    if (K < 1 || K > a.K) throw SpecViolation("derivative order K outside 1..a.K");
    DnEngine engine(grid, s, A, a, opts);

    DnData d;
    d.dim = grid.dim();
    d.s = s;
    d.K = K;
    d.stencil = stencil;
    d.grid_hash = hash_grid(grid);
    d.coeffs_hash = fnv1a(a.c(1).data(), sizeof(double) * a.c(1).size());

    const int nb1 = basisW1.size(), nb2 = basisW2.size();
    const int nt = static_cast<int>(stencil.mults.size());

    // normalize each f to unit linear response on Omega
    d.f_scale.assign(nb1, 1.0);
    std::vector<ScalarField> f_scaled(nb1);
    ScalarField zeroF = ScalarField::Zero(grid.n_nodes());
    for (int i = 0; i < nb1; ++i) {
        ScalarField u1 = engine.linear_operator().solve(zeroF, basisW1.fields[i]);
        double m = 0;
        for (int n : grid.interior_nodes) m = std::max(m, std::abs(u1[n]));
        if (stencil.normalize_response && m > 0) d.f_scale[i] = 1.0 / m;
        f_scaled[i] = d.f_scale[i] * basisW1.fields[i];
    }

    d.P.assign(nt, Eigen::MatrixXd::Zero(nb1, nb2));
    for (int t = 0; t < nt; ++t) {
        if (stencil.mults[t] == 0) continue;  // u = 0, pairing 0
        double eps = stencil.mults[t] * stencil.eps_s;
        for (int i = 0; i < nb1; ++i) {
            Solution sol = engine.solve_data(eps * f_scaled[i]);
            for (int j = 0; j < nb2; ++j)
                d.P[t](i, j) = engine.pairing(sol.u, basisW2.fields[j]);
        }
    }

    // measurement mode: high-order weights on the full stencil; low-order minimal stencils
    auto fd_on_mults = [&](const std::vector<int>& mm, int k) {
        std::vector<double> offs(mm.size());
        for (std::size_t t = 0; t < mm.size(); ++t) offs[t] = mm[t] * stencil.eps_s;
        return fd_weights(offs, k);
    };
    std::vector<double> full_offs(nt);
    for (int t = 0; t < nt; ++t) full_offs[t] = stencil.mults[t] * stencil.eps_s;

    d.D_meas.assign(K, Eigen::MatrixXd::Zero(nb1, nb2));
    d.D_lo.assign(K, Eigen::MatrixXd::Zero(nb1, nb2));
    for (int k = 1; k <= K; ++k) {
        std::vector<double> wf = fd_weights(full_offs, k);
        for (int t = 0; t < nt; ++t) d.D_meas[k - 1] += wf[t] * d.P[t];

        static const std::vector<std::vector<int>> lo_mults = {
            {-1, 1}, {-1, 0, 1}, {-2, -1, 1, 2}, {-2, -1, 0, 1, 2}};
        const auto& mm = lo_mults[std::min(k, 4) - 1];
        std::vector<double> wl = fd_on_mults(mm, k);
        for (std::size_t q = 0; q < mm.size(); ++q) {
            int t = -1;
            for (int tt = 0; tt < nt; ++tt)
                if (stencil.mults[tt] == mm[q]) t = tt;
            if (t < 0) throw SpecViolation("stencil lacks points for the minimal difference");
            d.D_lo[k - 1] += wl[q] * d.P[t];
        }
    }

    // direct mode via the linearization cascade
    d.D_direct.assign(K, Eigen::MatrixXd::Zero(nb1, nb2));
    for (int i = 0; i < nb1; ++i) {
        std::vector<ScalarField> uc = solve_cascade(engine.linear_operator(), a, f_scaled[i], K, opts);
        for (int k = 1; k <= K; ++k) {
            ScalarField bulk = ScalarField::Zero(grid.n_nodes());
            for (int m = 2; m <= k; ++m) {
                ScalarField bell = partial_bell(k, m, uc);
                for (int n : grid.interior_nodes) bulk[n] += a.c(m)[n] * bell[n];
            }
            for (int j = 0; j < nb2; ++j) {
                double val = engine.pairing_linear_operator(uc[k - 1], basisW2.fields[j]);
                for (int n : grid.interior_nodes)
                    if (basisW2.fields[j][n] != 0.0) val += bulk[n] * basisW2.fields[j][n] * grid.w;
                d.D_direct[k - 1](i, j) = val;
            }
        }
    }

    d.dual_gap.assign(K, 0.0);
    for (int k = 1; k <= K; ++k) {
        double scale = std::max(d.D_direct[k - 1].cwiseAbs().maxCoeff(), 1e-300);
        d.dual_gap[k - 1] = (d.D_meas[k - 1] - d.D_direct[k - 1]).cwiseAbs().maxCoeff() / scale;
        double est_err = (d.D_lo[k - 1] - d.D_meas[k - 1]).cwiseAbs().maxCoeff();
        if (est_err > 0.1 * scale)
            throw StencilTooCoarse("estimated FD error exceeds 10% of the direct value at order " +
                                   std::to_string(k));
    }
    return d;
}

bool dn_restriction_equal(const DnData& d1, const DnData& d2, double tol) {
    if (d1.nb1() != d2.nb1() || d1.nb2() != d2.nb2() || d1.K != d2.K ||
        d1.stencil.mults != d2.stencil.mults || d1.stencil.eps_s != d2.stencil.eps_s)
        throw BasisMismatch("DN data sets use different bases or stencils");
    for (int k = 1; k <= d1.K; ++k) {
        double scale = std::max({d1.D_meas[k - 1].cwiseAbs().maxCoeff(),
                                 d2.D_meas[k - 1].cwiseAbs().maxCoeff(), 1e-300});
        if ((d1.D_meas[k - 1] - d2.D_meas[k - 1]).cwiseAbs().maxCoeff() > tol * scale) return false;
    }
    return true;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void save_dn_data(const DnData& d, const std::string& path, bool blind) {
    std::ostringstream out;
    out << "fmse-dndata v1\n";
    out << "dim " << d.dim << " s " << fmt17(d.s) << " K " << d.K << " eps_s "
        << fmt17(d.stencil.eps_s) << " nb1 " << d.nb1() << " nb2 " << d.nb2() << " blind "
        << (blind ? 1 : 0) << " grid_hash " << d.grid_hash << " coeffs_hash " << d.coeffs_hash
        << " normalize " << (d.stencil.normalize_response ? 1 : 0) << "\n";
    out << "mults";
    for (int m : d.stencil.mults) out << " " << m;
    out << "\nfscale";
    for (double v : d.f_scale) out << " " << fmt17(v);
    out << "\n";
    for (std::size_t t = 0; t < d.P.size(); ++t)
        for (int i = 0; i < d.nb1(); ++i)
            for (int j = 0; j < d.nb2(); ++j)
                out << "P " << t << " " << i << " " << j << " " << fmt17(d.P[t](i, j)) << "\n";
    for (int k = 1; k <= d.K; ++k)
        for (int i = 0; i < d.nb1(); ++i)
            for (int j = 0; j < d.nb2(); ++j) {
                out << "DM " << k << " " << i << " " << j << " " << fmt17(d.D_meas[k - 1](i, j))
                    << "\n";
                out << "DL " << k << " " << i << " " << j << " " << fmt17(d.D_lo[k - 1](i, j))
                    << "\n";
                if (!blind && !d.D_direct.empty())
                    out << "DD " << k << " " << i << " " << j << " "
                        << fmt17(d.D_direct[k - 1](i, j)) << "\n";
            }
    for (int k = 1; k <= d.K; ++k) out << "GAP " << k << " " << fmt17(d.dual_gap[k - 1]) << "\n";
    out << "end\n";

    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw FmseError("cannot write " + tmp);
        f << out.str();
    }
    std::filesystem::rename(tmp, path);
}

DnData load_dn_data(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FmseError("cannot open " + path);
    std::string line;
    std::getline(f, line);
    if (line != "fmse-dndata v1") throw FmseError("not a DN data file: " + path);

    DnData d;
    int nb1 = 0, nb2 = 0, blind = 1, normalize = 1;
    {
        std::getline(f, line);
        std::istringstream is(line);
        std::string key;
        while (is >> key) {
            if (key == "dim") is >> d.dim;
            else if (key == "s") is >> d.s;
            else if (key == "K") is >> d.K;
            else if (key == "eps_s") is >> d.stencil.eps_s;
            else if (key == "nb1") is >> nb1;
            else if (key == "nb2") is >> nb2;
            else if (key == "blind") is >> blind;
            else if (key == "grid_hash") is >> d.grid_hash;
            else if (key == "coeffs_hash") is >> d.coeffs_hash;
            else if (key == "normalize") is >> normalize;
            else throw FmseError("unknown DN metadata key: " + key);
        }
    }
    d.stencil.normalize_response = normalize != 0;
    {
        std::getline(f, line);
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key != "mults") throw FmseError("expected stencil multipliers");
        d.stencil.mults.clear();
        int m;
        while (is >> m) d.stencil.mults.push_back(m);
    }
    {
        std::getline(f, line);
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key != "fscale") throw FmseError("expected f scales");
        d.f_scale.clear();
        double v;
        while (is >> v) d.f_scale.push_back(v);
    }
    d.P.assign(d.stencil.mults.size(), Eigen::MatrixXd::Zero(nb1, nb2));
    d.D_meas.assign(d.K, Eigen::MatrixXd::Zero(nb1, nb2));
    d.D_lo.assign(d.K, Eigen::MatrixXd::Zero(nb1, nb2));
    if (!blind) d.D_direct.assign(d.K, Eigen::MatrixXd::Zero(nb1, nb2));
    d.dual_gap.assign(d.K, 0.0);

    while (std::getline(f, line)) {
        if (line == "end") break;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "P") {
            int t, i, j;
            double v;
            is >> t >> i >> j >> v;
            d.P[t](i, j) = v;
        } else if (tag == "DM" || tag == "DL" || tag == "DD") {
            int k, i, j;
            double v;
            is >> k >> i >> j >> v;
            if (tag == "DM") d.D_meas[k - 1](i, j) = v;
            if (tag == "DL") d.D_lo[k - 1](i, j) = v;
            if (tag == "DD") d.D_direct[k - 1](i, j) = v;
        } else if (tag == "GAP") {
            int k;
            double v;
            is >> k >> v;
            d.dual_gap[k - 1] = v;
        } else {
            throw FmseError("unknown DN data tag: " + tag);
        }
    }
    return d;
}

}  // namespace fmse

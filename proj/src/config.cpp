#include "fmse/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "fmse/io.hpp"
#include "json.hpp"

namespace fmse {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw SpecViolation("unknown key '" + it.key() + "' in " + where);
}

Point read_point(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw SpecViolation(where + " must be an array of length " + std::to_string(dim));
    Point p{0, 0};
    for (int d = 0; d < dim; ++d) p[d] = j[d].get<double>();
    return p;
}

Region read_region(const json& j, int dim, const std::string& where) {
    require_keys(j, where, {"shape", "center", "half", "radius"});
    std::string shape = j.at("shape").get<std::string>();
    Point c = read_point(j.at("center"), dim, where + ".center");
    if (shape == "box") {
        Point h = read_point(j.at("half"), dim, where + ".half");
        return Region::box(c, h);
    }
    if (shape == "ball") return Region::ball(c, j.at("radius").get<double>());
    throw SpecViolation(where + ".shape must be 'box' or 'ball'");
}

BasisSpec read_basis(const json& j, int dim, const std::string& where) {
    require_keys(j, where, {"centers", "radii"});
    BasisSpec b;
    for (const auto& c : j.at("centers")) b.centers.push_back(read_point(c, dim, where));
    for (const auto& r : j.at("radii")) b.radii.push_back(r.get<double>());
    if (b.centers.size() != b.radii.size())
        throw SpecViolation(where + ": centers and radii lengths differ");
    return b;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FmseError("cannot open config " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw FmseError("config parse error in " + path + ": " + e.what());
    }

    require_keys(j, "config",
                 {"dimension", "box", "omega", "w1", "w2", "nodes_per_axis", "s", "potential",
                  "nonlinearity", "solver", "exterior_data", "dn", "inversion", "output_dir",
                  "seed"});

    RunConfig cfg;
    cfg.domain.dim = j.at("dimension").get<int>();
    const int dim = cfg.domain.dim;
    {
        const auto& b = j.at("box");
        require_keys(b, "box", {"lo", "hi"});
        cfg.domain.box_lo = read_point(b.at("lo"), dim, "box.lo");
        cfg.domain.box_hi = read_point(b.at("hi"), dim, "box.hi");
    }
    cfg.domain.omega = read_region(j.at("omega"), dim, "omega");
    cfg.domain.w1 = read_region(j.at("w1"), dim, "w1");
    cfg.domain.w2 = read_region(j.at("w2"), dim, "w2");
    cfg.nodes_per_axis = j.at("nodes_per_axis").get<int>();
    cfg.s = j.at("s").get<double>();

    if (j.contains("potential")) {
        const auto& p = j.at("potential");
        require_keys(p, "potential", {"preset", "amplitude", "center", "radius", "parts", "csv"});
        auto read_part = [&](const json& part) {
            require_keys(part, "potential part", {"preset", "amplitude", "center", "radius"});
            RunConfig::PotentialPart pp;
            pp.preset = part.at("preset").get<std::string>();
            if (pp.preset == "zero") return pp;
            if (part.at("amplitude").is_array()) {
                auto a = read_point(part.at("amplitude"), dim, "potential.amplitude");
                pp.amplitude = a;
            } else {
                pp.amplitude = {part.at("amplitude").get<double>(), 0};
            }
            pp.center = read_point(part.at("center"), dim, "potential.center");
            pp.radius = part.at("radius").get<double>();
            return pp;
        };
        if (p.contains("csv")) {
            cfg.potential_csv = p.at("csv").get<std::string>();
        } else if (p.contains("parts")) {
            for (const auto& part : p.at("parts")) cfg.potential_parts.push_back(read_part(part));
        } else if (p.contains("preset") && p.at("preset").get<std::string>() != "zero") {
            cfg.potential_parts.push_back(read_part(p));
        }
    }

    {
        const auto& nl = j.at("nonlinearity");
        require_keys(nl, "nonlinearity", {"R0", "coefficients"});
        cfg.R0 = nl.at("R0").get<double>();
        for (const auto& c : nl.at("coefficients")) {
            require_keys(c, "coefficient",
                         {"order", "kind", "value", "amplitude", "center", "sigma", "radius"});
            RunConfig::CoefficientSpec cs;
            cs.order = c.at("order").get<int>();
            cs.kind = c.at("kind").get<std::string>();
            if (c.contains("value")) cs.value = c.at("value").get<double>();
            if (c.contains("amplitude")) cs.amplitude = c.at("amplitude").get<double>();
            if (c.contains("center")) cs.center = read_point(c.at("center"), dim, "coefficient.center");
            if (c.contains("sigma")) cs.sigma = c.at("sigma").get<double>();
            if (c.contains("radius")) cs.radius = c.at("radius").get<double>();
            cfg.coefficients.push_back(cs);
        }
        if (cfg.coefficients.empty()) throw SpecViolation("nonlinearity.coefficients is empty");
    }

    if (j.contains("solver")) {
        const auto& s_ = j.at("solver");
        require_keys(s_, "solver",
                     {"tol_linear", "tol_picard", "max_picard_iters", "delta", "eps0", "damping"});
        if (s_.contains("tol_linear")) cfg.solver.tol_linear = s_.at("tol_linear").get<double>();
        if (s_.contains("tol_picard")) cfg.solver.tol_picard = s_.at("tol_picard").get<double>();
        if (s_.contains("max_picard_iters"))
            cfg.solver.max_picard_iters = s_.at("max_picard_iters").get<int>();
        if (s_.contains("delta")) cfg.solver.delta = s_.at("delta").get<double>();
        if (s_.contains("eps0")) cfg.solver.eps0 = s_.at("eps0").get<double>();
        if (s_.contains("damping")) cfg.solver.damping = s_.at("damping").get<double>();
    }
    cfg.solver.validate();

    if (j.contains("exterior_data")) {
        const auto& e = j.at("exterior_data");
        require_keys(e, "exterior_data", {"center", "radius", "amplitude"});
        cfg.exterior_data.center = read_point(e.at("center"), dim, "exterior_data.center");
        cfg.exterior_data.radius = e.at("radius").get<double>();
        cfg.exterior_data.amplitude = e.at("amplitude").get<double>();
    }

    if (j.contains("dn")) {
        const auto& d = j.at("dn");
        require_keys(d, "dn", {"eps_s", "K", "normalize_response", "basis_w1", "basis_w2"});
        if (d.contains("eps_s")) cfg.stencil.eps_s = d.at("eps_s").get<double>();
        if (d.contains("K")) cfg.dn_K = d.at("K").get<int>();
        if (d.contains("normalize_response"))
            cfg.stencil.normalize_response = d.at("normalize_response").get<bool>();
        if (d.contains("basis_w1")) cfg.basis_w1 = read_basis(d.at("basis_w1"), dim, "dn.basis_w1");
        if (d.contains("basis_w2")) cfg.basis_w2 = read_basis(d.at("basis_w2"), dim, "dn.basis_w2");
    }

    if (j.contains("inversion")) {
        const auto& iv = j.at("inversion");
        require_keys(iv, "inversion",
                     {"lambda_reg", "mask_theta", "target_radius_cells", "multi_f", "max_dual_gap",
                      "max_runge_misfit"});
        if (iv.contains("lambda_reg")) cfg.inversion.lambda_reg = iv.at("lambda_reg").get<double>();
        if (iv.contains("mask_theta")) cfg.inversion.mask_theta = iv.at("mask_theta").get<double>();
        if (iv.contains("target_radius_cells"))
            cfg.inversion.target_radius_cells = iv.at("target_radius_cells").get<double>();
        if (iv.contains("multi_f")) cfg.inversion.multi_f = iv.at("multi_f").get<bool>();
        if (iv.contains("max_dual_gap"))
            cfg.inversion.max_dual_gap = iv.at("max_dual_gap").get<double>();
        if (iv.contains("max_runge_misfit"))
            cfg.inversion.max_runge_misfit = iv.at("max_runge_misfit").get<double>();
    }

    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    cfg.domain.validate();

    // far-field tail validity: the box must pad supp(g) and Omega by >= diam(Omega)/2;
    // supp(g) is what the run actually uses (exterior datum and basis bumps)
    double pad_needed = cfg.domain.omega.circumradius(dim);
    for (int d = 0; d < dim; ++d) {
        double extent = cfg.domain.omega.extent(d);
        if (cfg.exterior_data.radius > 0)
            extent = std::max(extent,
                              std::abs(cfg.exterior_data.center[d]) + cfg.exterior_data.radius);
        for (const BasisSpec* b : {&cfg.basis_w1, &cfg.basis_w2})
            for (std::size_t k = 0; k < b->centers.size(); ++k)
                extent = std::max(extent, std::abs(b->centers[k][d]) + b->radii[k]);
        if (cfg.domain.box_hi[d] - extent < pad_needed - 1e-12 ||
            -cfg.domain.box_lo[d] - extent < pad_needed - 1e-12)
            throw SpecViolation("box must pad supp(g) and Omega by at least diam(Omega)/2");
    }
    return cfg;
}

Grid make_grid(const RunConfig& cfg) { return build_grid(cfg.domain, cfg.nodes_per_axis); }

MagneticPotential make_potential(const RunConfig& cfg, const Grid& grid) {
    if (!cfg.potential_csv.empty())
        return MagneticPotential::from_values(grid, io::load_pair_csv(cfg.potential_csv, grid));
    MagneticPotential A = MagneticPotential::zero(grid);
    for (const auto& part : cfg.potential_parts) {
        MagneticPotential p = MagneticPotential::zero(grid);
        if (part.preset == "zero") continue;
        if (part.preset == "antisymmetric_radial")
            p = potential_antisymmetric_radial(grid, part.amplitude[0], part.center, part.radius);
        else if (part.preset == "symmetric_product")
            p = potential_symmetric_product(grid, part.amplitude, part.center, part.radius);
        else
            throw SpecViolation("unknown potential preset '" + part.preset + "'");
        for (int d = 0; d < grid.dim(); ++d) A.values.comp[d] += p.values.comp[d];
    }
    return A;
}

Nonlinearity make_nonlinearity_from_config(const RunConfig& cfg, const Grid& grid) {
    int K = 1;
    for (const auto& c : cfg.coefficients) K = std::max(K, c.order);
    std::vector<ScalarField> fields(K, ScalarField::Zero(grid.n_nodes()));
    for (const auto& c : cfg.coefficients) {
        if (c.order < 1) throw SpecViolation("coefficient order must be >= 1");
        ScalarField& f = fields[c.order - 1];
        if (c.kind == "zero") continue;
        if (c.kind == "constant") {
            for (int i : grid.interior_nodes) f[i] += c.value;
        } else if (c.kind == "gaussian") {
            for (int i : grid.interior_nodes) {
                double r2 = 0;
                for (int d = 0; d < grid.dim(); ++d) {
                    double dx = grid.pos[i][d] - c.center[d];
                    r2 += dx * dx;
                }
                f[i] += c.amplitude * std::exp(-r2 / (c.sigma * c.sigma));
            }
        } else if (c.kind == "bump") {
            ScalarField b = bump(grid, c.center, c.radius, c.amplitude);
            for (int i : grid.interior_nodes) f[i] += b[i];
        } else {
            throw SpecViolation("unknown coefficient kind '" + c.kind + "'");
        }
    }
    return make_nonlinearity(grid, std::move(fields), cfg.R0);
}

ExteriorBasis make_basis(const RunConfig& cfg, const Grid& grid, const std::string& window) {
    const BasisSpec& b = (window == "W1") ? cfg.basis_w1 : cfg.basis_w2;
    if (b.centers.empty()) throw SpecViolation("config defines no basis for " + window);
    return make_bump_basis(grid, window, b.centers, b.radii);
}

ScalarField make_exterior_datum(const RunConfig& cfg, const Grid& grid) {
    if (cfg.exterior_data.radius <= 0)
        throw SpecViolation("config defines no exterior datum");
    ScalarField g = bump(grid, cfg.exterior_data.center, cfg.exterior_data.radius,
                         cfg.exterior_data.amplitude);
    for (int i : grid.interior_nodes)
        if (g[i] != 0.0) throw SpecViolation("exterior datum support intersects Omega");
    return g;
}

}  // namespace fmse

#include "fmse/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fmse {
namespace io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

namespace {
void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw FmseError("cannot write " + tmp);
        f << content;
    }
    std::filesystem::rename(tmp, path);
}
}  // namespace

void write_field_csv(const std::string& path, const Grid& grid,
                     const std::vector<std::pair<std::string, const ScalarField*>>& columns) {
    std::ostringstream out;
    out << "x";
    if (grid.dim() == 2) out << ",y";
    out << ",interior";
    for (const auto& [name, f] : columns) out << "," << name;
    out << "\n";
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i) {
        out << fmt17(grid.pos[i][0]);
        if (grid.dim() == 2) out << "," << fmt17(grid.pos[i][1]);
        out << "," << int(grid.interior[i]);
        for (const auto& [name, f] : columns) out << "," << fmt17((*f)[i]);
        out << "\n";
    }
    atomic_write(path, out.str());
}

void write_matrix_csv(const std::string& path, const OperatorMatrix& M) {
    std::ostringstream out;
    out << "row,col,value\n";
    for (Eigen::Index r = 0; r < M.rows.rows(); ++r)
        for (Eigen::Index c = 0; c < M.rows.cols(); ++c)
            if (M.rows(r, c) != 0.0)
                out << M.row_nodes[r] << "," << c << "," << fmt17(M.rows(r, c)) << "\n";
    out << "row,tail,value\n";
    for (Eigen::Index r = 0; r < M.tail_weight.size(); ++r)
        out << M.row_nodes[r] << ",tail," << fmt17(M.tail_weight[r]) << "\n";
    atomic_write(path, out.str());
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ostringstream out;
    for (const auto& [k, v] : entries) out << k << ": " << v << "\n";
    atomic_write(path, out.str());
}

VectorPairField load_pair_csv(const std::string& path, const Grid& grid) {
    std::ifstream f(path);
    if (!f) throw FmseError("cannot open potential table " + path);
    VectorPairField v(grid.dim(), grid.n_nodes());
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        std::istringstream is(line);
        std::string tok;
        long i, j;
        double ax, ay = 0;
        std::getline(is, tok, ',');
        i = std::stol(tok);
        std::getline(is, tok, ',');
        j = std::stol(tok);
        std::getline(is, tok, ',');
        ax = std::stod(tok);
        if (grid.dim() == 2) {
            std::getline(is, tok, ',');
            ay = std::stod(tok);
        }
        if (i < 0 || i >= grid.n_nodes() || j < 0 || j >= grid.n_nodes())
            throw FmseError("pair index out of range in " + path);
        v.comp[0](i, j) = ax;
        if (grid.dim() == 2) v.comp[1](i, j) = ay;
    }
    return v;
}

}  // namespace io
}  // namespace fmse

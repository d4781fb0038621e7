#include "opnorm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "opnorm/errors.hpp"

namespace opnorm::io {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
    throw parse_error(path, line, msg);
}

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw parse_error(path, 0, "cannot open file");
    return in;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw parse_error(path, 0, "cannot open file for writing");
    return out;
}

Matrix read_matrix_market(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++lineno;
    std::istringstream banner(lowercase(line));
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%matrixmarket" || object != "matrix")
        fail(path, lineno, "expected a MatrixMarket banner");
    if (format != "array" && format != "coordinate")
        fail(path, lineno, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer" && field != "double")
        fail(path, lineno, "unsupported field '" + field + "'");
    const bool coordinate = (format == "coordinate");
    const bool symmetric = (symmetry == "symmetric");
    if (!symmetric && symmetry != "general")
        fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

    auto next_data_line = [&](std::istringstream& out_ss) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '%') continue;
            out_ss.clear();
            out_ss.str(line);
            return true;
        }
        return false;
    };

    std::istringstream ss;
    if (!next_data_line(ss)) fail(path, lineno, "missing size line");
    Index rows = 0, cols = 0;
    std::int64_t nnz = 0;
    if (coordinate) {
        if (!(ss >> rows >> cols >> nnz)) fail(path, lineno, "bad coordinate size line");
    } else {
        if (!(ss >> rows >> cols)) fail(path, lineno, "bad array size line");
    }
    if (rows < 1 || cols < 1) fail(path, lineno, "matrix dimensions must be positive");

    Matrix M = Matrix::Zero(rows, cols);
    if (coordinate) {
        for (std::int64_t k = 0; k < nnz; ++k) {
            if (!next_data_line(ss)) fail(path, lineno, "unexpected end of entries");
            Index i, j;
            double v;
            if (!(ss >> i >> j >> v)) fail(path, lineno, "bad coordinate entry");
            if (i < 1 || i > rows || j < 1 || j > cols)
                fail(path, lineno, "coordinate out of range");
            M(i - 1, j - 1) = v;
            if (symmetric) M(j - 1, i - 1) = v;
        }
    } else {
        // array banner stores column-major values
        const std::int64_t need =
            symmetric ? (cols * (cols + 1)) / 2 : std::int64_t(rows) * cols;
        std::int64_t got = 0;
        Index i = 0, j = 0;
        if (symmetric) i = j;
        while (got < need) {
            if (!next_data_line(ss)) fail(path, lineno, "unexpected end of entries");
            double v;
            while (ss >> v) {
                M(i, j) = v;
                if (symmetric) M(j, i) = v;
                ++got;
                if (++i >= rows) {
                    ++j;
                    i = symmetric ? j : 0;
                }
                if (got == need) break;
            }
            if (!ss.eof()) fail(path, lineno, "bad numeric entry");
        }
    }
    return M;
}

Matrix read_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    long lineno = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof()) fail(path, lineno, "bad numeric entry");
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            fail(path, lineno, "ragged row: expected " + std::to_string(rows.front().size()) +
                                   " entries, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path, lineno, "no data rows");
    Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
    return M;
}

constexpr char kBinaryMagic[4] = {'O', 'P', 'N', 'B'};

Matrix read_binary(const std::string& path) {
    std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t rows = 0, cols = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0)
        fail(path, 0, "not an OPNB matrix file");
    if (version != 1) fail(path, 0, "unsupported OPNB version");
    if (rows < 1 || cols < 1 || rows * cols > (std::uint64_t(1) << 32))
        fail(path, 0, "bad OPNB dimensions");
    Matrix M(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            if (!in) fail(path, 0, "truncated OPNB payload");
            M(static_cast<Index>(i), static_cast<Index>(j)) = v;
        }
    return M;
}

void write_matrix_market(const std::string& path, const Matrix& M) {
    std::ofstream out = open_output(path);
    out << "%%MatrixMarket matrix array real general\n";
    out << M.rows() << " " << M.cols() << "\n";
    out.precision(17);
    for (Index j = 0; j < M.cols(); ++j)
        for (Index i = 0; i < M.rows(); ++i) out << M(i, j) << "\n";
    if (!out) throw parse_error(path, 0, "write failed");
}

void write_csv(const std::string& path, const Matrix& M) {
    std::ofstream out = open_output(path);
    out.precision(17);
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << M(i, j);
        out << "\n";
    }
    if (!out) throw parse_error(path, 0, "write failed");
}

void write_binary(const std::string& path, const Matrix& M) {
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    const std::uint32_t version = 1;
    const std::uint64_t rows = M.rows(), cols = M.cols();
    out.write(kBinaryMagic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) {
            const double v = M(i, j);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
    if (!out) throw parse_error(path, 0, "write failed");
}

}  // namespace

MatrixFormat format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const std::string ext = (dot == std::string::npos) ? "" : lowercase(path.substr(dot + 1));
    if (ext == "csv") return MatrixFormat::csv;
    if (ext == "bin" || ext == "opnb") return MatrixFormat::binary;
    return MatrixFormat::matrix_market;
}

Matrix read_matrix(const std::string& path) { return read_matrix(path, format_from_path(path)); }

Matrix read_matrix(const std::string& path, MatrixFormat fmt) {
    switch (fmt) {
        case MatrixFormat::csv: return read_csv(path);
        case MatrixFormat::binary: return read_binary(path);
        default: return read_matrix_market(path);
    }
}

void write_matrix(const std::string& path, const Matrix& M) {
    write_matrix(path, M, format_from_path(path));
}

void write_matrix(const std::string& path, const Matrix& M, MatrixFormat fmt) {
    switch (fmt) {
        case MatrixFormat::csv: write_csv(path, M); break;
        case MatrixFormat::binary: write_binary(path, M); break;
        default: write_matrix_market(path, M);
    }
}

reduction::LabelCoverInstance read_instance(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    long lineno = 0;

    auto next_line = [&](std::istringstream& ss) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            ss.clear();
            ss.str(line);
            return true;
        }
        return false;
    };

    std::istringstream ss;
    if (!next_line(ss)) fail(path, lineno, "missing header");
    std::string tag;
    int V, E, R, L;
    if (!(ss >> tag >> V >> E >> R >> L) || tag != "labelcover")
        fail(path, lineno, "expected header 'labelcover V E R L'");

    reduction::LabelCoverInstance inst;
    inst.num_vertices = V;
    inst.big_labels = R;
    inst.small_labels = L;
    for (int e = 0; e < E; ++e) {
        if (!next_line(ss)) fail(path, lineno, "unexpected end of edges");
        reduction::LabelCoverInstance::Edge ed;
        if (!(ss >> ed.u >> ed.v)) fail(path, lineno, "bad edge endpoints");
        ed.pi_u.resize(R);
        ed.pi_v.resize(R);
        for (int j = 0; j < R; ++j) {
            int v1;
            if (!(ss >> v1)) fail(path, lineno, "missing pi_u value");
            ed.pi_u[j] = v1 - 1;  // file values are 1-based
        }
        for (int j = 0; j < R; ++j) {
            int v2;
            if (!(ss >> v2)) fail(path, lineno, "missing pi_v value");
            ed.pi_v[j] = v2 - 1;
        }
        inst.edges.push_back(std::move(ed));
    }
    try {
        inst.validate();
    } catch (const std::domain_error& err) {
        fail(path, lineno, err.what());
    }
    return inst;
}

void write_instance(const std::string& path, const reduction::LabelCoverInstance& inst) {
    std::ofstream out = open_output(path);
    out << "labelcover " << inst.num_vertices << " " << inst.edges.size() << " "
        << inst.big_labels << " " << inst.small_labels << "\n";
    for (const auto& e : inst.edges) {
        out << e.u << " " << e.v;
        for (int v : e.pi_u) out << " " << (v + 1);
        for (int v : e.pi_v) out << " " << (v + 1);
        out << "\n";
    }
    if (!out) throw parse_error(path, 0, "write failed");
}

reduction::Labeling read_labeling(const std::string& path, int num_vertices) {
    std::ifstream in = open_input(path);
    reduction::Labeling l;
    int v;
    while (in >> v) l.labels.push_back(v - 1);
    if (static_cast<int>(l.labels.size()) != num_vertices)
        fail(path, 0, "expected " + std::to_string(num_vertices) + " labels, found " +
                          std::to_string(l.labels.size()));
    return l;
}

void write_labeling(const std::string& path, const reduction::Labeling& l) {
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < l.labels.size(); ++i)
        out << l.labels[i] + 1 << (i + 1 == l.labels.size() ? "\n" : " ");
    if (!out) throw parse_error(path, 0, "write failed");
}

}  // namespace opnorm::io

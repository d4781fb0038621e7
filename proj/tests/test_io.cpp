#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "opnorm/errors.hpp"
#include "opnorm/io.hpp"
#include "opnorm/reduction.hpp"
#include "opnorm/rng.hpp"

using namespace opnorm;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("opnorm_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = rng.gaussian();
    return M;
}

}  // namespace

TEST_CASE("matrix round trips through every format") {
    TempDir tmp;
    Rng rng(81);
    for (auto [rows, cols] : {std::pair<Index, Index>{5, 3}, {1, 1}, {4, 7}}) {
        const Matrix M = random_matrix(rows, cols, rng);
        for (const char* name : {"m.mtx", "m.csv", "m.bin"}) {
            const std::string path = tmp.file(name);
            io::write_matrix(path, M);
            const Matrix back = io::read_matrix(path);
            REQUIRE(back.rows() == rows);
            REQUIRE(back.cols() == cols);
            CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);  // full-precision round trip
        }
    }
}

TEST_CASE("matrix market coordinate and symmetric banners") {
    TempDir tmp;
    const std::string path = tmp.file("coord.mtx");
    {
        std::ofstream out(path);
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "% comment line\n"
            << "3 3 2\n"
            << "1 2 5.0\n"
            << "3 3 -1.5\n";
    }
    const Matrix M = io::read_matrix(path);
    CHECK(M(0, 1) == 5.0);
    CHECK(M(2, 2) == -1.5);
    CHECK(M(0, 0) == 0.0);

    const std::string sym = tmp.file("sym.mtx");
    {
        std::ofstream out(sym);
        out << "%%MatrixMarket matrix coordinate real symmetric\n"
            << "2 2 2\n"
            << "1 1 1.0\n"
            << "2 1 3.0\n";
    }
    const Matrix S = io::read_matrix(sym);
    CHECK(S(0, 1) == 3.0);
    CHECK(S(1, 0) == 3.0);
}

TEST_CASE("parse failures carry the offending line") {
    TempDir tmp;
    const std::string path = tmp.file("bad.mtx");
    {
        std::ofstream out(path);
        out << "not a banner\n1 1\n1.0\n";
    }
    CHECK_THROWS_AS(io::read_matrix(path), parse_error);
    try {
        io::read_matrix(path);
    } catch (const parse_error& e) {
        CHECK(e.line() == 1);
    }

    const std::string ragged = tmp.file("ragged.csv");
    {
        std::ofstream out(ragged);
        out << "1,2,3\n4,5\n";
    }
    try {
        io::read_matrix(ragged);
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
    }

    CHECK_THROWS_AS(io::read_matrix(tmp.file("missing.mtx")), parse_error);
}

TEST_CASE("instance and labeling files round trip") {
    TempDir tmp;
    const auto planted = reduction::generate_planted(4, 2, 3, 2, 17, true);
    const std::string ipath = tmp.file("inst.txt");
    io::write_instance(ipath, planted.instance);
    const auto back = io::read_instance(ipath);
    CHECK(back.num_vertices == planted.instance.num_vertices);
    CHECK(back.big_labels == planted.instance.big_labels);
    CHECK(back.small_labels == planted.instance.small_labels);
    REQUIRE(back.edges.size() == planted.instance.edges.size());
    for (std::size_t i = 0; i < back.edges.size(); ++i) {
        CHECK(back.edges[i].u == planted.instance.edges[i].u);
        CHECK(back.edges[i].v == planted.instance.edges[i].v);
        CHECK(back.edges[i].pi_u == planted.instance.edges[i].pi_u);
        CHECK(back.edges[i].pi_v == planted.instance.edges[i].pi_v);
    }

    const std::string lpath = tmp.file("lab.txt");
    io::write_labeling(lpath, *planted.labeling);
    const auto lab = io::read_labeling(lpath, 4);
    CHECK(lab.labels == planted.labeling->labels);
    CHECK(reduction::satisfies_all(back, lab));

    CHECK_THROWS_AS(io::read_labeling(lpath, 5), parse_error);
}

TEST_CASE("instance grammar errors") {
    TempDir tmp;
    const std::string path = tmp.file("bad_inst.txt");
    {
        std::ofstream out(path);
        out << "labelcover 2 1 2 2\n0 1 1 2\n";  // edge line too short
    }
    CHECK_THROWS_AS(io::read_instance(path), parse_error);

    const std::string bad_header = tmp.file("bad_header.txt");
    {
        std::ofstream out(bad_header);
        out << "labelgraph 2 1 2 2\n";
    }
    CHECK_THROWS_AS(io::read_instance(bad_header), parse_error);
}

TEST_CASE("format selection by extension") {
    CHECK(io::format_from_path("a.mtx") == io::MatrixFormat::matrix_market);
    CHECK(io::format_from_path("a.mm") == io::MatrixFormat::matrix_market);
    CHECK(io::format_from_path("a.csv") == io::MatrixFormat::csv);
    CHECK(io::format_from_path("a.bin") == io::MatrixFormat::binary);
    CHECK(io::format_from_path("a.opnb") == io::MatrixFormat::binary);
}

#include "tkrylov/coordinate_io.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tkrylov {

namespace {

[[noreturn]] void parse_error(long line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "coordinate parse error at line " << line_no << ": " << what;
    throw std::runtime_error(msg.str());
}

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

SparseTensor3 read_coordinate(std::istream& in, SparseTensor3::DuplicatePolicy policy) {
    std::string line;
    long line_no = 0;
    int l = 0, m = 0, n = 0;
    std::int64_t nnz = -1;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        std::istringstream header(line);
        if (!(header >> l >> m >> n >> nnz)) parse_error(line_no, "expected header \"l m n nnz\"");
        std::string trailing;
        if (header >> trailing) parse_error(line_no, "unexpected token after header: " + trailing);
        break;
    }
    if (nnz < 0) throw std::runtime_error("coordinate parse error: missing header line");
    if (l < 1 || m < 1 || n < 1) parse_error(line_no, "dimensions must be positive");
    if (nnz > static_cast<std::int64_t>(l) * m * n)
        parse_error(line_no, "nnz exceeds l*m*n");

    std::vector<SparseEntry> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    while (static_cast<std::int64_t>(entries.size()) < nnz && std::getline(in, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        std::istringstream row(line);
        SparseEntry e{};
        if (!(row >> e.i >> e.j >> e.k >> e.value))
            parse_error(line_no, "expected \"i j k value\"");
        std::string trailing;
        if (row >> trailing) parse_error(line_no, "unexpected token: " + trailing);
        if (e.i < 1 || e.i > l || e.j < 1 || e.j > m || e.k < 1 || e.k > n) {
            std::ostringstream what;
            what << "index (" << e.i << "," << e.j << "," << e.k << ") outside declared dims " << l
                 << "x" << m << "x" << n;
            parse_error(line_no, what.str());
        }
        entries.push_back(e);
    }
    if (static_cast<std::int64_t>(entries.size()) < nnz) {
        std::ostringstream what;
        what << "file ended after " << entries.size() << " of " << nnz << " entries";
        throw std::runtime_error("coordinate parse error: " + what.str());
    }

    try {
        return SparseTensor3(l, m, n, std::move(entries), policy);
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(std::string("coordinate parse error: ") + err.what());
    }
}

SparseTensor3 read_coordinate_file(const std::string& path,
                                   SparseTensor3::DuplicatePolicy policy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tensor file: " + path);
    return read_coordinate(in, policy);
}

void write_coordinate(std::ostream& out, const SparseTensor3& A) {
    out << A.dim1() << " " << A.dim2() << " " << A.dim3() << " " << A.nnz() << "\n";
    const auto old_precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const SparseEntry& e : A.entries())
        out << e.i << " " << e.j << " " << e.k << " " << e.value << "\n";
    out << std::setprecision(old_precision);
}

void write_coordinate_file(const std::string& path, const SparseTensor3& A) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tensor file: " + path);
    write_coordinate(out, A);
}

void write_coordinate(std::ostream& out, const DenseTensor3& A) {
    std::vector<SparseEntry> entries;
    for (int k = 1; k <= A.dim3(); ++k)
        for (int j = 1; j <= A.dim2(); ++j)
            for (int i = 1; i <= A.dim1(); ++i)
                if (A(i, j, k) != 0.0) entries.push_back({i, j, k, A(i, j, k)});
    write_coordinate(out, SparseTensor3(A.dim1(), A.dim2(), A.dim3(), std::move(entries)));
}

void write_coordinate_file(const std::string& path, const DenseTensor3& A) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tensor file: " + path);
    write_coordinate(out, A);
}

}  // namespace tkrylov

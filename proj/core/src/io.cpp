#include "fedgl/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fedgl {

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t\r");
            const auto last = cell.find_last_not_of(" \t\r");
            double value = 0.0;
            const char* begin = cell.data() + (first == std::string::npos ? cell.size() : first);
            const char* end = cell.data() + (last == std::string::npos ? cell.size() : last + 1);
            const auto res = std::from_chars(begin, end, value);
            if (begin == end || res.ptr != end ||
                (res.ec != std::errc() && res.ec != std::errc::result_out_of_range)) {
                throw IoError("matrix csv: bad number '" + cell + "'");
            }
            row.push_back(value);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("matrix csv: ragged rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("matrix csv: no rows");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_graph_file(const std::filesystem::path& path, const GraphVector& g) {
    write_text_file(path, to_edge_list(g));
}

GraphVector read_graph_file(const std::filesystem::path& path) {
    return parse_edge_list(read_text_file(path));
}

std::filesystem::path client_dir(const std::filesystem::path& root, ClientId i) {
    return root / ("client_" + std::to_string(i + 1));
}

std::filesystem::path signals_path(const std::filesystem::path& root, ClientId i) {
    return client_dir(root, i) / "signals.csv";
}

std::filesystem::path truth_path(const std::filesystem::path& root, ClientId i) {
    return root / "truth" / ("client_" + std::to_string(i + 1) + ".edges");
}

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

const std::string& Manifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    throw IoError("manifest has no key '" + key + "'");
}

std::string Manifest::text() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + '\n';
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        m.set(line.substr(0, eq), line.substr(eq + 3));
    }
    return m;
}

void write_family(const std::filesystem::path& root, const GraphFamily& family) {
    write_graph_file(root / "truth" / "base.edges", family.base);
    write_graph_file(root / "truth" / "consensus.edges", family.consensus_truth);
    for (std::size_t i = 0; i < family.locals_truth.size(); ++i) {
        write_graph_file(truth_path(root, i), family.locals_truth[i]);
    }
}

GraphFamily read_family(const std::filesystem::path& root) {
    const Manifest manifest = Manifest::parse(read_text_file(root / "manifest.txt"));
    GraphFamily fam;
    fam.q = std::stod(manifest.get("q"));
    fam.seed = std::stoull(manifest.get("family_seed"));
    const std::size_t clients = std::stoul(manifest.get("clients"));
    fam.base = read_graph_file(root / "truth" / "base.edges");
    fam.consensus_truth = read_graph_file(root / "truth" / "consensus.edges");
    for (std::size_t i = 0; i < clients; ++i) fam.locals_truth.push_back(read_graph_file(truth_path(root, i)));
    return fam;
}

DatasetReader::DatasetReader(std::filesystem::path root) : root_(std::move(root)) {}

std::size_t DatasetReader::clients() const {
    return std::stoul(Manifest::parse(read_text_file(root_ / "manifest.txt")).get("clients"));
}

Matrix DatasetReader::load(ClientId i) {
    const auto path = signals_path(root_, i);
    {
        std::lock_guard lock(mutex_);
        log_.push_back(Access{i, path});
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    return read_matrix_csv(in);
}

std::vector<DatasetReader::Access> DatasetReader::accesses() const {
    std::lock_guard lock(mutex_);
    return log_;
}

}  // namespace fedgl

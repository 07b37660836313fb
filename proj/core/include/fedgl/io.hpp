#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fedgl/client.hpp"
#include "fedgl/datagen.hpp"
#include "fedgl/graph.hpp"

namespace fedgl {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Comma-separated rows at 17 significant digits, so values round-trip exactly.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

/// Whole-file helpers; both throw IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void write_graph_file(const std::filesystem::path& path, const GraphVector& g);
GraphVector read_graph_file(const std::filesystem::path& path);

/// Dataset directory layout:
///   manifest.txt
///   truth/base.edges, truth/consensus.edges, truth/client_<i>.edges
///   client_<i>/signals.csv
/// Client directories are numbered from 1.
std::filesystem::path client_dir(const std::filesystem::path& root, ClientId i);
std::filesystem::path signals_path(const std::filesystem::path& root, ClientId i);
std::filesystem::path truth_path(const std::filesystem::path& root, ClientId i);

/// Key = value pairs in insertion order.
struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value);
    /// Throws IoError when the key is missing.
    const std::string& get(const std::string& key) const;
    std::string text() const;
    static Manifest parse(const std::string& text);
};

void write_family(const std::filesystem::path& root, const GraphFamily& family);
/// Reads the truth graphs; q and seed come from the manifest.
GraphFamily read_family(const std::filesystem::path& root);

/// Loads one client's signals at a time and records every file it opens.
class DatasetReader {
public:
    struct Access {
        ClientId client;
        std::filesystem::path path;
    };

    explicit DatasetReader(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::size_t clients() const;

    /// Reads client_<i+1>/signals.csv and nothing else.
    Matrix load(ClientId i);

    std::vector<Access> accesses() const;

private:
    std::filesystem::path root_;
    mutable std::mutex mutex_;
    std::vector<Access> log_;
};

}  // namespace fedgl

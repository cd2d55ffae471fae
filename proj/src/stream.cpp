#include "osgpcp/stream.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string_view>

#include "osgpcp/errors.hpp"
#include "osgpcp/random.hpp"

namespace osgpcp {

namespace {

Stream generate_sin(std::size_t n, std::uint64_t seed, std::size_t shift_slot, double noise_after) {
    if (n == 0) {
        throw InputError("stream generator: n must be at least 1");
    }
    RandomStream rng(seed, StreamId::Data);
    Stream out;
    out.reserve(n);
    for (std::size_t t = 1; t <= n; ++t) {
        const double x = rng.uniform(0.0, 10.0);
        const double z = rng.normal();
        const double noise_std = t <= shift_slot ? 0.1 : noise_after;
        StreamRecord rec;
        rec.t = t;
        rec.x = Eigen::VectorXd::Constant(1, x);
        rec.y = std::sin(x) + noise_std * z;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == delim) {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\"");
    return std::string(s.substr(b, e - b + 1));
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& column) {
    const std::string cell = trim(raw);
    char* end = nullptr;
    const double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        throw CsvError(CsvError::Kind::NonNumeric, row,
                       "row " + std::to_string(row) + ", column '" + column + "': non-numeric cell '" +
                           cell + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Stream gen_iid(std::size_t n, std::uint64_t seed) {
    return generate_sin(n, seed, n, 0.1);
}

Stream gen_shift(std::size_t n, std::uint64_t seed, std::size_t shift_slot) {
    return generate_sin(n, seed, shift_slot, 0.2);
}

Stream load_csv(const std::filesystem::path& path, const std::vector<std::string>& feature_columns,
                const std::string& target_column, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw CsvError(CsvError::Kind::MissingFile, 0, "cannot open CSV file: " + path.string());
    }
    if (feature_columns.empty()) {
        throw InputError("load_csv: at least one feature column is required");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw CsvError(CsvError::Kind::EmptyFile, 0, "CSV file has no header: " + path.string());
    }
    const auto header = split(line, options.delimiter);
    auto column_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        throw CsvError(CsvError::Kind::MissingColumn, 0,
                       "CSV file " + path.string() + " has no column '" + name + "'");
    };
    std::vector<std::size_t> feature_idx;
    for (const auto& name : feature_columns) feature_idx.push_back(column_index(name));
    const std::size_t target_idx = column_index(target_column);

    Stream out;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split(line, options.delimiter);
        if (cells.size() != header.size()) {
            throw CsvError(CsvError::Kind::RaggedRow, row,
                           "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                               " cells, found " + std::to_string(cells.size()));
        }
        StreamRecord rec;
        rec.t = row;
        rec.x.resize(static_cast<Eigen::Index>(feature_idx.size()));
        for (std::size_t j = 0; j < feature_idx.size(); ++j) {
            rec.x(static_cast<Eigen::Index>(j)) = parse_cell(cells[feature_idx[j]], row, feature_columns[j]);
        }
        rec.y = parse_cell(cells[target_idx], row, target_column);
        out.push_back(std::move(rec));
    }
    if (out.empty()) {
        throw CsvError(CsvError::Kind::EmptyFile, 0, "CSV file has no data rows: " + path.string());
    }
    return out;
}

void write_csv(const Stream& stream, const std::filesystem::path& path, const CsvOptions& options) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open CSV file for writing: " + path.string());
    }
    const Eigen::Index d = stream.empty() ? 1 : stream.front().x.size();
    for (Eigen::Index j = 0; j < d; ++j) out << 'x' << j << options.delimiter;
    out << "y\n";
    for (const auto& rec : stream) {
        for (Eigen::Index j = 0; j < d; ++j) out << format_double(rec.x(j)) << options.delimiter;
        out << format_double(rec.y) << '\n';
    }
    if (!out) {
        throw IoError("failed writing CSV file: " + path.string());
    }
}

}  // namespace osgpcp

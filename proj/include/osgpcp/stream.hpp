#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace osgpcp {

/// One labelled sample in slot order. `t` is 1-based.
struct StreamRecord {
    std::size_t t = 0;
    Eigen::VectorXd x;
    double y = 0.0;
};

using Stream = std::vector<StreamRecord>;

/// y_t = sin(x_t) + n_t, x_t ~ U(0, 10), n_t ~ N(0, 0.1^2).
/// Per slot the data stream draws one uniform for x, then one normal for the noise.
Stream gen_iid(std::size_t n, std::uint64_t seed);

/// Same draws as gen_iid, but the noise std is 0.1 for t <= shift_slot and 0.2 after.
/// With equal seeds the first shift_slot records coincide with gen_iid.
Stream gen_shift(std::size_t n, std::uint64_t seed, std::size_t shift_slot = 5000);

struct CsvOptions {
    char delimiter = ',';
};

/// Reads a headed CSV; each row becomes one record in file order.
/// Throws CsvError (missing file, empty file, missing column, non-numeric cell,
/// ragged row) with the offending 1-based data row where applicable.
Stream load_csv(const std::filesystem::path& path, const std::vector<std::string>& feature_columns,
                const std::string& target_column, const CsvOptions& options = {});

/// Writes columns x0..x{d-1}, y with 17 significant digits.
void write_csv(const Stream& stream, const std::filesystem::path& path, const CsvOptions& options = {});

}  // namespace osgpcp

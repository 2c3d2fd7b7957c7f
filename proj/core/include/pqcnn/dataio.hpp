#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "pqcnn/rng.hpp"

namespace pqcnn::dataio {

// Signal vectors, one sample per row, every value in [0,1] after ingestion.
struct Dataset {
    Eigen::MatrixXd values; // samples x features
    std::string provenance;

    int sample_count() const { return static_cast<int>(values.rows()); }
    int feature_count() const { return static_cast<int>(values.cols()); }
};

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rectangular numeric CSV. Each column is min-max scaled to [0,1] on its
// own (every station has its own dynamic range); constant columns map to
// 0.5. Ragged rows and non-numeric cells raise CsvError with coordinates.
Dataset load_csv(const std::filesystem::path& path, bool has_header);

// Stand-in for a received-signal-strength survey: stations sit on a grid
// over the unit square, each sample picks a random position and sees a
// signal decaying with distance from it, plus a little floor noise. Around
// 5% of stations rise meaningfully above the floor for any one sample.
Dataset synthetic_cellular(int samples, int stations, Rng& rng);

} // namespace pqcnn::dataio

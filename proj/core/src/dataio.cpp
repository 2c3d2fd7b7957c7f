#include "pqcnn/dataio.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace pqcnn::dataio {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    // allow surrounding whitespace, nothing else
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end)))
        ++end;
    if (end == begin || (end && *end != '\0') || !std::isfinite(value))
        throw CsvError("row " + std::to_string(row) + " column " + std::to_string(col) +
                       ": not a number: '" + cell + "'");
    return value;
}

void scale_columns(Eigen::MatrixXd& values) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        const double lo = values.col(c).minCoeff();
        const double hi = values.col(c).maxCoeff();
        if (hi == lo)
            values.col(c).setConstant(0.5);
        else
            values.col(c) = (values.col(c).array() - lo) / (hi - lo);
    }
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in)
        throw CsvError("cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line_number == 1 && has_header)
            continue;
        if (line.empty())
            continue;
        const auto cells = split_cells(line);
        if (width == 0)
            width = cells.size();
        else if (cells.size() != width)
            throw CsvError("row " + std::to_string(line_number) + " has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(width));
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            row.push_back(parse_cell(cells[c], line_number, static_cast<int>(c) + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw CsvError("no data rows in " + path.string());

    Dataset data;
    data.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    scale_columns(data.values);
    data.provenance = "csv:" + path.string();
    return data;
}

Dataset synthetic_cellular(int samples, int stations, Rng& rng) {
    if (samples < 1)
        throw std::invalid_argument("synthetic_cellular: need at least 1 sample");
    if (stations < 2)
        throw std::invalid_argument("synthetic_cellular: need at least 2 stations");

    // Station grid over the unit square; 19x19 covers the 361-station case
    // exactly.
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(stations))));
    const double spacing = side > 1 ? 1.0 / (side - 1) : 1.0;
    constexpr double kDecay = 0.06;    // signal e-folding radius
    constexpr double kNoiseCap = 0.02; // floor noise amplitude

    Dataset data;
    data.values.resize(samples, stations);
    for (int s = 0; s < samples; ++s) {
        const double u = rng.next_real();
        const double v = rng.next_real();
        for (int i = 0; i < stations; ++i) {
            const double sx = (i % side) * spacing;
            const double sy = (i / side) * spacing;
            const double d2 = (sx - u) * (sx - u) + (sy - v) * (sy - v);
            const double signal = std::exp(-d2 / (2.0 * kDecay * kDecay));
            const double noise = kNoiseCap * rng.next_real();
            data.values(s, i) = std::min(1.0, signal + noise);
        }
    }
    data.provenance = "synthetic";
    return data;
}

} // namespace pqcnn::dataio

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "rebalance/dataset.hpp"

namespace rebalance {

/// Label column selected by header name or zero-based position.
using ColumnSelector = std::variant<std::string, std::size_t>;

struct CsvOptions {
    ColumnSelector label_column = std::size_t{0};
    bool has_header = true;
};

/**
 * Reads an RFC-4180 file. Labels are re-encoded to dense 0..C-1 following
 * the sorted order of their spellings (numeric order when every label
 * parses as a number); the spellings are kept as class names. Row ids are
 * the zero-based data row positions.
 *
 * Throws DataError for empty input, ragged rows, and non-numeric or
 * non-finite feature cells (the message names row and column).
 */
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);
Dataset read_csv(std::istream& in, const CsvOptions& options);

/// Writes features then the label column (original spellings), 17 significant digits.
void write_csv(const std::filesystem::path& path, const Dataset& ds, const std::string& label_name = "label");
void write_csv(std::ostream& out, const Dataset& ds, const std::string& label_name = "label");

}  // namespace rebalance

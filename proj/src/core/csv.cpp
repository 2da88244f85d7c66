#include "rebalance/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rebalance/error.hpp"

namespace rebalance {
namespace {

// Reads one RFC-4180 record. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    const std::size_t start_line = line;
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            ++line;
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            ++line;
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) throw DataError("unterminated quoted field starting on line " + std::to_string(start_line));
    fields.push_back(std::move(field));
    ++line;
    return true;
}

bool is_blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].find_first_not_of(" \t") == std::string::npos;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view text, double& value) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
    std::vector<std::string> fields;
    std::size_t line = 1;
    std::vector<std::string> header;

    if (options.has_header) {
        if (!read_record(in, fields, line)) throw DataError("empty dataset");
        header = fields;
    }

    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> record_lines;
    std::size_t record_line = line;
    while (read_record(in, fields, line)) {
        if (!is_blank(fields)) {
            records.push_back(fields);
            record_lines.push_back(record_line);
        }
        record_line = line;
    }
    if (records.empty()) throw DataError("empty dataset");

    const std::size_t width = options.has_header ? header.size() : records.front().size();
    std::size_t label_col = 0;
    if (const auto* name = std::get_if<std::string>(&options.label_column)) {
        const auto it = std::find_if(header.begin(), header.end(),
                                     [&](const std::string& h) { return trim(h) == trim(*name); });
        if (it == header.end()) throw DataError("label column '" + *name + "' not found in header");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else {
        label_col = std::get<std::size_t>(options.label_column);
    }
    if (label_col >= width) {
        throw DataError("label column index " + std::to_string(label_col) + " out of range (" +
                        std::to_string(width) + " columns)");
    }

    auto column_name = [&](std::size_t j) {
        return j < header.size() ? "'" + std::string(trim(header[j])) + "'" : std::to_string(j);
    };

    const std::size_t n = records.size();
    const std::size_t d = width - 1;
    Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<std::string> raw_labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rec = records[i];
        if (rec.size() != width) {
            throw DataError("row " + std::to_string(i + 1) + " (line " + std::to_string(record_lines[i]) +
                            ") has " + std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(width));
        }
        std::size_t out_col = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (j == label_col) {
                raw_labels[i] = std::string(trim(rec[j]));
                continue;
            }
            double v = 0.0;
            if (!parse_double(rec[j], v)) {
                throw DataError("non-numeric value '" + rec[j] + "' at row " + std::to_string(i + 1) + " (line " +
                                std::to_string(record_lines[i]) + "), column " + column_name(j));
            }
            if (!std::isfinite(v)) {
                throw DataError("non-finite value '" + rec[j] + "' at row " + std::to_string(i + 1) + " (line " +
                                std::to_string(record_lines[i]) + "), column " + column_name(j));
            }
            features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out_col++)) = v;
        }
    }

    // dense label encoding
    std::vector<std::string> names = raw_labels;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    bool numeric = true;
    for (const auto& s : names) {
        double v;
        if (!parse_double(s, v)) {
            numeric = false;
            break;
        }
    }
    if (numeric) {
        std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            double x = 0, y = 0;
            parse_double(a, x);
            parse_double(b, y);
            return x < y;
        });
    }
    std::map<std::string, Label> code;
    for (std::size_t c = 0; c < names.size(); ++c) code[names[c]] = static_cast<Label>(c);
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = code.at(raw_labels[i]);

    std::vector<std::string> feature_names;
    if (options.has_header) {
        for (std::size_t j = 0; j < width; ++j) {
            if (j != label_col) feature_names.emplace_back(trim(header[j]));
        }
    }
    return Dataset(std::move(features), std::move(labels), {}, std::move(feature_names), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& ds, const std::string& label_name) {
    const auto d = ds.cols();
    for (std::size_t j = 0; j < d; ++j) {
        out << quote_if_needed(j < ds.feature_names().size() ? ds.feature_names()[j] : "f" + std::to_string(j))
            << ',';
    }
    out << quote_if_needed(label_name) << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g",
                          ds.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out << buf << ',';
        }
        out << quote_if_needed(ds.class_name(ds.label(i))) << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Dataset& ds, const std::string& label_name) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, ds, label_name);
}

}  // namespace rebalance

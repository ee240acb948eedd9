#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace artequity {

// Minimal RFC-4180-style CSV IO. Fields may be double-quoted with ""
// escapes; quoted fields may contain commas and newlines. Lines starting
// with '#' before the header row are metadata comments and are skipped
// (emitted artifacts carry one with the config digest).
class CsvReader {
public:
    explicit CsvReader(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::string>& comments() const { return comments_; }

    // Throws DataError if the header row does not match exactly.
    void require_header(const std::vector<std::string>& expected, const std::string& file_label);

    // Reads the next record into `fields`. Returns false at EOF.
    // `row` is the 1-based record index (header = record 0).
    bool next(std::vector<std::string>& fields, std::size_t& row);

private:
    bool read_record(std::vector<std::string>& fields);

    std::ifstream in_;
    std::string path_;
    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::size_t record_index_ = 0;
};

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header,
              const std::string& comment = "");

    void write_row(const std::vector<std::string>& fields);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_;
};

std::string csv_escape(const std::string& field);

} // namespace artequity

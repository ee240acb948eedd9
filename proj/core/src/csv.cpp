#include "artequity/csv.hpp"

#include "artequity/common.hpp"

namespace artequity {

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw DataError("cannot open file: " + path);
    // Skip leading '#' metadata lines, then take the first record as header.
    while (in_.peek() == '#') {
        std::string line;
        std::getline(in_, line);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        comments_.push_back(line);
    }
    if (in_.peek() == EOF) throw DataError("empty file (no header row): " + path);
    if (!read_record(header_)) throw DataError("empty file (no header row): " + path);
}

void CsvReader::require_header(const std::vector<std::string>& expected,
                               const std::string& file_label) {
    if (header_ != expected) {
        std::string want, got;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        for (const auto& h : header_) got += (got.empty() ? "" : ",") + h;
        throw DataError(file_label + ": schema mismatch, expected header '" + want +
                        "' but found '" + got + "'");
    }
}

bool CsvReader::next(std::vector<std::string>& fields, std::size_t& row) {
    if (!read_record(fields)) return false;
    row = ++record_index_;
    return true;
}

bool CsvReader::read_record(std::vector<std::string>& fields) {
    fields.clear();
    if (in_.peek() == EOF) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (;;) {
        const int ci = in_.get();
        if (ci == EOF) {
            if (!any && field.empty() && fields.empty()) return false;
            fields.push_back(std::move(field));
            return true;
        }
        const char c = static_cast<char>(ci);
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty()) {
                quoted = true;
            } else {
                field.push_back(c);
            }
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            if (in_.peek() == '\n') in_.get();
            fields.push_back(std::move(field));
            return true;
        case '\n':
            fields.push_back(std::move(field));
            return true;
        default:
            field.push_back(c);
        }
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header,
                     const std::string& comment)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw DataError("cannot open file for writing: " + path);
    if (!comment.empty()) out_ << "# " << comment << "\n";
    write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw DataError("csv writer: column count mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
}

} // namespace artequity

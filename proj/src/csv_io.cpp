#include "binrep/csv_io.hpp"

#include <fstream>
#include <sstream>

namespace binrep {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN";
}

int parse_int(const std::string& cell, const std::string& what, std::size_t row) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw validation_error("row " + std::to_string(row) + ": cannot parse " + what +
                               " from '" + cell + "'");
    }
}

ReplicateDataset parse_sufficient(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty CSV input");
    const auto header = split_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "n" || header[2] != "s") {
        throw validation_error("sufficient CSV header must be 'id,n,s,status'");
    }
    std::vector<IndividualRecord> recs;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() < 3) {
            throw validation_error("row " + std::to_string(row) + ": expected id,n,s[,status]");
        }
        IndividualRecord rec;
        rec.id = cells[0];
        rec.n = parse_int(cells[1], "n", row);
        rec.s = parse_int(cells[2], "s", row);
        if (rec.s > rec.n) {
            throw validation_error("row " + std::to_string(row) + ": s > n");
        }
        if (cells.size() > 3 && !is_missing(cells[3])) {
            rec.status = parse_int(cells[3], "status", row);
        }
        recs.push_back(std::move(rec));
    }
    return ReplicateDataset(std::move(recs));
}

ReplicateDataset parse_wide(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty CSV input");
    const auto header = split_line(line);
    if (header.size() < 2 || header[0] != "id") {
        throw validation_error("wide CSV header must be 'id,x1,...,xJ[,status]'");
    }
    const bool has_status = header.back() == "status";
    const std::size_t n_cols = header.size() - (has_status ? 2 : 1);
    if (n_cols == 0) throw validation_error("wide CSV must have at least one replicate column");

    std::vector<std::string> ids;
    std::vector<std::vector<int>> values;
    std::vector<std::optional<int>> status;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        // Trailing empty cells may be dropped by the splitter; pad them back.
        while (cells.size() < header.size()) cells.emplace_back();
        if (cells.size() > header.size()) {
            throw validation_error("row " + std::to_string(row) + ": too many columns");
        }
        ids.push_back(cells[0]);
        std::vector<int> vals(n_cols, RawReplicateTable::kMissing);
        for (std::size_t j = 0; j < n_cols; ++j) {
            const std::string& cell = cells[j + 1];
            if (is_missing(cell)) continue;
            if (cell == "0") {
                vals[j] = 0;
            } else if (cell == "1") {
                vals[j] = 1;
            } else {
                throw validation_error("row " + std::to_string(row) + ": non-binary cell '" +
                                       cell + "'");
            }
        }
        values.push_back(std::move(vals));
        if (has_status && !is_missing(cells.back())) {
            status.push_back(parse_int(cells.back(), "status", row));
        } else {
            status.emplace_back();
        }
    }
    RawReplicateTable table(std::move(ids), std::move(values), std::move(status));
    return reduce_to_sufficient(table);
}

}  // namespace

ReplicateDataset parse_csv(const std::string& text, CsvFormat format) {
    std::istringstream in(text);
    return format == CsvFormat::sufficient ? parse_sufficient(in) : parse_wide(in);
}

ReplicateDataset load_csv(const std::string& path, CsvFormat format) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    return format == CsvFormat::sufficient ? parse_sufficient(in) : parse_wide(in);
}

std::string to_sufficient_csv(const ReplicateDataset& data) {
    std::ostringstream out;
    out << "id,n,s,status\n";
    for (const auto& rec : data.individuals()) {
        out << rec.id << ',' << rec.n << ',' << rec.s << ',';
        if (rec.status) out << *rec.status;
        out << '\n';
    }
    return out.str();
}

void save_csv(const ReplicateDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write '" + path + "'");
    out << to_sufficient_csv(data);
}

std::string to_wide_csv(const RawReplicateTable& table) {
    bool any_status = false;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        any_status |= table.status(i).has_value();
    }
    std::ostringstream out;
    out << "id";
    for (std::size_t j = 0; j < table.cols(); ++j) out << ",x" << (j + 1);
    if (any_status) out << ",status";
    out << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out << table.id(i);
        for (std::size_t j = 0; j < table.cols(); ++j) {
            out << ',';
            if (table.observed(i, j)) out << table.value(i, j);
        }
        if (any_status) {
            out << ',';
            if (table.status(i)) out << *table.status(i);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace binrep

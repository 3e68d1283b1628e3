#pragma once

#include <string>

#include "binrep/dataset.hpp"

namespace binrep {

enum class CsvFormat {
    sufficient,  // header: id,n,s,status   (status may be blank)
    wide,        // header: id,x1,...,xJ[,status]; empty or NA cells are missing
};

ReplicateDataset load_csv(const std::string& path, CsvFormat format);
ReplicateDataset parse_csv(const std::string& text, CsvFormat format);

// Writes the sufficient format; blank status column when unknown.
std::string to_sufficient_csv(const ReplicateDataset& data);
void save_csv(const ReplicateDataset& data, const std::string& path);

// Writes the wide format with a trailing status column when any row has one.
std::string to_wide_csv(const RawReplicateTable& table);

}  // namespace binrep

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace binrep {

// Thrown when input data breaks a structural constraint (bad counts,
// duplicate ids, missing status, ...). Maps to exit code 1 in the CLI.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a numeric routine cannot produce a finite result.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One individual reduced to its sufficient statistic: n replicates,
// s of which were positive. status holds the true latent state when known.
struct IndividualRecord {
    std::string id;
    int n = 0;
    int s = 0;
    std::optional<int> status;
};

class ReplicateDataset {
  public:
    ReplicateDataset() = default;
    explicit ReplicateDataset(std::vector<IndividualRecord> individuals);

    const std::vector<IndividualRecord>& individuals() const { return individuals_; }
    const IndividualRecord& operator[](std::size_t i) const { return individuals_[i]; }
    std::size_t size() const { return individuals_.size(); }

    bool all_status_present() const;
    ReplicateDataset permuted(const std::vector<std::size_t>& order) const;

  private:
    std::vector<IndividualRecord> individuals_;
};

// Raw replicate table: one row per individual, entries 0/1 or missing.
// Cell (i,j) is observed iff mask()(i,j) is true.
class RawReplicateTable {
  public:
    static constexpr int kMissing = -1;

    RawReplicateTable(std::vector<std::string> ids,
                      std::vector<std::vector<int>> values,
                      std::vector<std::optional<int>> status = {});

    std::size_t rows() const { return values_.size(); }
    std::size_t cols() const { return values_.empty() ? 0 : values_.front().size(); }
    int value(std::size_t i, std::size_t j) const { return values_[i][j]; }
    bool observed(std::size_t i, std::size_t j) const { return values_[i][j] != kMissing; }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::optional<int>& status(std::size_t i) const { return status_[i]; }

  private:
    std::vector<std::string> ids_;
    std::vector<std::vector<int>> values_;
    std::vector<std::optional<int>> status_;
};

// Fixed model parameters (theta_T, p, q) under the working hypothesis
// 0 < p,q < 1/2 and 0 < theta_T < 1.
struct ModelParams {
    double theta_T = 0.5;
    double p = 0.1;
    double q = 0.1;

    void validate() const;
    bool satisfies_h1() const;
};

ReplicateDataset reduce_to_sufficient(const RawReplicateTable& raw);

// Infers (theta_T, p, q) from a dataset whose true status is fully known.
ModelParams latent_oracle_estimates(const ReplicateDataset& data);

}  // namespace binrep

#include "binrep/dataset.hpp"

#include <unordered_set>

namespace binrep {

ReplicateDataset::ReplicateDataset(std::vector<IndividualRecord> individuals)
    : individuals_(std::move(individuals)) {
    if (individuals_.empty()) {
        throw validation_error("dataset must contain at least one individual");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < individuals_.size(); ++i) {
        const auto& rec = individuals_[i];
        if (rec.n < 1) {
            throw validation_error("individual '" + rec.id + "': replicate count must be >= 1");
        }
        if (rec.s < 0 || rec.s > rec.n) {
            throw validation_error("individual '" + rec.id + "': s must satisfy 0 <= s <= n");
        }
        if (rec.status && *rec.status != 0 && *rec.status != 1) {
            throw validation_error("individual '" + rec.id + "': status must be 0 or 1");
        }
        if (!seen.insert(rec.id).second) {
            throw validation_error("duplicate individual id '" + rec.id + "'");
        }
    }
}

bool ReplicateDataset::all_status_present() const {
    for (const auto& rec : individuals_) {
        if (!rec.status) return false;
    }
    return true;
}

ReplicateDataset ReplicateDataset::permuted(const std::vector<std::size_t>& order) const {
    if (order.size() != individuals_.size()) {
        throw validation_error("permutation length does not match dataset size");
    }
    std::vector<IndividualRecord> out;
    out.reserve(order.size());
    for (std::size_t idx : order) out.push_back(individuals_.at(idx));
    return ReplicateDataset(std::move(out));
}

RawReplicateTable::RawReplicateTable(std::vector<std::string> ids,
                                     std::vector<std::vector<int>> values,
                                     std::vector<std::optional<int>> status)
    : ids_(std::move(ids)), values_(std::move(values)), status_(std::move(status)) {
    if (values_.empty()) {
        throw validation_error("raw replicate table must have at least one row");
    }
    if (ids_.size() != values_.size()) {
        throw validation_error("raw replicate table: ids and rows differ in length");
    }
    if (status_.empty()) status_.resize(values_.size());
    if (status_.size() != values_.size()) {
        throw validation_error("raw replicate table: status and rows differ in length");
    }
    const std::size_t width = values_.front().size();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i].size() != width) {
            throw validation_error("row '" + ids_[i] + "': ragged replicate table");
        }
        bool any_observed = false;
        for (int v : values_[i]) {
            if (v != kMissing && v != 0 && v != 1) {
                throw validation_error("row '" + ids_[i] + "': replicate entries must be 0, 1 or missing");
            }
            any_observed |= (v != kMissing);
        }
        if (!any_observed) {
            throw validation_error("row '" + ids_[i] + "': no observed replicate");
        }
    }
}

void ModelParams::validate() const {
    if (!(theta_T > 0.0 && theta_T < 1.0)) {
        throw validation_error("theta_T must lie in (0,1)");
    }
    if (!satisfies_h1()) {
        throw validation_error("p and q must lie in (0,1/2)");
    }
}

bool ModelParams::satisfies_h1() const {
    return p > 0.0 && p < 0.5 && q > 0.0 && q < 0.5;
}

ReplicateDataset reduce_to_sufficient(const RawReplicateTable& raw) {
    std::vector<IndividualRecord> recs;
    recs.reserve(raw.rows());
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        IndividualRecord rec;
        rec.id = raw.id(i);
        rec.status = raw.status(i);
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            if (!raw.observed(i, j)) continue;
            ++rec.n;
            rec.s += raw.value(i, j);
        }
        recs.push_back(std::move(rec));
    }
    return ReplicateDataset(std::move(recs));
}

ModelParams latent_oracle_estimates(const ReplicateDataset& data) {
    double sum_t = 0.0;
    double s_neg = 0.0, n_neg = 0.0;
    double f_pos = 0.0, n_pos = 0.0;
    for (const auto& rec : data.individuals()) {
        if (!rec.status) {
            throw validation_error("individual '" + rec.id + "': status required for latent estimates");
        }
        const int t = *rec.status;
        sum_t += t;
        if (t == 0) {
            s_neg += rec.s;
            n_neg += rec.n;
        } else {
            f_pos += rec.n - rec.s;
            n_pos += rec.n;
        }
    }
    if (n_neg <= 0.0) {
        throw validation_error("false-positivity rate undefined: no replicates with status 0");
    }
    if (n_pos <= 0.0) {
        throw validation_error("false-negativity rate undefined: no replicates with status 1");
    }
    ModelParams out;
    out.theta_T = sum_t / static_cast<double>(data.size());
    out.p = s_neg / n_neg;
    out.q = f_pos / n_pos;
    return out;
}

}  // namespace binrep

#include "driftcause/data_table.hpp"

#include <stdexcept>

#include "driftcause/errors.hpp"

namespace driftcause {

DataTable::DataTable(std::vector<std::string> names, std::vector<int> cardinalities)
    : names_(std::move(names)), cards_(std::move(cardinalities)) {
    if (names_.size() != cards_.size()) {
        throw std::invalid_argument("DataTable: names and cardinalities differ in length");
    }
    columns_.resize(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw std::invalid_argument("DataTable: empty column name");
        if (cards_[i] < 1) throw std::invalid_argument("DataTable: cardinality must be >= 1");
        auto [it, inserted] = index_.emplace(names_[i], static_cast<int>(i));
        (void)it;
        if (!inserted) throw std::invalid_argument("DataTable: duplicate column name " + names_[i]);
    }
}

int DataTable::column_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown column: " + name);
    return it->second;
}

void DataTable::append_row(std::span<const int> values) {
    if (values.size() != names_.size()) {
        throw std::invalid_argument("DataTable: row width mismatch");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0 || values[i] >= cards_[i]) {
            throw DataError("DataTable: value out of range for column " + names_[i]);
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) columns_[i].push_back(values[i]);
    ++rows_;
}

void DataTable::append_rows(const DataTable& other) {
    if (other.names_ != names_ || other.cards_ != cards_) {
        throw std::invalid_argument("DataTable: schema mismatch in append_rows");
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        columns_[i].insert(columns_[i].end(), other.columns_[i].begin(), other.columns_[i].end());
    }
    rows_ += other.rows_;
}

DataTable DataTable::select_rows(const std::vector<std::size_t>& rows) const {
    DataTable out(names_, cards_);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out.columns_[i].reserve(rows.size());
        for (std::size_t r : rows) out.columns_[i].push_back(columns_[i].at(r));
    }
    out.rows_ = rows.size();
    return out;
}

DataTable DataTable::with_column(const std::string& name, int cardinality,
                                 std::vector<int> values) const {
    if (values.size() != rows_) throw std::invalid_argument("with_column: row count mismatch");
    auto names = names_;
    auto cards = cards_;
    names.push_back(name);
    cards.push_back(cardinality);
    DataTable out(std::move(names), std::move(cards));
    out.columns_ = columns_;
    for (int v : values) {
        if (v < 0 || v >= cardinality) throw DataError("with_column: value out of range");
    }
    out.columns_.push_back(std::move(values));
    out.rows_ = rows_;
    return out;
}

DataTable DataTable::permute_columns(const std::vector<int>& order) const {
    if (order.size() != names_.size()) throw std::invalid_argument("permute_columns: bad order");
    std::vector<std::string> names;
    std::vector<int> cards;
    for (int src : order) {
        names.push_back(names_.at(static_cast<std::size_t>(src)));
        cards.push_back(cards_.at(static_cast<std::size_t>(src)));
    }
    DataTable out(std::move(names), std::move(cards));
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.columns_[i] = columns_.at(static_cast<std::size_t>(order[i]));
    }
    out.rows_ = rows_;
    return out;
}

}  // namespace driftcause

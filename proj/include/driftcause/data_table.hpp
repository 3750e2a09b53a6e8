#ifndef DRIFTCAUSE_DATA_TABLE_HPP
#define DRIFTCAUSE_DATA_TABLE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace driftcause {

/// Column-major table of categorical records. Every column has a name and a
/// cardinality; cell values are state codes in [0, cardinality).
class DataTable {
public:
    DataTable() = default;
    DataTable(std::vector<std::string> names, std::vector<int> cardinalities);

    int num_columns() const { return static_cast<int>(names_.size()); }
    std::size_t num_rows() const { return rows_; }

    const std::vector<std::string>& column_names() const { return names_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    int cardinality(int col) const { return cards_.at(static_cast<std::size_t>(col)); }

    bool has_column(const std::string& name) const { return index_.count(name) > 0; }
    int column_index(const std::string& name) const;
    const std::string& column_name(int col) const { return names_.at(static_cast<std::size_t>(col)); }

    const std::vector<int>& column(int col) const { return columns_.at(static_cast<std::size_t>(col)); }
    int value(std::size_t row, int col) const { return columns_[static_cast<std::size_t>(col)][row]; }

    void append_row(std::span<const int> values);
    /// Appends all rows of `other`, which must have the identical schema.
    void append_rows(const DataTable& other);

    DataTable select_rows(const std::vector<std::size_t>& rows) const;
    DataTable with_column(const std::string& name, int cardinality, std::vector<int> values) const;
    /// Reordered copy; `order[i]` names the source column placed at position i.
    DataTable permute_columns(const std::vector<int>& order) const;

private:
    std::vector<std::string> names_;
    std::vector<int> cards_;
    std::vector<std::vector<int>> columns_;
    std::unordered_map<std::string, int> index_;
    std::size_t rows_ = 0;
};

}  // namespace driftcause

#endif  // DRIFTCAUSE_DATA_TABLE_HPP

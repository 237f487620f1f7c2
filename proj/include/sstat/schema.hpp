#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sstat {

/// Names and roles of the stored columns of a dataset. Identifier columns
/// are deterministic row labels (the leading index column of generated
/// data); they are excluded from covariance, correlation, and PCA by
/// default downstream.
struct DatasetSchema {
    std::vector<std::string> column_names;
    std::vector<std::size_t> identifier_columns; // sorted, unique

    std::size_t column_count() const { return column_names.size(); }

    bool is_identifier(std::size_t column) const {
        return std::binary_search(identifier_columns.begin(), identifier_columns.end(), column);
    }

    void validate() const {
        if (column_names.empty())
            throw std::invalid_argument("schema: column count must be >= 1");
        for (std::size_t i = 0; i < identifier_columns.size(); ++i) {
            if (identifier_columns[i] >= column_names.size())
                throw std::invalid_argument("schema: identifier column out of range");
            if (i > 0 && identifier_columns[i] <= identifier_columns[i - 1])
                throw std::invalid_argument("schema: identifier columns must be sorted and unique");
        }
    }

    bool operator==(const DatasetSchema&) const = default;

    /// The 11-column generated dataset: identifier A plus variables B..K.
    static DatasetSchema table1() {
        return {{"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K"}, {0}};
    }

    /// Identifier A plus p independent uniform columns U1..Up.
    static DatasetSchema iid_uniform(std::size_t p) {
        DatasetSchema s;
        s.column_names.reserve(p + 1);
        s.column_names.push_back("A");
        for (std::size_t i = 1; i <= p; ++i) s.column_names.push_back("U" + std::to_string(i));
        s.identifier_columns = {0};
        return s;
    }

    /// Placeholder names c1..cp with a leading identifier; used when a file
    /// arrives without any declared schema.
    static DatasetSchema generic(std::size_t p, bool leading_identifier = true) {
        DatasetSchema s;
        s.column_names.reserve(p);
        for (std::size_t i = 1; i <= p; ++i) s.column_names.push_back("c" + std::to_string(i));
        if (leading_identifier && p > 0) s.identifier_columns = {0};
        return s;
    }
};

} // namespace sstat

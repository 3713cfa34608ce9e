#ifndef RPSGMM_CSV_HPP
#define RPSGMM_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "rpsgmm/preprocess.hpp"
#include "rpsgmm/types.hpp"

namespace rpsgmm {

/// Reads a long-format dataset CSV (`series_id,day,channel,value,label`)
/// and assembles one TimeSeries per series_id, rows sorted by day.
/// Throws ParseError, SchemaError, or DuplicateSampleError.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>& schema);

/// Writes a Dataset in the same long format. Values are serialized with
/// enough digits to round-trip exactly.
void save_dataset(const Dataset& data, const std::filesystem::path& path);

/// Reads a raw-observation CSV (`series_id,day,channel,value`), one
/// RawObservations per series_id, in first-appearance order.
std::vector<RawObservations> load_raw_observations(
    const std::filesystem::path& path);

/// Writes `content` to `path` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Formats a double so that parsing it back recovers the exact bits.
std::string format_double(double v);

}  // namespace rpsgmm

#endif  // RPSGMM_CSV_HPP

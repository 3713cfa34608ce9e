#ifndef RPSGMM_BUNDLE_IO_HPP
#define RPSGMM_BUNDLE_IO_HPP

#include <filesystem>
#include <string>

#include "rpsgmm/classifier.hpp"

namespace rpsgmm {

/// Serializes a bundle to a versioned, checksummed text document. Doubles are
/// written as hexfloats, so the round trip is bit exact.
std::string serialize_bundle(const ClassifierBundle& bundle);

/// Parses the text form. Throws IncompatibilityError on an unknown format
/// version and IntegrityError on a checksum mismatch.
ClassifierBundle deserialize_bundle(const std::string& text);

void save_bundle(const ClassifierBundle& bundle,
                 const std::filesystem::path& path);

ClassifierBundle load_bundle(const std::filesystem::path& path);

}  // namespace rpsgmm

#endif  // RPSGMM_BUNDLE_IO_HPP

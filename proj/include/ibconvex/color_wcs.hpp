#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibconvex/environment.hpp"
#include "ibconvex/infometrics.hpp"

namespace ibc {

inline constexpr std::size_t kWcsChipCount = 330;
inline constexpr double kWcsSigma = 64.0;

/// Malformed WCS input file.
class DataFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Chip {
    int id = 0;
    std::string value_row;   // Munsell value row label, e.g. "C"
    std::string hue_column;  // Munsell hue column label, e.g. "17"
    double L = 0.0, a = 0.0, b = 0.0;
};

/// WCS chips ordered by id; row k of the color environment is chips()[k].
class ChipTable {
public:
    explicit ChipTable(std::vector<Chip> chips);

    const std::vector<Chip>& chips() const { return chips_; }
    std::size_t size() const { return chips_.size(); }
    /// Position of `chip_id` in the table, or npos.
    std::size_t index_of(int chip_id) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<Chip> chips_;
};

struct TermResponse {
    int language = 0;
    int speaker = 0;
    int chip = 0;
    std::string term;
};

using TermResponses = std::vector<TermResponse>;

/// Tab-separated chip coordinates: id, value row, hue column, ..., L*, a*, b*.
/// A leading header line and '#' comment lines are skipped.
ChipTable load_chips(const std::filesystem::path& path, std::size_t expected = kWcsChipCount);

/// Tab-separated responses: language, speaker, chip, term.
TermResponses load_terms(const std::filesystem::path& path);

/// Whitespace-separated nonnegative weights.
std::vector<double> load_prior(const std::filesystem::path& path, std::size_t expected = kWcsChipCount);

/// Meanings and referents are the chips; p(u|m) is Gaussian in CIELab
/// distance with standard deviation `sigma`.
Environment build_color_environment(const ChipTable& chips, const std::vector<double>& prior, double sigma = kWcsSigma);
Environment build_color_environment(const ChipTable& chips, const std::filesystem::path& prior_path,
                                    double sigma = kWcsSigma);

struct NaturalEncoder {
    int language = 0;
    std::vector<std::string> terms;  // word index -> label
    Encoder encoder;
    std::size_t unanswered_chips = 0;  // rows filled uniformly for lack of data
};

struct NaturalEncoderSet {
    std::vector<NaturalEncoder> encoders;  // ascending language id
    std::vector<std::string> warnings;
};

/// q(w|m) = (#speakers naming chip m with w) / (#speakers of the language),
/// renormalized per row.
NaturalEncoderSet natural_encoders(const TermResponses& responses, const ChipTable& chips);

}  // namespace ibc

#include "ibconvex/color_wcs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ibc {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_int(const std::string& s, int& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& s, double& out)
{
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

std::ifstream open(const std::filesystem::path& path, const char* what)
{
    std::ifstream in(path);
    if (!in) throw DataFormatError(std::string("cannot open ") + what + " file '" + path.string() + "'");
    return in;
}

std::string where(const std::filesystem::path& path, std::size_t line)
{
    return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

ChipTable::ChipTable(std::vector<Chip> chips) : chips_(std::move(chips))
{
    std::sort(chips_.begin(), chips_.end(), [](const Chip& a, const Chip& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < chips_.size(); ++i)
        if (chips_[i].id == chips_[i - 1].id) throw DataFormatError("duplicate chip id " + std::to_string(chips_[i].id));
    for (const auto& c : chips_)
        if (!std::isfinite(c.L) || !std::isfinite(c.a) || !std::isfinite(c.b))
            throw DataFormatError("chip " + std::to_string(c.id) + " has non-finite coordinates");
}

std::size_t ChipTable::index_of(int chip_id) const
{
    const auto it = std::lower_bound(chips_.begin(), chips_.end(), chip_id, [](const Chip& c, int id) { return c.id < id; });
    return (it != chips_.end() && it->id == chip_id) ? static_cast<std::size_t>(it - chips_.begin()) : npos;
}

ChipTable load_chips(const std::filesystem::path& path, std::size_t expected)
{
    auto in = open(path, "chip");
    std::vector<Chip> chips;
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto f = split_tabs(line);
        Chip c;
        if (!parse_int(f[0], c.id)) {
            if (!seen_data) continue;  // header
            throw DataFormatError(where(path, lineno) + "bad chip id '" + f[0] + "'");
        }
        seen_data = true;
        if (f.size() < 6) throw DataFormatError(where(path, lineno) + "expected at least 6 tab-separated columns");
        c.value_row = f[1];
        c.hue_column = f[2];
        const auto n = f.size();
        if (!parse_double(f[n - 3], c.L) || !parse_double(f[n - 2], c.a) || !parse_double(f[n - 1], c.b))
            throw DataFormatError(where(path, lineno) + "bad CIELab coordinates");
        chips.push_back(std::move(c));
    }
    if (chips.size() != expected)
        throw DataFormatError(path.string() + ": expected " + std::to_string(expected) + " chips, found " +
                              std::to_string(chips.size()));
    return ChipTable(std::move(chips));
}

TermResponses load_terms(const std::filesystem::path& path)
{
    auto in = open(path, "term");
    TermResponses out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() < 4) throw DataFormatError(where(path, lineno) + "expected language, speaker, chip, term");
        TermResponse r;
        if (!parse_int(f[0], r.language) || !parse_int(f[1], r.speaker) || !parse_int(f[2], r.chip))
            throw DataFormatError(where(path, lineno) + "bad numeric field");
        if (r.chip < 1 || r.chip > static_cast<int>(kWcsChipCount))
            throw DataFormatError(where(path, lineno) + "chip id out of range");
        r.term = f[3];
        if (r.term.empty()) throw DataFormatError(where(path, lineno) + "empty term label");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> load_prior(const std::filesystem::path& path, std::size_t expected)
{
    auto in = open(path, "prior");
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        double v = 0.0;
        if (!parse_double(tok, v) || v < 0.0) throw DataFormatError(path.string() + ": bad prior weight '" + tok + "'");
        out.push_back(v);
    }
    if (out.size() != expected)
        throw DataFormatError(path.string() + ": expected " + std::to_string(expected) + " prior weights, found " +
                              std::to_string(out.size()));
    return out;
}

Environment build_color_environment(const ChipTable& chips, const std::vector<double>& prior, double sigma)
{
    if (!(sigma > 0.0)) throw ParameterError("color environment: sigma must be positive");
    const auto n = chips.size();
    if (prior.size() != n) throw ParameterError("color environment: prior size does not match chip count");
    double total = 0.0;
    for (double v : prior) total += v;
    if (!(total > 0.0)) throw ParameterError("color environment: prior has zero mass");

    std::vector<Point> lab;
    lab.reserve(n);
    for (const auto& c : chips.chips()) lab.push_back({c.L, c.a, c.b});

    Eigen::MatrixXd kernel(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t u = 0; u < n; ++u) {
            const double d0 = lab[u][0] - lab[m][0];
            const double d1 = lab[u][1] - lab[m][1];
            const double d2 = lab[u][2] - lab[m][2];
            kernel(m, u) = std::exp(-(d0 * d0 + d1 * d1 + d2 * d2) / denom);
        }
        kernel.row(m) /= kernel.row(m).sum();
    }
    Embedding emb(3, lab);
    return Environment("WCS", Eigen::Map<const Eigen::VectorXd>(prior.data(), static_cast<Eigen::Index>(n)),
                       std::move(kernel), emb, emb);
}

Environment build_color_environment(const ChipTable& chips, const std::filesystem::path& prior_path, double sigma)
{
    return build_color_environment(chips, load_prior(prior_path, chips.size()), sigma);
}

NaturalEncoderSet natural_encoders(const TermResponses& responses, const ChipTable& chips)
{
    struct Language {
        std::set<int> speakers;
        std::map<std::string, std::size_t> term_index;
        std::vector<std::string> terms;
        std::map<std::pair<std::size_t, std::size_t>, double> counts;  // (chip row, term) -> responses
    };
    std::map<int, Language> langs;
    for (const auto& r : responses) {
        const auto row = chips.index_of(r.chip);
        if (row == ChipTable::npos) throw DataFormatError("response refers to unknown chip " + std::to_string(r.chip));
        auto& lang = langs[r.language];
        lang.speakers.insert(r.speaker);
        auto [it, inserted] = lang.term_index.emplace(r.term, lang.terms.size());
        if (inserted) lang.terms.push_back(r.term);
        lang.counts[{row, it->second}] += 1.0;
    }

    NaturalEncoderSet out;
    const auto n = static_cast<Eigen::Index>(chips.size());
    for (auto& [id, lang] : langs) {
        if (lang.speakers.empty() || lang.terms.empty()) {
            out.warnings.push_back("language " + std::to_string(id) + " has no responses; skipped");
            continue;
        }
        const auto words = static_cast<Eigen::Index>(lang.terms.size());
        Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, words);
        const double speakers = static_cast<double>(lang.speakers.size());
        for (const auto& [key, count] : lang.counts)
            table(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = count / speakers;

        NaturalEncoder enc;
        enc.language = id;
        for (Eigen::Index m = 0; m < n; ++m) {
            const double s = table.row(m).sum();
            if (s > 0.0) {
                table.row(m) /= s;
            } else {
                table.row(m).setConstant(1.0 / static_cast<double>(words));
                ++enc.unanswered_chips;
            }
        }
        if (enc.unanswered_chips > 0)
            out.warnings.push_back("language " + std::to_string(id) + ": " + std::to_string(enc.unanswered_chips) +
                                   " chips without responses filled uniformly");
        enc.terms = std::move(lang.terms);
        enc.encoder = Encoder(std::move(table));
        out.encoders.push_back(std::move(enc));
    }
    return out;
}

}  // namespace ibc

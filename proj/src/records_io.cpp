#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ibconvex/experiment.hpp"

namespace ibc {

namespace {

constexpr const char* kRecordsHeader =
    "id,environment,type,base_type,base_id,label,beta,percentage,seed,complexity_bits,accuracy_bits,optimality,"
    "qc_meaning,qc_referent";

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string num(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

template <typename T>
std::string opt(const std::optional<T>& v)
{
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>)
        return num(*v);
    else
        return std::to_string(*v);
}

double parse_num(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParameterError("records CSV: bad number '" + s + "'");
    return v;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<EncoderRecord>& records)
{
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.id << ',' << quote(r.environment) << ',' << to_string(r.type) << ',' << to_string(r.base_type) << ','
            << r.base_id << ',' << quote(r.label) << ',' << opt(r.beta) << ',' << opt(r.percentage) << ',' << opt(r.seed)
            << ',' << num(r.complexity) << ',' << num(r.accuracy) << ',' << num(r.optimality) << ',' << num(r.qc_meaning)
            << ',' << num(r.qc_referent) << '\n';
    }
}

std::vector<EncoderRecord> read_records_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != split_csv(kRecordsHeader))
        throw ParameterError("records CSV: unexpected header");
    std::vector<EncoderRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 14) throw ParameterError("records CSV: expected 14 fields");
        EncoderRecord r;
        r.id = std::stoull(f[0]);
        r.environment = f[1];
        r.type = encoder_type_from_string(f[2]);
        r.base_type = base_type_from_string(f[3]);
        r.base_id = std::stoull(f[4]);
        r.label = f[5];
        if (!f[6].empty()) r.beta = parse_num(f[6]);
        if (!f[7].empty()) r.percentage = parse_num(f[7]);
        if (!f[8].empty()) r.seed = std::stoull(f[8]);
        r.complexity = parse_num(f[9]);
        r.accuracy = parse_num(f[10]);
        r.optimality = parse_num(f[11]);
        r.qc_meaning = parse_num(f[12]);
        r.qc_referent = parse_num(f[13]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_correlations_csv(std::ostream& out, const std::vector<ExperimentResult>& results)
{
    out << "environment,qc_side,variable,r,n,p_value\n";
    for (const auto& res : results)
        for (const auto& c : res.correlations)
            out << quote(res.environment) << ',' << c.x_name << ',' << c.y_name << ',' << num(c.r) << ',' << c.n << ','
                << num(c.p_value) << '\n';
}

void write_long_format_csv(std::ostream& out, const std::vector<EncoderRecord>& records)
{
    out << "convexity,qc_side,type,base_type,base_id,environment\n";
    for (const auto& r : records) {
        out << num(r.qc_meaning) << ",meaning," << to_string(r.type) << ',' << to_string(r.base_type) << ',' << r.base_id
            << ',' << quote(r.environment) << '\n';
        out << num(r.qc_referent) << ",referent," << to_string(r.type) << ',' << to_string(r.base_type) << ','
            << r.base_id << ',' << quote(r.environment) << '\n';
    }
}

}  // namespace ibc

// ibconvex: frontiers, convexity scores and the three experiments from the
// command line.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ibconvex/color_wcs.hpp"
#include "ibconvex/experiment.hpp"
#include "ibconvex/svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for bad invocations that CLI11 itself cannot see (paths, selectors).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string env = "CPUM";
    std::string betas;
    std::size_t n_betas = 0;
    std::size_t steps = ibc::kDefaultConvexitySteps;
    std::uint64_t seed = ibc::kDefaultSeed;
    std::vector<double> percentages = ibc::default_percentages();
    std::size_t per_setting = 1;
    std::string chips, terms, prior;
    double sigma = ibc::kWcsSigma;
    std::string out = ".";
    bool plot = false;
    std::size_t threads = 1;
    bool dump_encoders = false;
    std::string encoder;
    std::string type = "optimal";
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void require_file(const std::string& path, const std::string& flag)
{
    if (path.empty()) throw UsageError(flag + " is required");
    if (!fs::is_regular_file(path)) throw UsageError(flag + ": no such file '" + path + "'");
}

bool is_color(const std::string& name) { return name == "WCS" || name == "color"; }

ibc::ChipTable load_chip_table(const Options& o)
{
    require_file(o.chips, "--chips");
    return ibc::load_chips(o.chips);
}

ibc::Environment color_environment(const Options& o, const ibc::ChipTable& chips)
{
    require_file(o.prior, "--prior");
    return ibc::build_color_environment(chips, fs::path(o.prior), o.sigma);
}

// Toy names, "WCS" (needs --chips/--prior) or a JSON environment file.
ibc::Environment resolve_environment(const std::string& name, const Options& o)
{
    if (is_color(name)) return color_environment(o, load_chip_table(o));
    if (name.size() > 5 && name.ends_with(".json")) {
        require_file(name, "--env");
        std::ifstream in(name);
        return ibc::environment_from_json(json::parse(in));
    }
    return ibc::build_named(name);
}

ibc::AnnealSchedule schedule_for(const Options& o)
{
    if (!o.betas.empty()) {
        require_file(o.betas, "--betas");
        return ibc::AnnealSchedule::from_file(o.betas);
    }
    if (o.n_betas != 0) return ibc::AnnealSchedule::log_spaced(o.n_betas);
    return ibc::AnnealSchedule::log_spaced();
}

json schedule_json(const Options& o, const ibc::AnnealSchedule& s)
{
    json j{{"count", s.size()}, {"max_beta", s.betas().front()}, {"min_beta", s.betas().back()},
           {"tolerance", s.options().tolerance}, {"max_iterations", s.options().max_iterations},
           {"prune_threshold", s.options().prune_threshold}};
    j["source"] = o.betas.empty() ? "log-spaced" : o.betas;
    return j;
}

ibc::ExperimentConfig config_for(const Options& o, ibc::QcSide side)
{
    ibc::ExperimentConfig c;
    c.schedule = schedule_for(o);
    c.steps = o.steps;
    c.seed = o.seed;
    c.percentages = o.percentages;
    c.per_setting = o.per_setting;
    c.threads = std::max<std::size_t>(o.threads, 1);
    c.side = side;
    for (double p : c.percentages)
        if (!(p > 0.0 && p <= 100.0)) throw UsageError("--percentages: values must lie in (0,100]");
    if (c.steps == 0) throw UsageError("--steps must be positive");
    return c;
}

fs::path prepare_out(const Options& o)
{
    fs::path dir(o.out);
    fs::create_directories(dir);
    fs::remove(dir / "FAILED");
    return dir;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    fn(f);
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string safe_name(std::string s)
{
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

// ---------------------------------------------------------------- commands

int cmd_env(const Options& o)
{
    const auto env = resolve_environment(o.env, o);
    const std::string text = ibc::to_json(env).dump(2) + "\n";
    if (o.out == "-" || o.out == ".") {
        std::cout << text;
    } else {
        const fs::path p(o.out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_text(p, text);
    }
    return 0;
}

int cmd_frontier(const Options& o)
{
    const auto env = resolve_environment(o.env, o);
    const auto schedule = schedule_for(o);
    const auto dir = prepare_out(o);
    const auto frontier = ibc::reverse_anneal(env, schedule);
    write_with(dir / "frontier.csv", [&](std::ostream& f) { ibc::write_frontier_csv(f, frontier); });
    if (o.dump_encoders) {
        fs::create_directories(dir / "encoders");
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            auto j = ibc::to_json(frontier[i].encoder);
            j["beta"] = frontier[i].beta;
            char name[32];
            std::snprintf(name, sizeof name, "frontier_%05zu.json", i);
            write_text(dir / "encoders" / name, j.dump() + "\n");
        }
    }
    std::size_t unconverged = 0;
    for (const auto& f : frontier) unconverged += f.converged ? 0 : 1;
    if (unconverged) std::cerr << "warning: " << unconverged << " beta values hit the iteration cap\n";
    std::cout << env.name() << ": " << frontier.size() << " frontier points written to "
              << (dir / "frontier.csv").string() << "\n";
    return 0;
}

int cmd_convexity(const Options& o)
{
    require_file(o.encoder, "--encoder");
    const auto env = resolve_environment(o.env, o);
    std::ifstream in(o.encoder);
    const auto enc = ibc::encoder_from_json(json::parse(in));
    const auto mg = ibc::marginals(env, enc);
    const auto m = ibc::encoder_convexity(env, mg, ibc::QcSide::Meaning, o.steps);
    const auto u = ibc::encoder_convexity(env, mg, ibc::QcSide::Referent, o.steps);
    std::cout.precision(6);
    std::cout << "environment " << env.name() << ", steps " << o.steps << "\n";
    std::cout << "qc_meaning  " << m.value << "\nqc_referent " << u.value << "\n";
    std::cout << "word  q(w)  dcon_meaning  dcon_referent\n";
    for (std::size_t k = 0; k < m.per_word.size(); ++k)
        std::cout << m.per_word[k].word << "  " << m.per_word[k].weight << "  " << m.per_word[k].dcon << "  "
                  << u.per_word[k].dcon << "\n";
    return 0;
}

int cmd_shuffle(const Options& o)
{
    require_file(o.encoder, "--encoder");
    std::ifstream in(o.encoder);
    const auto enc = ibc::encoder_from_json(json::parse(in));
    const auto type = ibc::base_type_from_string(o.type);
    const auto dir = prepare_out(o);
    const auto suite = ibc::generate_suite({enc}, {type}, o.percentages, o.per_setting, o.seed);
    write_with(dir / "manifest.csv", [&](std::ostream& f) {
        f << "source_id,type,percentage,seed,path\n";
        for (std::size_t i = 0; i < suite.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "shuffle_%05zu.json", i);
            write_text(dir / name, ibc::to_json(suite[i].encoder).dump() + "\n");
            f << suite[i].spec.source << ',' << ibc::to_string(suite[i].spec.source_type) << ','
              << suite[i].spec.percentage << ',' << suite[i].spec.seed << ',' << name << '\n';
        }
    });
    std::cout << suite.size() << " shuffled encoders written to " << dir.string() << "\n";
    return 0;
}

// Output files written by an experiment run, so a failure can clean up plots.
struct RunOutputs {
    std::vector<fs::path> files;
    std::vector<fs::path> plots;
};

void write_regressions(const fs::path& path, const std::vector<ibc::ExperimentResult>& results, ibc::QcSide side)
{
    std::ostringstream text;
    text << "Convexity (qc_" << ibc::to_string(side) << ") regressed on type, base type and centered "
         << "optimality, complexity, accuracy with all interactions.\n";
    for (const auto& r : results) {
        text << "\n== " << r.environment << " ==\n";
        try {
            const auto d = ibc::convexity_design(r.records, side);
            text << ibc::format_ols(ibc::ols(d.design, d.response, d.names));
        } catch (const ibc::UndefinedStatisticError& e) {
            text << "not estimable: " << e.what() << "\n";
        }
    }
    write_text(path, text.str());
}

int cmd_experiment(const std::string& which, const Options& o)
{
    const auto side = which == "exp3" ? ibc::QcSide::Referent : ibc::QcSide::Meaning;
    auto config = config_for(o, side);
    const auto dir = prepare_out(o);
    RunOutputs outputs;

    try {
        std::vector<ibc::ExperimentResult> results;
        json composition = json::array();

        auto finish_env = [&](ibc::ExperimentResult result, std::size_t naturals) {
            const auto stem = safe_name(result.environment);
            const auto rec_path = dir / ("records_" + stem + ".csv");
            write_with(rec_path, [&](std::ostream& f) { ibc::write_records_csv(f, result.records); });
            outputs.files.push_back(rec_path);
            if (o.plot) {
                const auto svg = dir / ("plot_" + stem + ".svg");
                outputs.plots.push_back(svg);
                write_text(svg, ibc::render_tradeoff_svg(result.records, side,
                                                         result.environment + ": qc_" + std::string(ibc::to_string(side))));
                outputs.files.push_back(svg);
            }
            composition.push_back({{"environment", result.environment},
                                   {"frontier_encoders", result.frontier.size()},
                                   {"natural_encoders", naturals},
                                   {"records", result.records.size()}});
            std::cerr << result.environment << ": " << result.records.size() << " records\n";
            results.push_back(std::move(result));
        };

        if (which == "exp1") {
            const auto chips = load_chip_table(o);
            const auto env = color_environment(o, chips);
            require_file(o.terms, "--terms");
            auto nat = ibc::natural_encoders(ibc::load_terms(o.terms), chips);
            for (const auto& w : nat.warnings) std::cerr << "warning: " << w << "\n";
            std::vector<ibc::NamedEncoder> named;
            for (auto& n : nat.encoders) named.push_back({"language=" + std::to_string(n.language), std::move(n.encoder)});
            finish_env(ibc::run_experiment(env, config, named), named.size());
        } else {
            std::vector<std::string> names;
            if (o.env == "all")
                names = which == "exp2" ? ibc::experiment2_environment_names() : ibc::experiment3_environment_names();
            else
                names = split_list(o.env);
            if (names.empty()) throw UsageError("--env: no environment selected");
            // Resolve every selector before the long computations start.
            std::vector<ibc::Environment> envs;
            for (const auto& n : names) envs.push_back(resolve_environment(n, o));
            for (const auto& env : envs) finish_env(ibc::run_experiment(env, config), 0);
        }

        write_with(dir / "correlations.csv", [&](std::ostream& f) { ibc::write_correlations_csv(f, results); });
        outputs.files.push_back(dir / "correlations.csv");
        write_regressions(dir / "regression.txt", results, side);
        outputs.files.push_back(dir / "regression.txt");
        write_with(dir / "long_format.csv", [&](std::ostream& f) {
            std::vector<ibc::EncoderRecord> all;
            for (const auto& r : results) all.insert(all.end(), r.records.begin(), r.records.end());
            ibc::write_long_format_csv(f, all);
        });
        outputs.files.push_back(dir / "long_format.csv");

        json manifest{{"command", "experiment"},
                      {"experiment", which},
                      {"qc_side", ibc::to_string(side)},
                      {"steps", config.steps},
                      {"seed", config.seed},
                      {"percentages", config.percentages},
                      {"per_setting", config.per_setting},
                      {"threads", config.threads},
                      {"schedule", schedule_json(o, config.schedule)},
                      {"composition", composition}};
        if (which == "exp1")
            manifest["data"] = {{"chips", o.chips}, {"terms", o.terms}, {"prior", o.prior}, {"sigma", o.sigma}};
        json files = json::array();
        for (const auto& f : outputs.files) files.push_back(f.filename().string());
        files.push_back("manifest.json");
        manifest["outputs"] = files;
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");

        for (const auto& r : results) {
            std::cout << r.environment << "\n";
            for (const auto& c : r.correlations)
                std::cout << "  corr(" << c.x_name << ", " << c.y_name << ") = " << c.r << "  n=" << c.n
                          << "  p " << ibc::format_p_value(c.p_value) << "\n";
        }
        return 0;
    } catch (...) {
        for (const auto& p : outputs.plots) fs::remove(p);
        std::string what = "unknown error";
        try {
            throw;
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        std::ofstream(dir / "FAILED") << what << "\n";
        throw;
    }
}

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("--steps", o.steps, "Level-set steps for quasi-convexity")->capture_default_str();
    sub->add_option("--chips", o.chips, "WCS chip coordinate table (TSV)");
    sub->add_option("--prior", o.prior, "Color prior file");
    sub->add_option("--sigma", o.sigma, "Color meaning standard deviation (CIELab units)")->capture_default_str();
}

void add_schedule(CLI::App* sub, Options& o)
{
    sub->add_option("--betas", o.betas, "File of beta values (replaces the default schedule)");
    sub->add_option("--n-betas", o.n_betas, "Size of a log-spaced schedule including beta=0");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Information bottleneck frontiers and quasi-convexity of word meanings"};
    app.require_subcommand(1);
    Options o;

    auto* env = app.add_subcommand("env", "Print or save an environment as JSON");
    env->add_option("--env", o.env, "Environment name, WCS, or a JSON file")->capture_default_str();
    env->add_option("--out", o.out, "Output JSON path (stdout by default)");
    add_common(env, o);

    auto* frontier = app.add_subcommand("frontier", "Solve the IB frontier by reverse annealing");
    frontier->add_option("--env", o.env, "Environment name, WCS, or a JSON file")->capture_default_str();
    frontier->add_option("--out", o.out, "Output directory")->capture_default_str();
    frontier->add_flag("--dump-encoders", o.dump_encoders, "Also write every frontier encoder as JSON");
    add_schedule(frontier, o);
    add_common(frontier, o);

    std::string which;
    auto* experiment = app.add_subcommand("experiment", "Run experiment exp1, exp2 or exp3");
    experiment->add_option("which", which, "exp1 | exp2 | exp3")->required()->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
    experiment->add_option("--env", o.env, "'all' or a comma-separated list (exp2/exp3)");
    experiment->add_option("--terms", o.terms, "WCS term responses (TSV), exp1 only");
    experiment->add_option("--seed", o.seed, "Master shuffle seed")->capture_default_str();
    experiment->add_option("--percentages", o.percentages, "Shuffle percentages")->delimiter(',')->capture_default_str();
    experiment->add_option("--per-setting", o.per_setting, "Shuffles per encoder and percentage")->capture_default_str();
    experiment->add_option("--out", o.out, "Output directory")->capture_default_str();
    experiment->add_flag("--plot", o.plot, "Write an SVG trade-off plot per environment");
    experiment->add_option("--threads", o.threads, "Worker threads for scoring")->capture_default_str();
    add_schedule(experiment, o);
    add_common(experiment, o);

    auto* convexity = app.add_subcommand("convexity", "Quasi-convexity of an encoder JSON");
    convexity->add_option("--env", o.env, "Environment name, WCS, or a JSON file")->capture_default_str();
    convexity->add_option("--encoder", o.encoder, "Encoder JSON file")->required();
    add_common(convexity, o);

    auto* shuffle = app.add_subcommand("shuffle", "Write shuffled variants of an encoder");
    shuffle->add_option("--encoder", o.encoder, "Encoder JSON file")->required();
    shuffle->add_option("--type", o.type, "Source type tag")->check(CLI::IsMember({"natural", "optimal"}))->capture_default_str();
    shuffle->add_option("--seed", o.seed, "Master shuffle seed")->capture_default_str();
    shuffle->add_option("--percentages", o.percentages, "Shuffle percentages")->delimiter(',')->capture_default_str();
    shuffle->add_option("--per-setting", o.per_setting, "Shuffles per percentage")->capture_default_str();
    shuffle->add_option("--out", o.out, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (experiment->parsed() && experiment->count("--env") == 0) o.env = which == "exp1" ? "WCS" : "all";
        if (env->parsed()) {
            if (env->count("--out") == 0) o.out = "-";
            return cmd_env(o);
        }
        if (frontier->parsed()) return cmd_frontier(o);
        if (experiment->parsed()) return cmd_experiment(which, o);
        if (convexity->parsed()) return cmd_convexity(o);
        if (shuffle->parsed()) return cmd_shuffle(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

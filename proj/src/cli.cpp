#include "predbound/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "predbound/bounds.hpp"
#include "predbound/entropy.hpp"
#include "predbound/processes.hpp"
#include "predbound/spectral.hpp"

namespace predbound::cli {

using nlohmann::json;

namespace {

std::filesystem::path default_output(const std::string& file_name) {
    const char* dir = std::getenv(kOutputDirEnv);
    return std::filesystem::path(dir != nullptr && *dir != '\0' ? dir : ".") / file_name;
}

json optional_json(const auto& v) {
    return v.has_value() ? json(*v) : json(nullptr);
}

// --- bound computation shared by `bound` and `certify` ----------------------

struct BoundSettings {
    std::string method = "knn";
    int m = 1;
    EstimatorConfig estimator;
    std::size_t n_fft = 1024;
};

struct BoundOutcome {
    BoundReport report;
    json extra = json::object();
};

BoundOutcome compute_bound(const Series& series, const std::optional<ProcessModel>& model,
                           const BoundSettings& s) {
    BoundOutcome out;
    if (s.method == "analytic") {
        if (!model) {
            throw InvalidInput("method analytic requires the metadata sidecar with the generating model");
        }
        if (model->kind == ProcessKind::recursive_increment) {
            if (s.m != 1) throw InvalidInput("recursive models support only m = 1");
            out.report = recursive_increment_bound(
                EntropyValue::analytic(innovation_entropy_bits(model->innovation)));
        } else {
            out.report = make_bound_report(analytic_conditional_entropy(*model, s.m),
                                           BoundSetting::prediction, s.m);
        }
    } else if (s.method == "knn") {
        out.report = make_bound_report(conditional_entropy(series, s.m, s.estimator.window, s.estimator),
                                       BoundSetting::prediction, s.m);
    } else if (s.method == "spectral") {
        if (s.m != 1) throw InvalidInput("method spectral supports only m = 1");
        const SpectrumEstimate spectrum = estimate_spectrum(series, s.n_fft);
        const EntropyValue szego = szego_gaussian_entropy_rate(spectrum);
        const EntropyValue j = negentropy_rate(series, s.estimator, spectrum);
        out.report = spectral_support_bound(spectrum, j);
        out.extra = json{{"szego_bits", szego.bits},
                         {"negentropy", to_json(j)},
                         {"n_fft", s.n_fft},
                         {"spectrum_mean_level", spectrum.mean_level()}};
    } else {
        throw InvalidInput("unknown bound method '" + s.method + "'");
    }
    return out;
}

Predictor build_predictor(const std::string& kind, std::size_t order, int m, const Series& series,
                          const std::optional<ProcessModel>& model) {
    if (kind == "oracle") {
        if (!model) throw InvalidInput("predictor oracle requires the metadata sidecar with the generating model");
        return oracle_predictor(*model, m);
    }
    if (kind == "ols") return fit_ols_ar(series, order, m);
    if (kind == "persistence") return persistence_predictor(m);
    if (kind == "zero") return zero_predictor(m);
    throw InvalidInput("unknown predictor '" + kind + "'");
}

void add_estimator_options(CLI::App* cmd, BoundSettings& s) {
    cmd->add_option("--method,--bound-method", s.method, "Entropy source: knn, spectral or analytic")
        ->check(CLI::IsMember({"knn", "spectral", "analytic"}));
    cmd->add_option("--m", s.m, "Prediction step")->check(CLI::PositiveNumber);
    cmd->add_option("--k", s.estimator.k_neighbors, "Nearest-neighbour count")->check(CLI::PositiveNumber);
    cmd->add_option("--window", s.estimator.window, "Conditioning window length");
    cmd->add_option("--max-dim", s.estimator.max_dim, "Cap on joint dimension");
    cmd->add_option("--nfft", s.n_fft, "Segment length for the spectral method");
}

// --- generate ------------------------------------------------------------------

struct GenerateArgs {
    std::string model = "ar1";
    CLI::Option* a = nullptr;
    CLI::Option* coeffs = nullptr;
    CLI::Option* c = nullptr;
    CLI::Option* sigma = nullptr;
    CLI::Option* b = nullptr;
    CLI::Option* burn = nullptr;
    double a_value = 0.0;
    std::vector<double> coeff_values;
    std::string innov = "uniform";
    double c_value = 0.0;
    double sigma_value = 0.0;
    double b_value = 0.0;
    std::size_t burn_value = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
};

ProcessModel model_from_args(const GenerateArgs& g) {
    ProcessModel m;
    if (g.model == "ar1") {
        if (g.a->count() == 0) throw InvalidInput("missing required field --a (AR(1) coefficient)");
        m.ar_coeffs = {g.a_value};
    } else if (g.model == "ar") {
        if (g.coeffs->count() == 0) throw InvalidInput("missing required field --coeffs (AR coefficients)");
        m.ar_coeffs = g.coeff_values;
    } else if (g.model == "iid") {
        m.ar_coeffs.clear();
    } else {  // rw
        m.kind = ProcessKind::recursive_increment;
        if (g.coeffs->count() > 0) m.ar_coeffs = g.coeff_values;
    }
    if (g.innov == "uniform") {
        if (g.c->count() == 0) throw InvalidInput("missing required field --c (uniform half-width)");
        m.innovation = UniformLaw{g.c_value};
    } else if (g.innov == "gaussian") {
        if (g.sigma->count() == 0) throw InvalidInput("missing required field --sigma (gaussian standard deviation)");
        m.innovation = GaussianLaw{g.sigma_value};
    } else {
        if (g.b->count() == 0) throw InvalidInput("missing required field --b (laplace scale)");
        m.innovation = LaplaceLaw{g.b_value};
    }
    if (g.burn->count() > 0) m.burn_in = g.burn_value;
    validate(m);
    return m;
}

int cmd_generate(const GenerateArgs& g, std::ostream& out) {
    const ProcessModel model = model_from_args(g);
    const Series series = generate(model, g.n, g.seed);
    ProcessModel recorded = model;
    recorded.burn_in = model.burn_in.value_or(default_burn_in(model));
    const json meta{{"model", to_json(recorded)}, {"n", g.n}, {"seed", g.seed}, {"rng", kRngName}};

    const std::filesystem::path path = g.out.empty() ? default_output("series.csv") : std::filesystem::path(g.out);
    write_files_atomically({{path, format_series_csv(series.values())}, {sidecar_path(path), meta.dump(2) + "\n"}});
    out << "wrote " << g.n << " samples to " << path.string() << "\n";
    return kOk;
}

// --- bound -----------------------------------------------------------------

struct BoundArgs {
    std::string in;
    std::string out;
    BoundSettings settings;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
    const LoadedSeries loaded = load_series(a.in);
    const BoundOutcome result = compute_bound(loaded.series, loaded.model, a.settings);

    json report{{"command", "bound"},
                {"input", a.in},
                {"n", loaded.series.size()},
                {"method", a.settings.method},
                {"bound", to_json(result.report)},
                {"spectral", result.extra.empty() ? json(nullptr) : result.extra},
                {"model", loaded.model ? to_json(*loaded.model) : json(nullptr)},
                {"seed", optional_json(loaded.seed)}};

    const std::filesystem::path path = a.out.empty() ? default_output("bound.json") : std::filesystem::path(a.out);
    write_files_atomically({{path, report.dump(2) + "\n"}});
    out << "deviation_bound " << result.report.deviation_bound << " support_bound "
        << result.report.support_bound << " (h = " << result.report.conditional_entropy.bits << " bits)\n";
    return kOk;
}

// --- certify ---------------------------------------------------------------

struct CertifyArgs {
    std::string in;
    std::string out;
    std::string predictor = "oracle";
    std::size_t order = 1;
    std::size_t replicates = 1;
    BoundSettings settings;
};

Certification certify_one(const Series& series, const std::optional<ProcessModel>& model,
                          const CertifyArgs& a, json& extra) {
    const BoundOutcome bound = compute_bound(series, model, a.settings);
    extra = bound.extra;
    const Predictor pred = build_predictor(a.predictor, a.order, a.settings.m, series, model);
    return certify(series, pred, bound.report, a.settings.estimator);
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
    if (a.replicates == 0) throw InvalidInput("--replicates must be at least 1");
    const LoadedSeries loaded = load_series(a.in);
    if (a.replicates > 1 && (!loaded.model || !loaded.seed)) {
        throw InvalidInput("--replicates requires the metadata sidecar with model and seed");
    }

    // Replicate i uses seed + i; replicate 0 is the input itself.
    std::vector<std::future<std::pair<Certification, json>>> jobs;
    for (std::size_t i = 0; i < a.replicates; ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const Series s = i == 0 ? loaded.series
                                    : generate(*loaded.model, loaded.series.size(), *loaded.seed + i);
            json extra;
            Certification c = certify_one(s, loaded.model, a, extra);
            return std::pair{std::move(c), std::move(extra)};
        }));
    }
    std::vector<std::pair<Certification, json>> results;
    for (auto& j : jobs) results.push_back(j.get());

    const auto& [primary, primary_extra] = results.front();
    json report = to_json(primary);
    report["command"] = "certify";
    report["input"] = a.in;
    report["n"] = loaded.series.size();
    report["bound_method"] = a.settings.method;
    report["spectral"] = primary_extra.empty() ? json(nullptr) : primary_extra;
    report["seed"] = optional_json(loaded.seed);

    bool all_hold = true;
    if (a.replicates > 1) {
        json reps = json::array();
        double min_ratio = std::numeric_limits<double>::infinity();
        double max_ratio = 0.0;
        std::size_t verdicts = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const Certification& c = results[i].first;
            json r = to_json(c);
            r["seed"] = *loaded.seed + i;
            reps.push_back(std::move(r));
            all_hold = all_hold && c.inequality_holds;
            min_ratio = std::min(min_ratio, c.tightness_ratio);
            max_ratio = std::max(max_ratio, c.tightness_ratio);
            verdicts += c.achieves_bound ? 1 : 0;
        }
        report["replicates"] = std::move(reps);
        report["summary"] = json{{"count", results.size()},
                                 {"all_inequalities_hold", all_hold},
                                 {"min_tightness_ratio", min_ratio},
                                 {"max_tightness_ratio", max_ratio},
                                 {"achieving_count", verdicts}};
    } else {
        all_hold = primary.inequality_holds;
    }

    const std::filesystem::path path = a.out.empty() ? default_output("certify.json") : std::filesystem::path(a.out);
    write_files_atomically({{path, report.dump(2) + "\n"}});
    out << "deviation_bound " << primary.bound.deviation_bound << " empirical_max_deviation "
        << primary.diagnostics.empirical_max_deviation << " tightness " << primary.tightness_ratio
        << " verdict " << (primary.achieves_bound ? "achieves" : "does-not-achieve") << "\n";
    if (!all_hold) {
        out << "bound violated beyond tau = " << kBoundSlack << "\n";
        return kBoundViolation;
    }
    return kOk;
}

}  // namespace

// --- JSON ------------------------------------------------------------------

json to_json(const ProcessModel& model) {
    json innov = std::visit([](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformLaw>) return {{"law", "uniform"}, {"half_width", l.half_width}};
        else if constexpr (std::is_same_v<T, GaussianLaw>) return {{"law", "gaussian"}, {"sigma", l.sigma}};
        else return {{"law", "laplace"}, {"scale", l.scale}};
    }, model.innovation);
    return json{{"kind", to_string(model.kind)},
                {"ar_coeffs", model.ar_coeffs},
                {"innovation", std::move(innov)},
                {"burn_in", optional_json(model.burn_in)}};
}

ProcessModel model_from_json(const json& j) {
    ProcessModel m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ar") m.kind = ProcessKind::ar;
    else if (kind == "recursive-increment") m.kind = ProcessKind::recursive_increment;
    else throw InvalidInput("unknown process kind '" + kind + "'");
    m.ar_coeffs = j.at("ar_coeffs").get<std::vector<double>>();
    const json& innov = j.at("innovation");
    const auto law = innov.at("law").get<std::string>();
    if (law == "uniform") m.innovation = UniformLaw{innov.at("half_width").get<double>()};
    else if (law == "gaussian") m.innovation = GaussianLaw{innov.at("sigma").get<double>()};
    else if (law == "laplace") m.innovation = LaplaceLaw{innov.at("scale").get<double>()};
    else throw InvalidInput("unknown innovation law '" + law + "'");
    if (j.contains("burn_in") && !j.at("burn_in").is_null()) m.burn_in = j.at("burn_in").get<std::size_t>();
    validate(m);
    return m;
}

json to_json(const EntropyValue& h) {
    return json{{"bits", h.bits},
                {"method", to_string(h.method)},
                {"k_neighbors", optional_json(h.k_neighbors)},
                {"window", h.window},
                {"n_samples", optional_json(h.n_samples)},
                {"raw_bits", optional_json(h.raw_bits)},
                {"jittered", h.jittered}};
}

json to_json(const BoundReport& b) {
    return json{{"setting", to_string(b.setting)},
                {"m_step", b.m_step},
                {"support_bound", b.support_bound},
                {"deviation_bound", b.deviation_bound},
                {"conditional_entropy", to_json(b.conditional_entropy)}};
}

json to_json(const Predictor& p) {
    return json{{"kind", to_string(p.kind)}, {"order", p.order()}, {"coeffs", p.coeffs}, {"m_step", p.m_step}};
}

json to_json(const ErrorDiagnostics& d) {
    return json{{"empirical_support", d.empirical_support},
                {"empirical_max_deviation", d.empirical_max_deviation},
                {"mean", d.mean},
                {"whiteness",
                 {{"statistic", d.whiteness.statistic}, {"p_value", d.whiteness.p_value}, {"lags", d.whiteness.lags}}},
                {"uniformity_stat", d.uniformity_stat},
                {"mi_error_past", to_json(d.mi_error_past)},
                {"achieves_bound", d.achieves_bound}};
}

json to_json(const Certification& c) {
    return json{{"bound", to_json(c.bound)},
                {"predictor", to_json(c.predictor)},
                {"diagnostics", to_json(c.diagnostics)},
                {"tau", c.tau},
                {"inequality_holds", c.inequality_holds},
                {"tightness_ratio", c.tightness_ratio},
                {"achieves_bound", c.achieves_bound},
                {"support_unbounded", c.support_unbounded}};
}

LoadedSeries load_series(const std::filesystem::path& csv) {
    std::vector<double> values = read_series_csv(csv);
    std::optional<ProcessModel> model;
    std::optional<std::uint64_t> seed;
    const auto meta_path = sidecar_path(csv);
    if (std::filesystem::exists(meta_path)) {
        std::ifstream in(meta_path);
        if (!in) throw IoError("cannot open " + meta_path.string());
        json meta;
        try {
            meta = json::parse(in);
            model = model_from_json(meta.at("model"));
            seed = meta.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw InvalidInput(meta_path.string() + ": malformed sidecar: " + e.what());
        }
    }
    return LoadedSeries{Series(std::move(values), seed, model), model, seed};
}

// --- entry point -------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Information-theoretic bounds on sequential prediction errors"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Simulate a synthetic series to CSV");
    g->add_option("--model", gen.model, "ar1, ar, iid or rw (random walk / recursive increments)")
        ->check(CLI::IsMember({"ar1", "ar", "iid", "rw"}));
    gen.a = g->add_option("--a", gen.a_value, "AR(1) coefficient");
    gen.coeffs = g->add_option("--coeffs", gen.coeff_values, "AR coefficients")->delimiter(',');
    g->add_option("--innov", gen.innov, "Innovation law")->check(CLI::IsMember({"uniform", "gaussian", "laplace"}));
    gen.c = g->add_option("--c", gen.c_value, "Uniform half-width");
    gen.sigma = g->add_option("--sigma", gen.sigma_value, "Gaussian standard deviation");
    gen.b = g->add_option("--b", gen.b_value, "Laplace scale");
    gen.burn = g->add_option("--burn-in", gen.burn_value, "Discarded warm-up samples");
    g->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    g->add_option("--seed", gen.seed, "RNG seed")->required();
    g->add_option("--out", gen.out, "Output CSV path");

    BoundArgs bnd;
    auto* b = app.add_subcommand("bound", "Compute support and deviation bounds for a series");
    b->add_option("--in", bnd.in, "Input CSV")->required();
    b->add_option("--out", bnd.out, "Output report path");
    add_estimator_options(b, bnd.settings);

    CertifyArgs cert;
    auto* c = app.add_subcommand("certify", "Check a predictor against the bound");
    c->add_option("--in", cert.in, "Input CSV")->required();
    c->add_option("--out", cert.out, "Output report path");
    c->add_option("--predictor", cert.predictor, "oracle, ols, persistence or zero")
        ->check(CLI::IsMember({"oracle", "ols", "persistence", "zero"}));
    c->add_option("--order", cert.order, "AR order for the ols predictor")->check(CLI::PositiveNumber);
    c->add_option("--replicates", cert.replicates, "Independent replicates with seeds seed + i");
    add_estimator_options(c, cert.settings);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, out);
        if (b->parsed()) return cmd_bound(bnd, out);
        return cmd_certify(cert, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const InsufficientData& e) {
        err << "error: insufficient data: " << e.what() << "\n";
        return kInsufficientData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidConfig;
    }
}

}  // namespace predbound::cli

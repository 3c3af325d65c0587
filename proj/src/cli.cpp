#include "uavnet/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "uavnet/analytic.hpp"

namespace uavnet::cli {

namespace {

std::string format_num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string cell(const std::optional<double>& v) { return v ? format_num(*v) : ""; }

simulator::Scheme parse_scheme(const std::string& s) { return simulator::scheme_from_string(s); }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write `" + path + "`");
    out << content;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void emit_outputs(const std::string& csv, config::RunManifest manifest, const RunOptions& opt,
                  const Timer& timer) {
    manifest.tool_version = kToolVersion;
    manifest.wall_time_s = timer.seconds();
    manifest.output_csv = opt.out_path;
    write_file(opt.out_path, csv);
    write_file(opt.out_path + ".manifest", config::serialize_manifest(manifest));
}

}  // namespace

std::string default_data_dir() {
    if (const char* env = std::getenv("UAVNET_DATA_DIR")) return env;
#ifdef UAVNET_DEFAULT_DATA_DIR
    return UAVNET_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

std::string format_csv(const std::vector<CsvRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.sweep_var << ',' << format_num(r.value) << ',' << r.scheme << ',' << r.mode << ','
            << cell(r.p_cov) << ',' << cell(r.p_cov_g) << ',' << cell(r.p_cov_ul) << ','
            << cell(r.p_cov_un) << ',' << cell(r.a_g) << ',' << cell(r.a_ul) << ',' << cell(r.a_un)
            << ',' << cell(r.a_f) << ',' << cell(r.s_backhaul) << ',' << cell(r.ci_low) << ','
            << cell(r.ci_high) << ',' << r.n_trials << "\n";
    }
    return out.str();
}

CsvRow analytic_row(const NetworkParams& params, simulator::Scheme scheme, bool no_cache,
                    std::vector<std::string>* warnings) {
    if (scheme == simulator::Scheme::instantaneous)
        throw config::ConfigError("analytic mode does not cover the instantaneous scheme; use --mode simulate");
    analytic::AnalyticEngine::Options eopt;
    eopt.use_cache = !no_cache;
    analytic::AnalyticEngine engine(params, eopt);

    CsvRow row;
    row.scheme = to_string(scheme);
    row.mode = "analytic";
    if (scheme == simulator::Scheme::unaware) {
        const auto rep = engine.overall_cov_unaware();
        row.p_cov = rep.p_cov;
        row.p_cov_g = rep.p_cov_g;
        row.p_cov_ul = rep.p_cov_ul;
        row.p_cov_un = rep.p_cov_un;
        row.a_g = rep.assoc.a_g;
        row.a_ul = rep.assoc.a_ul;
        row.a_un = rep.assoc.a_un;
        row.a_f = 0.0;
        row.s_backhaul = rep.s_backhaul;
    } else {
        const auto rep = engine.overall_cov_aware();
        row.p_cov = rep.p_cov;
        row.p_cov_g = rep.p_cov_g;
        row.p_cov_ul = rep.p_cov_ul;
        row.p_cov_un = rep.p_cov_un;
        row.a_g = rep.aware.at_g;
        row.a_ul = rep.aware.at_ul;
        row.a_un = rep.aware.at_un;
        row.a_f = rep.aware.at_f;
        row.s_backhaul = rep.s_backhaul;
    }
    if (warnings)
        for (const auto& w : engine.warnings()) warnings->push_back(w);
    return row;
}

CsvRow simulate_row(const NetworkParams& params, simulator::Scheme scheme, std::uint64_t trials,
                    std::uint64_t seed, int workers) {
    const auto est = simulator::estimate(params, scheme, trials, seed, workers);
    const auto& b = est.breakdown;
    const double n = static_cast<double>(est.n_trials);
    CsvRow row;
    row.scheme = to_string(scheme);
    row.mode = "simulate";
    row.p_cov = est.estimate;
    if (b.assoc_bs > 0) row.p_cov_g = static_cast<double>(b.covered_bs) / b.assoc_bs;
    // conditional UAV coverages condition on an actual transmission, matching
    // the analytic decomposition (service-failure mass lives in a_f)
    if (b.transmitting_uav_los() > 0)
        row.p_cov_ul = static_cast<double>(b.covered_uav_los) / b.transmitting_uav_los();
    if (b.transmitting_uav_nlos() > 0)
        row.p_cov_un = static_cast<double>(b.covered_uav_nlos) / b.transmitting_uav_nlos();
    row.a_g = b.assoc_bs / n;
    row.a_ul = b.assoc_uav_los / n;
    row.a_un = b.assoc_uav_nlos / n;
    row.a_f = b.service_failures / n;
    if (b.probe_backhaul_n > 0)
        row.s_backhaul = static_cast<double>(b.probe_backhaul_ok) / b.probe_backhaul_n;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    row.n_trials = est.n_trials;
    return row;
}

namespace {

config::ConfigValues load_with_overrides(const std::string& config_path, const RunOptions& opt) {
    auto values = config::load_config(config_path);
    for (const auto& ov : opt.overrides) config::apply_override(values, ov);
    return values;
}

std::vector<CsvRow> rows_for_point(const config::ConfigValues& values, const RunOptions& opt,
                                   std::vector<std::string>* warnings) {
    const NetworkParams params = config::to_params(values);
    const auto scheme = parse_scheme(opt.scheme);
    std::vector<CsvRow> rows;
    if (opt.mode == "analytic" || opt.mode == "both")
        rows.push_back(analytic_row(params, scheme, opt.no_cache, warnings));
    if (opt.mode == "simulate" || opt.mode == "both")
        rows.push_back(simulate_row(params, scheme, opt.trials, opt.seed, opt.workers));
    if (rows.empty()) throw config::ConfigError("unknown mode `" + opt.mode + "`");
    return rows;
}

config::RunManifest make_manifest(const std::string& command, const config::ConfigValues& values,
                                  const RunOptions& opt) {
    config::RunManifest m;
    m.command = command;
    m.mode = opt.mode;
    m.scheme = opt.scheme;
    m.seed = opt.seed;
    m.trials = opt.trials;
    m.workers = opt.workers;
    m.no_cache = opt.no_cache;
    m.config = values;
    return m;
}

}  // namespace

int cmd_eval(const std::string& config_path, const RunOptions& opt) {
    Timer timer;
    const auto values = load_with_overrides(config_path, opt);
    auto manifest = make_manifest("eval", values, opt);
    auto rows = rows_for_point(values, opt, &manifest.warnings);
    emit_outputs(format_csv(rows), manifest, opt, timer);
    std::cout << format_csv(rows);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& sweep_var,
              const std::vector<double>& values, const RunOptions& opt) {
    Timer timer;
    const auto base = load_with_overrides(config_path, opt);
    {
        // reject unknown sweep variables up front
        auto probe = base;
        config::apply_override(probe, sweep_var + "=" + format_num(values.empty() ? 0.0 : values.front()));
    }
    auto manifest = make_manifest("sweep " + sweep_var, base, opt);

    std::vector<std::vector<CsvRow>> per_point(values.size());
    std::vector<std::vector<std::string>> warn(values.size());
    const auto eval_point = [&](std::size_t i) {
        auto point = base;
        config::apply_override(point, sweep_var + "=" + format_num(values[i]));
        auto rows = rows_for_point(point, opt, &warn[i]);
        for (auto& r : rows) {
            r.sweep_var = sweep_var;
            r.value = values[i];
        }
        per_point[i] = std::move(rows);
    };

    if (opt.mode == "analytic" && opt.workers > 1 && values.size() > 1) {
        // analytic points are independent; simulate mode parallelizes trials
        // inside each point instead
        std::vector<std::exception_ptr> errors(values.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min<std::size_t>(opt.workers, values.size());
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
                    try {
                        eval_point(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) eval_point(i);
    }

    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (auto& r : per_point[i]) rows.push_back(std::move(r));
        for (auto& w : warn[i]) {
            const std::string tagged = sweep_var + "=" + format_num(values[i]) + ": " + w;
            if (std::find(manifest.warnings.begin(), manifest.warnings.end(), tagged) ==
                manifest.warnings.end())
                manifest.warnings.push_back(tagged);
        }
    }
    emit_outputs(format_csv(rows), manifest, opt, timer);
    std::cout << format_csv(rows);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// figure reproduction

namespace {

struct RefPoint {
    std::string curve;
    double x = 0.0;
    double y = 0.0;
};

std::vector<RefPoint> load_reference(const std::string& data_dir, const std::string& figure_id) {
    const std::string path = data_dir + "/reference/" + figure_id + ".csv";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("reference data not found: " + path);
    std::vector<RefPoint> pts;
    std::string line;
    std::getline(in, line);  // header curve,x,y
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        RefPoint p;
        p.curve = line.substr(0, c1);
        p.x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        p.y = std::stod(line.substr(c2 + 1));
        pts.push_back(p);
    }
    return pts;
}

/// Parses a curve label of the form "key=1|key2=2 ..." into overrides; the
/// leading word (if it has no '=') names the scheme or method.
struct CurveSpec {
    std::string method;  // "", "aware", "unaware", "instantaneous", "at_u", ...
    std::vector<std::string> overrides;
};

CurveSpec parse_curve_label(const std::string& label) {
    CurveSpec spec;
    std::istringstream in(label);
    std::string tok;
    while (in >> tok) {
        if (tok.find('=') == std::string::npos)
            spec.method = tok;
        else
            spec.overrides.push_back(tok);
    }
    return spec;
}

struct FigureRecipe {
    const char* id;
    const char* x_key;      // config key swept along the figure x axis
    const char* metric;     // s_backhaul | p_cov | association
    bool x_is_db = false;   // x values are already in the key's unit
};

const FigureRecipe kRecipes[] = {
    {"backhaul-vs-height", "h_u", "s_backhaul"},
    {"association-vs-height", "h_u", "association"},
    {"coverage-vs-height", "h_u", "p_cov"},
    {"coverage-vs-nu", "n_u", "p_cov"},
    {"coverage-vs-misalignment", "tau_b_db", "p_cov"},
    {"coverage-vs-density", "h_u", "p_cov"},
    {"backhaul-vs-fraction", "delta_b", "s_backhaul"},
    {"coverage-vs-fraction", "delta_b", "p_cov"},
};

}  // namespace

int cmd_reproduce(const std::string& figure_id, const RunOptions& opt) {
    Timer timer;
    const bool is_instananeous_fig = figure_id == "aware-vs-instantaneous";
    const FigureRecipe* recipe = nullptr;
    for (const auto& r : kRecipes)
        if (figure_id == r.id) recipe = &r;
    if (!recipe && !is_instananeous_fig)
        throw config::ConfigError("unknown figure id `" + figure_id + "`; known: backhaul-vs-height, "
                                  "association-vs-height, coverage-vs-height, coverage-vs-nu, "
                                  "coverage-vs-misalignment, coverage-vs-density, "
                                  "backhaul-vs-fraction, coverage-vs-fraction, aware-vs-instantaneous");

    const std::string data_dir = opt.data_dir.empty() ? default_data_dir() : opt.data_dir;
    const auto reference = load_reference(data_dir, figure_id);

    config::ConfigValues base;  // defaults; figure-specific overrides from curve labels
    for (const auto& ov : opt.overrides) config::apply_override(base, ov);

    struct OutRow {
        std::string curve;
        double x, reference, computed;
    };
    std::vector<OutRow> out_rows(reference.size());

    const auto compute_point = [&](std::size_t i) {
        const auto& pt = reference[i];
        const auto spec = parse_curve_label(pt.curve);
        auto values = base;
        for (const auto& ov : spec.overrides) config::apply_override(values, ov);
        const char* x_key = is_instananeous_fig ? "n_u" : recipe->x_key;
        config::apply_override(values, std::string(x_key) + "=" + format_num(pt.x));
        const NetworkParams params = config::to_params(values);

        double computed = 0.0;
        if (is_instananeous_fig) {
            const auto scheme = spec.method == "instantaneous" ? simulator::Scheme::instantaneous
                                                               : simulator::Scheme::aware;
            if (scheme == simulator::Scheme::instantaneous || opt.mode == "simulate") {
                computed = *simulate_row(params, scheme, opt.trials, opt.seed, opt.workers).p_cov;
            } else {
                computed = *analytic_row(params, scheme, opt.no_cache).p_cov;
            }
        } else if (opt.mode == "simulate") {
            const auto scheme = spec.method.empty() ? simulator::Scheme::aware : parse_scheme(spec.method);
            const auto row = simulate_row(params, scheme, opt.trials, opt.seed, 1);
            if (std::string(recipe->metric) == "s_backhaul")
                computed = row.s_backhaul.value_or(0.0);
            else if (std::string(recipe->metric) == "association")
                computed = spec.method == "at_u"   ? *row.a_ul + *row.a_un
                           : spec.method == "at_g" ? *row.a_g
                                                   : *row.a_f;
            else
                computed = *row.p_cov;
        } else {
            analytic::AnalyticEngine engine(params);
            if (std::string(recipe->metric) == "s_backhaul") {
                computed = engine.backhaul_prob();
            } else if (std::string(recipe->metric) == "association") {
                const auto t = engine.aware_transmission_probs();
                computed = spec.method == "at_u"   ? t.at_ul + t.at_un
                           : spec.method == "at_g" ? t.at_g
                                                   : t.at_f;
            } else {
                const auto scheme =
                    spec.method.empty() ? simulator::Scheme::aware : parse_scheme(spec.method);
                computed = *analytic_row(params, scheme, opt.no_cache).p_cov;
            }
        }
        out_rows[i] = {pt.curve, pt.x, pt.y, computed};
    };

    std::vector<std::exception_ptr> errors(reference.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads =
        std::max(1, std::min<int>(opt.workers, static_cast<int>(reference.size())));
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < reference.size(); i = next.fetch_add(1)) {
                try {
                    compute_point(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::ostringstream csv;
    csv << "figure,curve,x,reference,computed,abs_dev\n";
    std::map<std::string, double> max_dev;
    for (const auto& r : out_rows) {
        const double dev = std::abs(r.computed - r.reference);
        max_dev[r.curve] = std::max(max_dev[r.curve], dev);
        csv << figure_id << ',' << r.curve << ',' << format_num(r.x) << ',' << format_num(r.reference)
            << ',' << format_num(r.computed) << ',' << format_num(dev) << "\n";
    }

    auto manifest = make_manifest("reproduce " + figure_id, base, opt);
    emit_outputs(csv.str(), manifest, opt, timer);

    std::cout << "figure " << figure_id << " deviation summary:\n";
    double overall = 0.0;
    for (const auto& [curve, dev] : max_dev) {
        std::cout << "  " << curve << ": max |dev| = " << format_num(dev) << "\n";
        overall = std::max(overall, dev);
    }
    std::cout << "  overall max |dev| = " << format_num(overall) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validation

namespace {

struct MetricCheck {
    std::string name;
    double analytic = 0.0;
    double sim = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    bool applicable = true;
    bool pass = true;
};

MetricCheck check(const std::string& name, double analytic, std::uint64_t k, std::uint64_t n,
                  double slack) {
    MetricCheck m;
    m.name = name;
    m.analytic = analytic;
    if (n == 0) {
        m.applicable = false;
        return m;
    }
    m.sim = static_cast<double>(k) / n;
    const auto ci = stats::wilson_interval(k, n);
    m.ci_low = ci.low;
    m.ci_high = ci.high;
    m.pass = analytic >= ci.low - slack && analytic <= ci.high + slack;
    return m;
}

}  // namespace

int cmd_validate(const std::string& config_path, const RunOptions& opt) {
    Timer timer;
    const auto values = load_with_overrides(config_path, opt);
    const NetworkParams params = config::to_params(values);
    auto manifest = make_manifest("validate", values, opt);

    analytic::AnalyticEngine::Options eopt;
    eopt.use_cache = !opt.no_cache;
    analytic::AnalyticEngine engine(params, eopt);
    const auto unaware = engine.overall_cov_unaware();
    const auto aware = engine.overall_cov_aware();
    for (const auto& w : engine.warnings()) manifest.warnings.push_back(w);

    const auto sims = simulator::estimate_many(
        params, {simulator::Scheme::unaware, simulator::Scheme::aware}, opt.trials, opt.seed,
        opt.workers);
    const auto& bu = sims[0].breakdown;
    const auto& ba = sims[1].breakdown;
    const std::uint64_t n = sims[0].n_trials;

    std::vector<MetricCheck> checks;
    checks.push_back(check("s_backhaul", unaware.s_backhaul, bu.probe_backhaul_ok, bu.probe_backhaul_n,
                           opt.slack));
    checks.push_back(check("a_g", unaware.assoc.a_g, bu.assoc_bs, n, opt.slack));
    checks.push_back(check("a_ul", unaware.assoc.a_ul, bu.assoc_uav_los, n, opt.slack));
    checks.push_back(check("a_un", unaware.assoc.a_un, bu.assoc_uav_nlos, n, opt.slack));
    checks.push_back(check("unaware.p_cov_g", unaware.p_cov_g, bu.covered_bs, bu.assoc_bs, opt.slack));
    checks.push_back(
        check("unaware.p_cov_ul", unaware.p_cov_ul, bu.covered_uav_los, bu.assoc_uav_los, opt.slack));
    checks.push_back(check("unaware.p_cov_un", unaware.p_cov_un, bu.covered_uav_nlos,
                           bu.assoc_uav_nlos, opt.slack));
    checks.push_back(check("unaware.p_cov", unaware.p_cov, bu.covered(), n, opt.slack));
    checks.push_back(check("aware.at_f", aware.aware.at_f, ba.service_failures, n, opt.slack));
    checks.push_back(check("aware.p_cov_g", aware.p_cov_g, ba.covered_bs, ba.assoc_bs, opt.slack));
    checks.push_back(check("aware.p_cov_ul", aware.p_cov_ul, ba.covered_uav_los,
                           ba.transmitting_uav_los(), opt.slack));
    checks.push_back(check("aware.p_cov_un", aware.p_cov_un, ba.covered_uav_nlos,
                           ba.transmitting_uav_nlos(), opt.slack));
    checks.push_back(check("aware.p_cov", aware.p_cov, ba.covered(), n, opt.slack));

    bool all_pass = true;
    std::ostringstream report;
    report << "metric,analytic,simulated,ci_low,ci_high,delta,status\n";
    for (const auto& m : checks) {
        if (!m.applicable) {
            report << m.name << ',' << format_num(m.analytic) << ",,,,,n/a\n";
            continue;
        }
        all_pass &= m.pass;
        report << m.name << ',' << format_num(m.analytic) << ',' << format_num(m.sim) << ','
               << format_num(m.ci_low) << ',' << format_num(m.ci_high) << ','
               << format_num(m.analytic - m.sim) << ',' << (m.pass ? "PASS" : "FAIL") << "\n";
    }
    emit_outputs(report.str(), manifest, opt, timer);
    std::cout << report.str();
    std::cout << (all_pass ? "VALIDATION PASS" : "VALIDATION FAIL") << " (slack " << opt.slack
              << ", trials " << opt.trials << ")\n";
    return all_pass ? kExitOk : kExitValidationFailed;
}

}  // namespace uavnet::cli

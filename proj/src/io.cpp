#include "sinrcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sinrcap/config.hpp"
#include "sinrcap/csv.hpp"

namespace sinrcap {

namespace {

using nlohmann::json;

constexpr const char* kGeneratorVersion = "1.0.0";

std::string hex_digest(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json table_to_json(const ExpectationTable& t) {
    return json{{"n", t.n},
                {"E_L", t.E_L},
                {"E_J", t.E_J},
                {"E_P", t.E_P},
                {"E_I", t.E_I},
                {"C_bar", t.C_bar},
                {"C_bar_se", num_or_null(t.C_bar_se)},
                {"C_bar_prime", t.C_bar_prime},
                {"C_bar_dprime", t.C_bar_dprime},
                {"provenance",
                 json{{"closed_form", t.provenance.closed_form},
                      {"samples", t.provenance.samples},
                      {"seed", t.provenance.seed}}}};
}

json eps_to_json(const EpsilonSchedule& e) {
    return json{{"eps1", e.eps1},
                {"eps1_prime", e.eps1_prime},
                {"eps2", e.eps2},
                {"eps2_prime", e.eps2_prime}};
}

// Relative deviation a tail threshold encodes against its center; NaN when
// either is missing or the center is zero.
double eps_from_threshold(double center, double threshold, bool upper) {
    if (!std::isfinite(center) || !std::isfinite(threshold) || center == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return upper ? threshold / center - 1.0 : 1.0 - threshold / center;
}

class BoundsCsv {
  public:
    explicit BoundsCsv(const std::string& path) : writer_(path) {
        writer_.header({"quantity", "eps", "empirical_freq", "theory_bound", "stderr"});
    }

    void add(const std::string& quantity, double eps, double freq, double bound,
             long long samples) {
        double se = 0.0;
        if (samples > 0 && freq >= 0.0 && freq <= 1.0)
            se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(samples));
        writer_.row(quantity, eps, freq, bound, se);
    }

    void add_report(const std::string& name, const ConcentrationReport& rep) {
        add(name + "_lower", eps_from_threshold(rep.center, rep.lower_threshold, false),
            rep.lower_tail_freq, rep.theory_lower_bound, rep.samples);
        add(name + "_upper", eps_from_threshold(rep.center, rep.upper_threshold, true),
            rep.upper_tail_freq, rep.theory_upper_bound, rep.samples);
        if (std::isfinite(rep.alt_lower_threshold) || std::isfinite(rep.alt_upper_threshold)) {
            add(name + "_alt_lower",
                eps_from_threshold(rep.center, rep.alt_lower_threshold, false),
                rep.alt_lower_tail_freq, rep.alt_theory_lower_bound, rep.samples);
            add(name + "_alt_upper",
                eps_from_threshold(rep.center, rep.alt_upper_threshold, true),
                rep.alt_upper_tail_freq, rep.alt_theory_upper_bound, rep.samples);
        }
    }

    void close() { writer_.close(); }

  private:
    CsvWriter writer_;
};

}  // namespace

RunArtifacts write_run_artifacts(const ExperimentConfig& cfg, const json& resolved_config,
                                 const std::string& out_dir, std::ostream* log) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    auto note = [&](const std::string& line) {
        if (log) *log << line << "\n";
    };

    RunArtifacts art;

    art.interference = run_interference_experiment(cfg);
    {
        CsvWriter csv((dir / "interference.csv").string());
        csv.header({"trial", "node", "J", "I"});
        for (const auto& r : art.interference.rows) csv.row(r.trial, r.node, r.J, r.I);
        csv.close();
    }
    note("wrote interference.csv (" + std::to_string(art.interference.rows.size()) + " rows)");

    art.cut = run_cut_experiment(cfg);
    {
        CsvWriter csv((dir / "cut.csv").string());
        csv.header({"trial", "k", "C_k", "C_k_prime", "C_k_dprime"});
        for (const auto& r : art.cut.rows)
            csv.row(r.trial, r.k, r.C_k, r.C_k_prime, r.C_k_dprime);
        csv.close();
    }
    note("wrote cut.csv (" + std::to_string(art.cut.rows.size()) + " rows)");

    art.capacity = run_capacity_experiment(cfg);
    {
        CsvWriter csv((dir / "capacity.csv").string());
        std::vector<std::string> names = {"trial", "C_sT"};
        for (int d = 0; d < cfg.l; ++d) names.push_back("flow_dest_" + std::to_string(d));
        names.push_back("C_sT_prime");
        names.push_back("C_sT_dprime");
        names.push_back("argmin_dest");
        csv.header(names);
        for (const auto& r : art.capacity.rows) {
            csv.field(r.trial);
            csv.field(r.C);
            for (double v : r.per_destination) csv.field(v);
            csv.field(r.C_prime);
            csv.field(r.C_dprime);
            csv.field(r.argmin_dest);
            csv.end_row();
        }
        csv.close();
    }
    note("wrote capacity.csv (" + std::to_string(art.capacity.rows.size()) + " rows)");

    art.annulus = run_annulus_experiment(cfg);
    {
        CsvWriter csv((dir / "annulus.csv").string());
        csv.header({"trial", "node", "count_prime", "count_dprime"});
        for (const auto& r : art.annulus.rows)
            csv.row(r.trial, r.node, r.count_prime, r.count_dprime);
        csv.close();
    }
    note("wrote annulus.csv (" + std::to_string(art.annulus.rows.size()) + " rows)");

    {
        BoundsCsv bounds((dir / "bounds.csv").string());
        bounds.add_report(quantity_name(art.interference.report.quantity),
                          art.interference.report);
        bounds.add_report(quantity_name(art.cut.report.quantity), art.cut.report);
        bounds.add_report(quantity_name(art.capacity.report.quantity), art.capacity.report);
        if (art.annulus.prime_exists)
            bounds.add("annulus_count_prime_upper", cfg.eta, art.annulus.prime.upper_tail_freq,
                       art.annulus.prime.binomial_tail_prediction, art.annulus.prime.samples);
        if (art.annulus.dprime_exists)
            bounds.add("annulus_count_dprime_upper", cfg.eta,
                       art.annulus.dprime.upper_tail_freq,
                       art.annulus.dprime.binomial_tail_prediction,
                       art.annulus.dprime.samples);
        bounds.close();
    }
    note("wrote bounds.csv");

    {
        json report;
        report["schema_version"] = kConfigSchemaVersion;
        report["config"] = resolved_config;
        report["expectations"] = table_to_json(art.interference.table);
        report["epsilons"] = eps_to_json(art.interference.eps);
        report["interference"] = art.interference.report.to_json();
        report["cut"] = art.cut.report.to_json();
        report["capacity"] = art.capacity.report.to_json();
        report["annulus"] = json{{"prime", art.annulus.prime.to_json()},
                                 {"dprime", art.annulus.dprime.to_json()},
                                 {"prime_exists", art.annulus.prime_exists},
                                 {"dprime_exists", art.annulus.dprime_exists},
                                 {"r_min_prime", num_or_null(art.annulus.r_min_prime)},
                                 {"r_max_prime", num_or_null(art.annulus.r_max_prime)},
                                 {"r_min_dprime", num_or_null(art.annulus.r_min_dprime)},
                                 {"r_max_dprime", num_or_null(art.annulus.r_max_dprime)}};
        std::ofstream out(dir / "report.json", std::ios::binary);
        out << report.dump(2) << "\n";
        if (!out) throw std::runtime_error("failed to write report.json");
    }
    note("wrote report.json");

    art.files = {"interference.csv", "cut.csv", "capacity.csv",
                 "annulus.csv",      "bounds.csv", "report.json"};

    {
        json manifest;
        manifest["schema_version"] = kConfigSchemaVersion;
        manifest["generator"] = "sinrcap";
        manifest["version"] = kGeneratorVersion;
        manifest["created_utc"] = utc_timestamp();
        manifest["base_seed"] = cfg.base_seed;
        manifest["config"] = resolved_config;
        json outputs = json::array();
        for (const std::string& name : art.files) {
            const auto path = dir / name;
            outputs.push_back(json{{"file", name},
                                   {"bytes", std::filesystem::file_size(path)},
                                   {"fnv1a64", hex_digest(fnv1a64_file(path.string()))}});
        }
        manifest["outputs"] = outputs;
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
        if (!out) throw std::runtime_error("failed to write manifest.json");
    }
    note("wrote manifest.json");
    art.files.push_back("manifest.json");

    return art;
}

}  // namespace sinrcap

// Command-line front end: reproducible experiments over the library modules,
// with key=value config files, seeded RNG, and self-describing CSV/JSON output.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgfield/bump.hpp"
#include "sgfield/field.hpp"
#include "sgfield/modulus.hpp"
#include "sgfield/slnd.hpp"
#include "sgfield/special_functions.hpp"
#include "sgfield/spectra.hpp"
#include "sgfield/table.hpp"
#include "sgfield/variogram.hpp"

namespace {

using sgfield::OutputTable;

struct CommonOptions {
    std::string output;
    std::string format = "csv";
    int threads = 1;
    std::string config_path;  // consumed during argv preprocessing
};

struct SpectrumOptions {
    double alpha = 3.0;
    int l_max = 0;  // 0: subcommand-specific default
    std::string envelope = "constant";
    double envelope_value = 1.0;
    std::string spectrum_config;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& default_name) {
    const char* env_dir = std::getenv("SGFIELD_OUT_DIR");
    std::string dir = env_dir ? env_dir : ".";
    opt.output = dir + "/" + default_name;
    cmd->add_option("--output", opt.output, "Output file path");
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--config", opt.config_path,
                    "key=value config file; command-line flags override it");
}

void add_spectrum(CLI::App* cmd, SpectrumOptions& opt) {
    cmd->add_option("--alpha", opt.alpha, "Spectral index (> 2)");
    cmd->add_option("--l-max", opt.l_max, "Truncation multipole");
    cmd->add_option("--envelope", opt.envelope, "Envelope kind")
        ->check(CLI::IsMember({"constant", "logsin"}));
    cmd->add_option("--envelope-value", opt.envelope_value, "Constant envelope value");
    cmd->add_option("--spectrum-config", opt.spectrum_config,
                    "Load spectrum parameters from a key=value file");
}

sgfield::PowerSpectrum build_spectrum(const CLI::App* cmd, const SpectrumOptions& opt,
                                      int default_l_max) {
    double alpha = opt.alpha;
    int l_max = opt.l_max > 0 ? opt.l_max : default_l_max;
    std::string envelope = opt.envelope;
    double envelope_value = opt.envelope_value;
    if (!opt.spectrum_config.empty()) {
        std::ifstream in(opt.spectrum_config);
        if (!in) throw std::runtime_error("cannot read spectrum config: " + opt.spectrum_config);
        std::stringstream buf;
        buf << in.rdbuf();
        auto loaded = sgfield::PowerSpectrum::from_key_value(buf.str());
        if (!cmd->count("--alpha")) alpha = loaded.alpha();
        if (!cmd->count("--l-max") && opt.l_max == 0) l_max = loaded.l_max();
        if (!cmd->count("--envelope")) envelope = loaded.envelope_name();
        if (!cmd->count("--envelope-value") && envelope == "constant")
            envelope_value = loaded.envelope(1);
    }
    if (envelope == "logsin") return sgfield::PowerSpectrum::log_oscillation_envelope(alpha, l_max);
    return sgfield::PowerSpectrum::constant_envelope(alpha, l_max, envelope_value);
}

void echo_spectrum(OutputTable& table, const sgfield::PowerSpectrum& spec) {
    table.set_config("alpha", spec.alpha());
    table.set_config("l_max", (long long)spec.l_max());
    table.set_config("envelope", spec.envelope_name());
    if (spec.envelope_name() == "constant") table.set_config("envelope_value", spec.envelope(1));
    table.set_config("c0", spec.c0());
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0 && hi > lo) || points < 2)
        throw std::invalid_argument("grid requires 0 < min < max and points >= 2");
    std::vector<double> g(points);
    double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list");
    return out;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumCmd {
    CommonOptions common;
    SpectrumOptions spec;
    int derived_k = 0;
    std::string save_spectrum;
    CLI::App* cmd = nullptr;

    void run() {
        auto spectrum = build_spectrum(cmd, spec, 1000);
        if (derived_k > 0) spectrum = spectrum.derived(derived_k);
        OutputTable table("spectrum", {"ell", "c_ell"});
        echo_spectrum(table, spectrum);
        table.set_config("derived_k", (long long)derived_k);
        auto tv = spectrum.total_variance();
        table.add_note("total_variance=" + OutputTable::format_double(tv.value));
        table.add_note("total_variance_tail_bound=" + OutputTable::format_double(tv.tail_bound));
        for (int ell = 1; ell <= spectrum.l_max(); ++ell) {
            double row[] = {double(ell), spectrum.value(ell)};
            table.add_row(row);
        }
        table.write_file(common.output, common.format);
        if (!save_spectrum.empty()) {
            std::ofstream out(save_spectrum, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write spectrum config: " + save_spectrum);
            out << spectrum.to_key_value();
        }
    }
};

// ----------------------------------------------------------------- special

struct SpecialCmd {
    CommonOptions common;
    std::string check = "sumpoly";
    double s = 2.0;
    double theta = 1e-3;
    double theta_max = 0.0;  // 0: 100 * theta, capped at 0.1
    int points = 16;
    int ell = 10;
    double psi = 0.3;

    void run() {
        if (check == "sumpoly")
            run_sumpoly();
        else if (check == "mehler")
            run_mehler();
        else
            run_polylog();
    }

    void run_sumpoly() {
        double hi = theta_max > 0.0 ? theta_max : std::min(100.0 * theta, 0.1);
        auto grid = log_grid(theta, hi, points);
        auto rep = sgfield::sum_poly_asymptotic_check(s, grid);
        OutputTable table("special",
                          {"s", "theta", "sum", "predicted_order", "fitted_slope", "ratio_s2"});
        table.set_config("check", std::string("sumpoly"));
        table.set_config("s", s);
        table.set_config("theta", theta);
        table.set_config("theta_max", hi);
        table.set_config("points", (long long)points);
        table.add_note("case=" + rep.case_name);
        table.add_note("fit_residual=" + OutputTable::format_double(rep.fit_residual));
        for (std::size_t i = 0; i < rep.theta.size(); ++i) {
            double row[] = {s, rep.theta[i], rep.sum[i], rep.predicted_order, rep.fitted_slope,
                            rep.ratio_s2};
            table.add_row(row);
        }
        table.write_file(common.output, common.format);
    }

    void run_mehler() {
        double hi = theta_max > 0.0 ? theta_max : 3.1;
        auto grid = log_grid(theta, hi, points);
        OutputTable table("special", {"ell", "theta", "recurrence", "quadrature", "abs_diff"});
        table.set_config("check", std::string("mehler"));
        table.set_config("ell", (long long)ell);
        for (double th : grid) {
            double rec = sgfield::legendre_p(ell, std::cos(th));
            double quad = sgfield::mehler_dirichlet_p(ell, th);
            double row[] = {double(ell), th, rec, quad, std::fabs(rec - quad)};
            table.add_row(row);
        }
        table.write_file(common.output, common.format);
    }

    void run_polylog() {
        OutputTable table("special", {"s", "psi", "re", "im", "identity_residual"});
        table.set_config("check", std::string("polylog"));
        table.set_config("s", s);
        table.set_config("psi", psi);
        auto li = sgfield::polylog(s, psi);
        auto rhs = std::polar(1.0, 0.5 * psi) * li;
        sgfield::KahanSum cosine;
        for (long l = 1; l <= 100000; ++l)
            cosine.add(std::pow(double(l), -s) * std::cos((l + 0.5) * psi));
        double row[] = {s, psi, li.real(), li.imag(), std::fabs(cosine.value() - rhs.real())};
        table.add_row(row);
        table.write_file(common.output, common.format);
    }
};

// --------------------------------------------------------------- variogram

struct VariogramCmd {
    CommonOptions common;
    SpectrumOptions spec;
    double theta_min = 1e-4;
    double theta_max = 0.05;
    int points = 64;
    CLI::App* cmd = nullptr;

    void run() {
        auto spectrum = build_spectrum(cmd, spec, sgfield::recommended_l_max(theta_min));
        auto grid = log_grid(theta_min, theta_max, points);
        auto prof = sgfield::sandwich_report(spectrum, grid);
        OutputTable table("variogram", {"theta", "variogram", "rho_sq", "ratio", "tail_bound"});
        echo_spectrum(table, spectrum);
        table.set_config("theta_min", theta_min);
        table.set_config("theta_max", theta_max);
        table.set_config("points", (long long)points);
        table.add_note("c1_estimate=" + OutputTable::format_double(prof.c1_estimate));
        table.add_note("ratio_slope=" + OutputTable::format_double(prof.ratio_slope));
        table.add_note(std::string("ratio_unbounded_flag=") +
                       (prof.ratio_unbounded_flag ? "1" : "0"));
        for (std::size_t i = 0; i < prof.theta.size(); ++i) {
            double row[] = {prof.theta[i], prof.value[i], prof.rho_sq[i], prof.ratio[i],
                            prof.tail_bound[i]};
            table.add_row(row);
        }
        table.write_file(common.output, common.format);
    }
};

// -------------------------------------------------------------------- bump

struct BumpCmd {
    CommonOptions common;
    double epsilon = 0.1;
    int l_max = 4096;
    int order = 2;
    std::string which_table = "profile";
    std::string coeffs_out;
    int profile_points = 256;

    void run() {
        sgfield::SmoothingKernel kernel(order);
        sgfield::BumpProfile profile(kernel, epsilon, l_max, {}, common.threads);

        auto coeffs_table = [&] {
            OutputTable t("bump", {"ell", "b_ell"});
            fill_config(t);
            for (int ell = 1; ell <= l_max; ++ell) {
                double row[] = {double(ell), profile.b(ell)};
                t.add_row(row);
            }
            return t;
        };
        auto profile_table = [&] {
            OutputTable t("bump", {"theta", "delta", "tail_bound"});
            fill_config(t);
            t.add_note("delta0=" + OutputTable::format_double(profile.delta0()));
            for (int i = 0; i < profile_points; ++i) {
                double th = M_PI * double(i) / (profile_points - 1);
                auto d = profile.delta(th);
                double row[] = {th, d.value, d.tail_bound};
                t.add_row(row);
            }
            return t;
        };

        if (which_table == "profile")
            profile_table().write_file(common.output, common.format);
        else
            coeffs_table().write_file(common.output, common.format);
        if (!coeffs_out.empty()) coeffs_table().write_file(coeffs_out, common.format);
    }

    void fill_config(OutputTable& t) const {
        t.set_config("epsilon", epsilon);
        t.set_config("l_max", (long long)l_max);
        t.set_config("convolution_order", (long long)order);
    }
};

// -------------------------------------------------------------------- slnd

struct SlndCmd {
    CommonOptions common;
    double alpha = 3.0;
    int n = 4;
    std::string geometry = "ring";
    std::string eps_list = "0.1,0.05,0.025";
    int replicates = 100;
    std::uint64_t seed = 0;
    bool exploratory = false;

    void run() {
        auto eps = parse_list(eps_list);
        auto res = sgfield::slnd_scan(alpha, eps, n, sgfield::slnd_geometry_from_string(geometry),
                                      replicates, seed, common.threads, exploratory);
        OutputTable table("slnd",
                          {"epsilon", "replicate", "min_dist", "var", "ratio_c2", "ratio_nd"});
        table.set_config("alpha", alpha);
        table.set_config("n", (long long)n);
        table.set_config("geometry", geometry);
        table.set_config("eps", eps_list);
        table.set_config("replicates", (long long)replicates);
        table.set_config("seed", (long long)seed);
        table.set_config("exploratory", std::string(exploratory ? "1" : "0"));
        if (res.exploratory)
            table.add_note("non-certifying: alpha >= 4 scan has no asserted lower-bound form");
        table.add_note("slope_log_min_ratio=" +
                       OutputTable::format_double(res.slope_log_min_ratio));
        table.add_note("c2_empirical=" + OutputTable::format_double(res.c2_estimate.value));
        table.add_note("c2_config=" + res.c2_estimate.config_digest);
        for (const auto& row : res.rows) {
            double r[] = {row.epsilon, double(row.replicate), row.min_dist,
                          row.var,     row.ratio_c2,          row.ratio_nd};
            table.add_row(r);
        }
        table.write_file(common.output, common.format);
    }
};

// ----------------------------------------------------------------- modulus

struct ModulusCmd {
    CommonOptions common;
    SpectrumOptions spec;
    int k = 0;
    std::string kind = "rho";
    int j_min = 4;
    int j_max = 9;
    int replicates = 20;
    int pairs_per_scale = 256;
    std::uint64_t seed = 0;
    CLI::App* cmd = nullptr;

    void run() {
        sgfield::ModulusExperiment exp{
            build_spectrum(cmd, spec, 64),  // l_max of the experiment comes below
            {},
            replicates,
            pairs_per_scale,
            sgfield::statistic_kind_from_string(kind),
            k,
            spec.l_max,
            seed};
        for (int j = j_min; j <= j_max; ++j) exp.scale_levels.push_back(j);
        auto res = sgfield::run_modulus_experiment(exp, common.threads);

        OutputTable table("modulus", {"scale", "replicate", "statistic", "resolved_flag"});
        table.set_config("alpha", exp.spectrum.alpha());
        table.set_config("k", (long long)k);
        table.set_config("kind", kind);
        table.set_config("j_min", (long long)j_min);
        table.set_config("j_max", (long long)j_max);
        table.set_config("replicates", (long long)replicates);
        table.set_config("pairs_per_scale", (long long)pairs_per_scale);
        table.set_config("l_max", (long long)res.l_max);
        table.set_config("seed", (long long)seed);
        table.add_note("stability_factor=" + OutputTable::format_double(res.stability_factor));
        table.add_note("norm_ratio_finest=" + OutputTable::format_double(res.norm_ratio_finest));
        table.add_note("k_hat=" + OutputTable::format_double(res.k_estimate.value));
        table.add_note("k_hat_config=" + res.k_estimate.config_digest);
        {
            auto witness = res.witness_min_per_replicate;
            std::sort(witness.begin(), witness.end());
            table.add_note("witness_min=" + OutputTable::format_double(witness.front()));
            table.add_note("witness_median=" +
                           OutputTable::format_double(witness[witness.size() / 2]));
        }
        for (const auto& row : res.rows) {
            double r[] = {row.scale, double(row.replicate), row.statistic,
                          row.resolved ? 1.0 : 0.0};
            table.add_row(r);
        }
        table.write_file(common.output, common.format);
    }
};

// ------------------------------------------------------------------- synth

struct SynthCmd {
    CommonOptions common;
    SpectrumOptions spec;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    int k = 0;
    std::string coeffs_out;
    int grid_theta = 16;
    int grid_phi = 32;
    CLI::App* cmd = nullptr;

    void run() {
        auto spectrum = build_spectrum(cmd, spec, 64);
        auto realization = sgfield::sample_realization(spectrum, seed, replicate);
        if (k > 0) realization = sgfield::pseudo_diff(realization, k);

        if (!coeffs_out.empty()) {
            OutputTable t("synth", {"ell", "m", "re", "im"});
            fill_config(t, spectrum);
            for (int ell = 1; ell <= spectrum.l_max(); ++ell)
                for (int m = -ell; m <= ell; ++m) {
                    auto a = realization.coefficients.get(ell, m);
                    double row[] = {double(ell), double(m), a.real(), a.imag()};
                    t.add_row(row);
                }
            t.write_file(coeffs_out, common.format);
        }

        std::vector<sgfield::SpherePoint> pts;
        std::vector<std::pair<double, double>> angles;
        for (int i = 0; i < grid_theta; ++i)
            for (int j = 0; j < grid_phi; ++j) {
                double th = M_PI * (i + 0.5) / grid_theta;
                double ph = 2.0 * M_PI * j / grid_phi;
                pts.push_back(sgfield::SpherePoint::from_angles(th, ph));
                angles.emplace_back(th, ph);
            }
        auto values = sgfield::evaluate(realization, pts, common.threads);
        OutputTable t("synth", {"theta", "phi", "value"});
        fill_config(t, spectrum);
        if (realization.variance_warning)
            t.add_note("variance_warning: derivative order exceeds alpha - 2 at infinite l_max");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double row[] = {angles[i].first, angles[i].second, values[i]};
            t.add_row(row);
        }
        t.write_file(common.output, common.format);
    }

    void fill_config(OutputTable& t, const sgfield::PowerSpectrum& spectrum) const {
        echo_spectrum(t, spectrum);
        t.set_config("seed", (long long)seed);
        t.set_config("replicate", (long long)replicate);
        t.set_config("k", (long long)k);
        t.set_config("grid_theta", (long long)grid_theta);
        t.set_config("grid_phi", (long long)grid_phi);
    }
};

// ------------------------------------------------------------- entry point

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

// Splices `--key=value` arguments from a config file right after the
// subcommand token, so explicit flags (parsed later, TakeLast) override it.
std::vector<std::string> splice_config_file(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed config line: " + line);
        injected.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
    }
    std::vector<std::string> out;
    out.push_back(args[0]);  // subcommand
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

void take_last_everywhere(CLI::App* app) {
    for (auto* opt : app->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (auto* sub : app->get_subcommands({})) take_last_everywhere(sub);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isotropic Gaussian fields on the 2-sphere: spectra, variograms, bump "
                 "functions, local nondeterminism and modulus-of-continuity experiments"};
    app.require_subcommand(1);

    SpectrumCmd spectrum_cmd;
    auto* c_spectrum = app.add_subcommand("spectrum", "Tabulate an angular power spectrum");
    add_common(c_spectrum, spectrum_cmd.common, "spectrum.csv");
    add_spectrum(c_spectrum, spectrum_cmd.spec);
    c_spectrum->add_option("--derived", spectrum_cmd.derived_k, "Derivative order k");
    c_spectrum->add_option("--save-spectrum", spectrum_cmd.save_spectrum,
                           "Write the spectrum as a key=value config");
    spectrum_cmd.cmd = c_spectrum;

    SpecialCmd special_cmd;
    auto* c_special = app.add_subcommand("special", "Special-function checks");
    add_common(c_special, special_cmd.common, "special.csv");
    c_special->add_option("--check", special_cmd.check, "Which check to run")
        ->check(CLI::IsMember({"sumpoly", "mehler", "polylog"}));
    c_special->add_option("--s", special_cmd.s, "Series exponent s > 1");
    c_special->add_option("--theta", special_cmd.theta, "Smallest angle of the grid");
    c_special->add_option("--theta-max", special_cmd.theta_max, "Largest angle of the grid");
    c_special->add_option("--points", special_cmd.points, "Grid size");
    c_special->add_option("--ell", special_cmd.ell, "Degree for the mehler check");
    c_special->add_option("--psi", special_cmd.psi, "Angle for the polylog check");

    VariogramCmd variogram_cmd;
    auto* c_variogram = app.add_subcommand("variogram", "Variogram sandwich diagnostics");
    add_common(c_variogram, variogram_cmd.common, "variogram.csv");
    add_spectrum(c_variogram, variogram_cmd.spec);
    c_variogram->add_option("--theta-min", variogram_cmd.theta_min, "Smallest angle");
    c_variogram->add_option("--theta-max", variogram_cmd.theta_max, "Largest angle");
    c_variogram->add_option("--points", variogram_cmd.points, "Grid size");
    variogram_cmd.cmd = c_variogram;

    BumpCmd bump_cmd;
    auto* c_bump = app.add_subcommand("bump", "Spherical bump function tables");
    add_common(c_bump, bump_cmd.common, "bump.csv");
    c_bump->add_option("--epsilon", bump_cmd.epsilon, "Cap radius");
    c_bump->add_option("--l-max", bump_cmd.l_max, "Truncation multipole");
    c_bump->add_option("--order", bump_cmd.order, "Convolution order of the kernel");
    c_bump->add_option("--table", bump_cmd.which_table, "Main table")
        ->check(CLI::IsMember({"profile", "coeffs"}));
    c_bump->add_option("--coeffs-out", bump_cmd.coeffs_out,
                       "Also write the coefficient table here");
    c_bump->add_option("--profile-points", bump_cmd.profile_points, "Profile grid size");

    SlndCmd slnd_cmd;
    auto* c_slnd = app.add_subcommand("slnd", "Strong local nondeterminism scan");
    add_common(c_slnd, slnd_cmd.common, "slnd.csv");
    c_slnd->add_option("--alpha", slnd_cmd.alpha, "Spectral index");
    c_slnd->add_option("--n", slnd_cmd.n, "Number of conditioning points");
    c_slnd->add_option("--geometry", slnd_cmd.geometry, "Conditioning geometry")
        ->check(CLI::IsMember({"ring", "random-cap", "adversarial"}));
    c_slnd->add_option("--eps", slnd_cmd.eps_list, "Comma-separated scan scales");
    c_slnd->add_option("--replicates", slnd_cmd.replicates, "Configurations per scale");
    c_slnd->add_option("--seed", slnd_cmd.seed, "RNG seed")->required();
    c_slnd->add_flag("--exploratory", slnd_cmd.exploratory,
                     "Allow the non-certified alpha >= 4 regime");

    ModulusCmd modulus_cmd;
    auto* c_modulus = app.add_subcommand("modulus", "Uniform modulus of continuity experiment");
    add_common(c_modulus, modulus_cmd.common, "modulus.csv");
    add_spectrum(c_modulus, modulus_cmd.spec);
    c_modulus->add_option("--k", modulus_cmd.k, "Derivative order");
    c_modulus->add_option("--kind", modulus_cmd.kind, "Statistic kind")
        ->check(CLI::IsMember({"rho", "geodesic", "alpha4", "derivative"}));
    c_modulus->add_option("--j-min", modulus_cmd.j_min, "Coarsest dyadic level");
    c_modulus->add_option("--j-max", modulus_cmd.j_max, "Finest dyadic level");
    c_modulus->add_option("--replicates", modulus_cmd.replicates, "Replicates");
    c_modulus->add_option("--pairs-per-scale", modulus_cmd.pairs_per_scale,
                          "Random pairs per scale");
    c_modulus->add_option("--seed", modulus_cmd.seed, "RNG seed")->required();
    modulus_cmd.cmd = c_modulus;

    SynthCmd synth_cmd;
    auto* c_synth = app.add_subcommand("synth", "Sample and evaluate one field realization");
    add_common(c_synth, synth_cmd.common, "synth.csv");
    add_spectrum(c_synth, synth_cmd.spec);
    c_synth->add_option("--seed", synth_cmd.seed, "RNG seed")->required();
    c_synth->add_option("--replicate", synth_cmd.replicate, "Replicate index");
    c_synth->add_option("--k", synth_cmd.k, "Derivative order");
    c_synth->add_option("--coeffs-out", synth_cmd.coeffs_out, "Coefficient table path");
    c_synth->add_option("--grid-theta", synth_cmd.grid_theta, "Latitude grid size");
    c_synth->add_option("--grid-phi", synth_cmd.grid_phi, "Longitude grid size");
    synth_cmd.cmd = c_synth;

    take_last_everywhere(&app);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = splice_config_file(args);
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_error("usage", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        emit_error("resource", e.what());
        return 4;
    }

    try {
        if (c_spectrum->parsed()) spectrum_cmd.run();
        if (c_special->parsed()) special_cmd.run();
        if (c_variogram->parsed()) variogram_cmd.run();
        if (c_bump->parsed()) bump_cmd.run();
        if (c_slnd->parsed()) slnd_cmd.run();
        if (c_modulus->parsed()) modulus_cmd.run();
        if (c_synth->parsed()) synth_cmd.run();
    } catch (const sgfield::ConvergenceError& e) {
        emit_error("convergence", e.what());
        return 5;
    } catch (const sgfield::BudgetError& e) {
        emit_error("convergence", e.what());
        return 5;
    } catch (const sgfield::ConsistencyError& e) {
        emit_error("internal", e.what());
        return 6;
    } catch (const std::domain_error& e) {
        emit_error("validation", e.what());
        return 3;
    } catch (const std::out_of_range& e) {
        emit_error("validation", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        emit_error("validation", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("resource", e.what());
        return 4;
    }
    return 0;
}

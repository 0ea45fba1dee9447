#include "sgfield/spectra.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sgfield {

double rho_alpha(double alpha, double t) {
    if (alpha <= 2.0) throw std::domain_error("rho_alpha: requires alpha > 2");
    if (t < 0.0) throw std::domain_error("rho_alpha: requires t >= 0");
    if (t == 0.0) return 0.0;
    if (alpha < 4.0) return std::pow(t, 0.5 * (alpha - 2.0));
    if (alpha == 4.0) return t * std::sqrt(abs_log(t));
    return t;
}

PowerSpectrum::PowerSpectrum(double alpha, int l_max) {
    *this = constant_envelope(alpha, l_max, 1.0);
}

PowerSpectrum PowerSpectrum::constant_envelope(double alpha, int l_max, double g) {
    if (g <= 0.0) throw std::domain_error("PowerSpectrum: envelope must be positive");
    PowerSpectrum s;
    s.alpha_ = alpha;
    s.l_max_ = l_max;
    s.c0_ = std::max(g, 1.0 / g);
    s.envelope_ = [g](int) { return g; };
    s.envelope_name_ = "constant";
    s.envelope_value_ = g;
    if (alpha <= 2.0) throw std::domain_error("PowerSpectrum: requires alpha > 2");
    if (l_max < 1) throw std::domain_error("PowerSpectrum: requires l_max >= 1");
    return s;
}

PowerSpectrum PowerSpectrum::log_oscillation_envelope(double alpha, int l_max) {
    return custom_envelope(
        alpha, l_max, [](int ell) { return 1.0 + 0.5 * std::sin(std::log(double(ell))); }, 2.0,
        "logsin");
}

PowerSpectrum PowerSpectrum::custom_envelope(double alpha, int l_max,
                                             std::function<double(int)> envelope, double c0,
                                             std::string envelope_name) {
    if (alpha <= 2.0) throw std::domain_error("PowerSpectrum: requires alpha > 2");
    if (l_max < 1) throw std::domain_error("PowerSpectrum: requires l_max >= 1");
    if (c0 < 1.0) throw std::domain_error("PowerSpectrum: requires c0 >= 1");
    PowerSpectrum s;
    s.alpha_ = alpha;
    s.l_max_ = l_max;
    s.c0_ = c0;
    s.envelope_ = std::move(envelope);
    s.envelope_name_ = std::move(envelope_name);
    s.check_envelope_bounds();
    return s;
}

void PowerSpectrum::check_envelope_bounds() const {
    double lo = 1.0 / c0_ - 1e-12, hi = c0_ + 1e-12;
    for (int ell = 1; ell <= l_max_; ++ell) {
        double g = envelope_(ell);
        if (!(g >= lo && g <= hi))
            throw std::domain_error("PowerSpectrum: envelope leaves [1/c0, c0] at l=" +
                                    std::to_string(ell));
    }
}

double PowerSpectrum::envelope(int ell) const {
    if (ell < 1 || ell > l_max_)
        throw std::out_of_range("PowerSpectrum::envelope: l outside [1, l_max]");
    return envelope_(ell);
}

double PowerSpectrum::value(int ell) const {
    if (ell < 1 || ell > l_max_)
        throw std::out_of_range("PowerSpectrum::value: l outside [1, l_max]");
    return envelope_(ell) * std::pow(double(ell), -alpha_);
}

PowerSpectrum PowerSpectrum::with_l_max(int new_l_max) const {
    if (new_l_max < 1) throw std::domain_error("PowerSpectrum: requires l_max >= 1");
    PowerSpectrum s = *this;
    s.l_max_ = new_l_max;
    s.check_envelope_bounds();
    return s;
}

PowerSpectrum PowerSpectrum::derived(int k) const {
    if (k < 1) throw std::domain_error("PowerSpectrum::derived: requires k >= 1");
    if (alpha_ <= 2.0 + 2.0 * k)
        throw std::domain_error("PowerSpectrum::derived: requires alpha > 2 + 2k");
    auto base = envelope_;
    auto env = [base, k](int ell) {
        double l = double(ell);
        // (1 + l(l+1))^k / l^(2k), in (1, 3^k].
        return base(ell) * std::pow((1.0 + l * (l + 1.0)) / (l * l), double(k));
    };
    return custom_envelope(alpha_ - 2.0 * k, l_max_, env, c0_ * std::pow(3.0, double(k)),
                           envelope_name_ + "*diff" + std::to_string(k));
}

ValueWithTail PowerSpectrum::total_variance() const {
    KahanSum sum;
    for (int ell = 1; ell <= l_max_; ++ell)
        sum.add((2.0 * ell + 1.0) / (4.0 * M_PI) * value(ell));
    double L = double(l_max_);
    double tail = c0_ / (4.0 * M_PI) *
                  (2.0 * std::pow(L, 2.0 - alpha_) / (alpha_ - 2.0) +
                   std::pow(L, 1.0 - alpha_) / (alpha_ - 1.0));
    return {sum.value(), tail};
}

std::string PowerSpectrum::to_key_value() const {
    if (envelope_name_ != "constant" && envelope_name_ != "logsin")
        throw std::domain_error("PowerSpectrum: only constant/logsin envelopes serialize");
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << alpha_ << "\n";
    os << "l_max=" << l_max_ << "\n";
    os << "envelope=" << envelope_name_ << "\n";
    if (envelope_name_ == "constant") os << "envelope_value=" << envelope_value_ << "\n";
    os << "c0=" << c0_ << "\n";
    return os.str();
}

PowerSpectrum PowerSpectrum::from_key_value(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("PowerSpectrum: malformed config line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("PowerSpectrum: missing config key: " + key);
        return it->second;
    };
    double alpha = std::stod(need("alpha"));
    int l_max = std::stoi(need("l_max"));
    std::string env = kv.count("envelope") ? kv["envelope"] : "constant";
    if (env == "constant") {
        double g = kv.count("envelope_value") ? std::stod(kv["envelope_value"]) : 1.0;
        return constant_envelope(alpha, l_max, g);
    }
    if (env == "logsin") return log_oscillation_envelope(alpha, l_max);
    throw std::invalid_argument("PowerSpectrum: unknown envelope kind: " + env);
}

int recommended_l_max(double theta, int cap) {
    if (theta <= 0.0) return cap;
    double l = std::ceil(50.0 / theta);
    if (l >= double(cap)) return cap;
    return std::max(64, int(l));
}

}  // namespace sgfield

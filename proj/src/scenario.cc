// Copyright 2026 The Vampire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vampire/scenario.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "vampire/error.h"

namespace vampire {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t end = std::min(text.find(sep, start), text.size());
        std::string part(text.substr(start, end - start));
        part.erase(0, part.find_first_not_of(" \t"));
        part.erase(part.find_last_not_of(" \t") + 1);
        if (!part.empty()) {
            parts.push_back(std::move(part));
        }
        start = end + 1;
    }
    return parts;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    std::ostringstream os;
    os << key << ": expected " << expected << ", got '" << value << "'";
    throw Error(ErrorCode::kParseError, os.str());
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        bad_value(key, value, "a number");
    }
    return out;
}

class Lookup {
   public:
    explicit Lookup(const KeyValues &values) : values_(values) {
    }

    const std::string &str(std::string_view key) const {
        for (const auto &[k, v] : values_) {
            if (k == key) {
                return v;
            }
        }
        throw Error(ErrorCode::kParseError, "missing config key " + std::string(key));
    }
    double real(std::string_view key) const {
        return parse_number<double>(key, str(key));
    }
    int integer(std::string_view key) const {
        return parse_number<int>(key, str(key));
    }
    std::int64_t int64(std::string_view key) const {
        return parse_number<std::int64_t>(key, str(key));
    }
    std::vector<double> reals(std::string_view key) const {
        std::vector<double> out;
        for (const std::string &part : split(str(key), ',')) {
            out.push_back(parse_number<double>(key, part));
        }
        return out;
    }

   private:
    const KeyValues &values_;
};

ProfileKind parse_profile_kind(std::string_view key, std::string_view name) {
    if (name == "uniform_ellipse") {
        return ProfileKind::kUniformEllipse;
    }
    if (name == "ring") {
        return ProfileKind::kUniformEllipseWithRing;
    }
    if (name == "gaussian") {
        return ProfileKind::kGaussian;
    }
    bad_value(key, name, "uniform_ellipse, ring or gaussian");
}

PixelSet parse_region(std::string_view key, std::string_view spec, int width, int height) {
    if (spec == "silhouette") {
        return vampire_silhouette(width, height);
    }
    if (spec.starts_with("rect:")) {
        const auto parts = split(spec.substr(5), ':');
        if (parts.size() == 4) {
            return rectangle_region(width, height, parse_number<int>(key, parts[0]), parse_number<int>(key, parts[1]),
                                    parse_number<int>(key, parts[2]), parse_number<int>(key, parts[3]));
        }
    }
    bad_value(key, spec, "silhouette or rect:x0:y0:x1:y1");
}

void check_range(std::string_view key, double value, double lo, double hi) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream os;
        os << key << " = " << value << " is outside [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::kInvalidArgument, os.str());
    }
}

void set_value(KeyValues &values, std::string_view key, std::string value) {
    for (auto &[k, v] : values) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    values.emplace_back(std::string(key), std::move(value));
}

}  // namespace

std::string_view scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::kInitial:
            return "initial";
        case Scenario::kLossHighContrast:
            return "loss_high_contrast";
        case Scenario::kLossLowContrast:
            return "loss_low_contrast";
        case Scenario::kSubtraction:
            break;
    }
    return "subtraction";
}

Scenario parse_scenario(std::string_view name) {
    for (Scenario s : {Scenario::kInitial, Scenario::kLossHighContrast, Scenario::kLossLowContrast,
                       Scenario::kSubtraction}) {
        if (scenario_name(s) == name) {
            return s;
        }
    }
    bad_value("scenario", name, "initial, loss_high_contrast, loss_low_contrast or subtraction");
}

KeyValues default_config() {
    return {
        {"scenario", "subtraction"},
        {"source.kind", "thermal"},
        {"source.nbar", "1"},
        {"source.coherence_time_ns", "1000"},
        {"profile.kind", "ring"},
        {"profile.width", "64"},
        {"profile.height", "48"},
        {"profile.center_x", "-1"},
        {"profile.center_y", "-1"},
        {"profile.axis_x", "-1"},
        {"profile.axis_y", "-1"},
        {"profile.ring_gain", "1.5"},
        {"mask.region", "silhouette"},
        {"mask.high_herald_rate", "1"},
        {"mask.low_herald_rate", "0.13"},
        {"mask.rate_scale", "0.15"},
        {"mask.high_contrast", ""},
        {"mask.low_contrast", ""},
        {"scan.superpixel", "11"},
        {"scan.dwell_ns", "10000000"},
        {"scan.bins_per_superpixel", "0"},
        {"scan.trigger_mode", ""},
        {"scan.seed", ""},
        {"detector.bin_width_ns", "12"},
        {"herald.efficiency", "0.6"},
        {"herald.dark_prob", "0"},
        {"camera.efficiency", "0.6"},
        {"camera.dark_prob", "0"},
        {"verify.states", "thermal:0.5,thermal:1,coherent:1,fock:1,fock:2,fock:3"},
        {"verify.c_a", "0.1,0.5,0.9"},
        {"verify.r", "0.05,0.1,0.2"},
        {"verify.models", "operator,click_povm"},
        {"verify.nmax", std::to_string(kVerifyNmax)},
        {"analyze.max_relative_error", "0.3"},
        {"analyze.band", ""},
    };
}

KeyValues merge_config(KeyValues base, const KeyValues &overrides) {
    for (const auto &[key, value] : overrides) {
        if (key.starts_with("derived.")) {
            continue;
        }
        auto it = std::find_if(base.begin(), base.end(), [&](const auto &kv) { return kv.first == key; });
        if (it == base.end()) {
            throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
        }
        it->second = value;
    }
    return base;
}

std::string env_var_name(std::string_view key) {
    std::string name(kEnvPrefix);
    for (char c : key) {
        name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return name;
}

KeyValues apply_env_overrides(KeyValues config, const std::function<const char *(const char *)> &getenv) {
    for (auto &[key, value] : config) {
        if (const char *env = getenv(env_var_name(key).c_str())) {
            value = env;
        }
    }
    return config;
}

double contrast_for_rate(double herald_rate, double region_fraction, double nbar) {
    if (herald_rate == 0.0) {
        return 0.0;
    }
    if (!(region_fraction > 0.0) || !(nbar > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "a herald rate needs a lit region and a non-empty source");
    }
    const double contrast = std::sqrt(herald_rate / (region_fraction * nbar));
    if (!(contrast <= 1.0)) {
        std::ostringstream os;
        os << "herald rate " << herald_rate << " needs mask contrast " << contrast
           << " > 1; lower mask.rate_scale or raise source.nbar";
        throw Error(ErrorCode::kInvalidArgument, os.str());
    }
    return contrast;
}

DensityMatrix parse_state(std::string_view spec, int nmax) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        bad_value("verify.states", spec, "kind:value");
    }
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view value = spec.substr(colon + 1);
    if (kind == "thermal") {
        return make_thermal(parse_number<double>("verify.states", value), nmax);
    }
    if (kind == "coherent") {
        return make_coherent(parse_number<double>("verify.states", value), nmax);
    }
    if (kind == "fock") {
        return make_fock(parse_number<int>("verify.states", value), nmax);
    }
    bad_value("verify.states", spec, "thermal:<nbar>, coherent:<alpha> or fock:<n>");
}

ScenarioConfig build_scenario(const KeyValues &input) {
    const Lookup get(input);
    ScenarioConfig cfg;
    cfg.values = input;
    cfg.scenario = parse_scenario(get.str("scenario"));

    cfg.source.kind = parse_source_kind(get.str("source.kind"));
    cfg.source.nbar = get.real("source.nbar");
    check_range("source.nbar", cfg.source.nbar, 0.0, 1e12);
    cfg.source.coherence_time_ns = get.real("source.coherence_time_ns");

    ProfileParams params;
    params.kind = parse_profile_kind("profile.kind", get.str("profile.kind"));
    params.width = get.integer("profile.width");
    params.height = get.integer("profile.height");
    if (params.width < 1 || params.height < 1) {
        throw Error(ErrorCode::kInvalidArgument, "profile.width and profile.height must be positive");
    }
    params.center_x = get.real("profile.center_x");
    params.center_y = get.real("profile.center_y");
    params.axis_x = get.real("profile.axis_x");
    params.axis_y = get.real("profile.axis_y");
    params.ring_gain = get.real("profile.ring_gain");
    cfg.source.profile = make_profile(params);

    cfg.region = parse_region("mask.region", get.str("mask.region"), params.width, params.height);
    cfg.region_fraction = cfg.region.select(cfg.source.profile.power(), 0.0).sum();

    const double scale = get.real("mask.rate_scale");
    auto resolve = [&](const char *contrast_key, const char *rate_key) {
        if (!get.str(contrast_key).empty()) {
            const double contrast = get.real(contrast_key);
            check_range(contrast_key, contrast, 0.0, 1.0);
            return contrast;
        }
        return contrast_for_rate(get.real(rate_key) * scale, cfg.region_fraction, cfg.source.nbar);
    };
    switch (cfg.scenario) {
        case Scenario::kInitial:
            cfg.contrast = 0.0;
            break;
        case Scenario::kLossHighContrast:
            cfg.contrast = resolve("mask.high_contrast", "mask.high_herald_rate");
            break;
        case Scenario::kLossLowContrast:
        case Scenario::kSubtraction:
            cfg.contrast = resolve("mask.low_contrast", "mask.low_herald_rate");
            break;
    }
    cfg.herald_rate = cfg.contrast * cfg.contrast * cfg.region_fraction * cfg.source.nbar;
    cfg.scan.mask = make_mask(cfg.scenario == Scenario::kInitial ? MaskKind::kWhite : MaskKind::kVampire, cfg.contrast,
                              cfg.region);

    cfg.scan.superpixel = get.integer("scan.superpixel");
    cfg.scan.dwell_ns = get.real("scan.dwell_ns");
    cfg.scan.bins_per_superpixel = get.int64("scan.bins_per_superpixel");
    const std::string &trigger = get.str("scan.trigger_mode");
    if (cfg.scenario == Scenario::kSubtraction) {
        cfg.scan.trigger_mode = TriggerMode::kCoincidence;
    } else {
        cfg.scan.trigger_mode = trigger.empty() ? TriggerMode::kSingles : parse_trigger_mode(trigger);
    }
    set_value(cfg.values, "scan.trigger_mode", std::string(trigger_mode_name(cfg.scan.trigger_mode)));

    const std::string &seed = get.str("scan.seed");
    cfg.seed_given = !seed.empty();
    if (cfg.seed_given) {
        cfg.scan.seed = parse_number<std::uint64_t>("scan.seed", seed);
    } else {
        std::random_device rd;
        cfg.scan.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        set_value(cfg.values, "scan.seed", std::to_string(cfg.scan.seed));
    }

    const double bin_width = get.real("detector.bin_width_ns");
    cfg.scan.herald_detector = {get.real("herald.efficiency"), get.real("herald.dark_prob"), bin_width};
    cfg.scan.camera_detector = {get.real("camera.efficiency"), get.real("camera.dark_prob"), bin_width};

    cfg.max_relative_error = get.real("analyze.max_relative_error");
    const std::string &band = get.str("analyze.band");
    if (!band.empty()) {
        const auto parts = split(band, ':');
        if (parts.size() != 2) {
            bad_value("analyze.band", band, "row_begin:row_end");
        }
        cfg.band = std::pair{parse_number<int>("analyze.band", parts[0]), parse_number<int>("analyze.band", parts[1])};
    }
    return cfg;
}

VerifySettings build_verify_settings(const KeyValues &values) {
    const Lookup get(values);
    VerifySettings out;
    const int nmax = get.integer("verify.nmax");
    for (const std::string &spec : split(get.str("verify.states"), ',')) {
        out.states.push_back(NamedState{spec, parse_state(spec, nmax)});
    }
    out.c_a_values = get.reals("verify.c_a");
    out.r_values = get.reals("verify.r");
    for (const std::string &name : split(get.str("verify.models"), ',')) {
        out.models.push_back(parse_herald_model(name));
    }
    return out;
}

}  // namespace vampire

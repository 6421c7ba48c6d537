#include "kabc/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace kabc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (std::string_view key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path.empty() ? item.key() : path + "." + item.key(),
                         "unknown field");
    }
}

double as_double(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

std::size_t as_count(const json& value, const std::string& path) {
    if (value.is_number_unsigned()) return value.get<std::size_t>();
    if (value.is_number_integer() && value.get<long long>() >= 0) {
        return static_cast<std::size_t>(value.get<long long>());
    }
    fail(path, "expected a nonnegative integer");
}

std::uint64_t as_seed(const json& value, const std::string& path) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<long long>() >= 0) {
        return static_cast<std::uint64_t>(value.get<long long>());
    }
    fail(path, "expected an unsigned 64-bit integer");
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

std::vector<double> as_point(const json& value, const std::string& path,
                             std::size_t dimension) {
    if (!value.is_array()) fail(path, "expected an array of coordinates");
    if (value.size() != dimension) {
        fail(path, "has " + std::to_string(value.size()) + " coordinates, kernel dimension is " +
                       std::to_string(dimension));
    }
    std::vector<double> point;
    point.reserve(value.size());
    for (std::size_t k = 0; k < value.size(); ++k) {
        point.push_back(as_double(value[k], path + "[" + std::to_string(k) + "]"));
    }
    return point;
}

KernelSpec parse_kernel(const json& obj) {
    if (!obj.is_object()) fail("kernel", "expected an object");
    reject_unknown_keys(obj, "kernel", {"family", "bandwidth", "dimension"});
    KernelSpec kernel;
    std::string family = as_string(require(obj, "family", "kernel"), "kernel.family");
    auto parsed_family = family_from_name(family);
    if (!parsed_family) fail("kernel.family", "unknown kernel family '" + family + "'");
    kernel.family = *parsed_family;
    kernel.bandwidth = as_double(require(obj, "bandwidth", "kernel"), "kernel.bandwidth");
    if (!(kernel.bandwidth > 0.0)) fail("kernel.bandwidth", "must be positive");
    kernel.dimension = as_count(require(obj, "dimension", "kernel"), "kernel.dimension");
    if (kernel.dimension < 1) fail("kernel.dimension", "must be at least 1");
    return kernel;
}

ArmBlock parse_arm(const json& obj, const std::string& path, std::size_t dimension) {
    if (!obj.is_object()) fail(path, "expected an object");
    ArmBlock block;
    std::string kind = as_string(require(obj, "kind", path), path + ".kind");
    if (kind == "discrete") {
        reject_unknown_keys(obj, path, {"kind", "support", "probabilities", "count"});
        DiscreteArm arm;
        const json& support = require(obj, "support", path);
        if (!support.is_array() || support.empty()) {
            fail(path + ".support", "expected a nonempty array of points");
        }
        for (std::size_t a = 0; a < support.size(); ++a) {
            arm.support.push_back(
                as_point(support[a], path + ".support[" + std::to_string(a) + "]", dimension));
        }
        const json& probs = require(obj, "probabilities", path);
        if (!probs.is_array() || probs.size() != support.size()) {
            fail(path + ".probabilities", "expected one probability per support point");
        }
        double total = 0.0;
        for (std::size_t a = 0; a < probs.size(); ++a) {
            std::string ppath = path + ".probabilities[" + std::to_string(a) + "]";
            double p = as_double(probs[a], ppath);
            if (!(p >= 0.0)) fail(ppath, "must be nonnegative");
            arm.probabilities.push_back(p);
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            std::ostringstream oss;
            oss << "sum to " << total << ", expected 1";
            fail(path + ".probabilities", oss.str());
        }
        block.arm = std::move(arm);
    } else if (kind == "truncated-gaussian") {
        reject_unknown_keys(obj, path, {"kind", "mean", "scale", "radius", "count"});
        TruncatedGaussianArm arm;
        arm.mean = as_point(require(obj, "mean", path), path + ".mean", dimension);
        arm.scale = as_double(require(obj, "scale", path), path + ".scale");
        if (!(arm.scale > 0.0)) fail(path + ".scale", "must be positive");
        arm.radius = as_double(require(obj, "radius", path), path + ".radius");
        if (!(arm.radius > 0.0)) fail(path + ".radius", "must be positive");
        block.arm = std::move(arm);
    } else {
        fail(path + ".kind", "unknown arm kind '" + kind + "'");
    }
    if (auto it = obj.find("count"); it != obj.end()) {
        block.count = as_count(*it, path + ".count");
        if (block.count < 1) fail(path + ".count", "must be at least 1");
    }
    return block;
}

}  // namespace

std::string_view variant_name(Variant variant) {
    switch (variant) {
        case Variant::adaptive: return "adaptive";
        case Variant::nonadaptive: return "nonadaptive";
    }
    throw std::invalid_argument("unknown variant");
}

Environment ExperimentConfig::build_environment() const {
    std::vector<ArmSpec> arms;
    for (const ArmBlock& block : blocks) {
        for (std::size_t c = 0; c < block.count; ++c) arms.push_back(block.arm);
    }
    try {
        return Environment(std::move(arms), kernel);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("arms: ") + e.what());
    }
}

std::size_t ExperimentConfig::resolved_clusters(const Environment& env) const {
    return clusters ? *clusters : env.num_clusters();
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(doc, "", {"kernel", "arms", "delta", "K", "mode", "variant",
                                  "s0_squared", "trials", "seed", "cap"});

    ExperimentConfig config;
    config.kernel = parse_kernel(require(doc, "kernel", "config"));

    const json& arms = require(doc, "arms", "config");
    if (!arms.is_array() || arms.empty()) throw ConfigError("arms: expected a nonempty array");
    std::size_t total_arms = 0;
    for (std::size_t b = 0; b < arms.size(); ++b) {
        config.blocks.push_back(
            parse_arm(arms[b], "arms[" + std::to_string(b) + "]", config.kernel.dimension));
        total_arms += config.blocks.back().count;
    }
    if (total_arms < 2) {
        throw ConfigError("arms: total arm count is " + std::to_string(total_arms) +
                          ", need at least 2");
    }

    config.delta = as_double(require(doc, "delta", "config"), "delta");
    if (!(config.delta > 0.0 && config.delta <= 1.0)) fail("delta", "must lie in (0, 1]");

    if (auto it = doc.find("K"); it != doc.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "truth") fail("K", "expected an integer or \"truth\"");
        } else {
            std::size_t k = as_count(*it, "K");
            if (k < 1 || k > total_arms) {
                fail("K", "must lie in [1, " + std::to_string(total_arms) + "]");
            }
            config.clusters = k;
        }
    }

    if (auto it = doc.find("mode"); it != doc.end()) {
        std::string name = as_string(*it, "mode");
        try {
            config.mode = mode_from_name(name);
        } catch (const std::invalid_argument&) {
            fail("mode", "expected \"variance-aware\" or \"subgaussian\"");
        }
    }

    if (auto it = doc.find("variant"); it != doc.end()) {
        std::string name = as_string(*it, "variant");
        if (name == "adaptive") {
            config.variant = Variant::adaptive;
        } else if (name == "nonadaptive") {
            config.variant = Variant::nonadaptive;
        } else {
            fail("variant", "expected \"adaptive\" or \"nonadaptive\"");
        }
    }

    if (auto it = doc.find("s0_squared"); it != doc.end()) {
        config.s0_squared = as_double(*it, "s0_squared");
        if (!(*config.s0_squared > 0.0)) fail("s0_squared", "must be positive");
    }
    if (config.variant == Variant::nonadaptive && !config.s0_squared) {
        throw ConfigError("s0_squared: required by the nonadaptive variant");
    }

    if (auto it = doc.find("trials"); it != doc.end()) {
        config.trials = as_count(*it, "trials");
        if (config.trials < 1) fail("trials", "must be at least 1");
    }
    if (auto it = doc.find("seed"); it != doc.end()) {
        config.seed = as_seed(*it, "seed");
    }
    if (auto it = doc.find("cap"); it != doc.end()) {
        config.cap = as_count(*it, "cap");
        if (config.cap < 1) fail("cap", "must be at least 1");
    }

    config.build_environment();  // surfaces anything the field checks missed
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw ConfigError("failed reading config file '" + path + "'");
    return parse_config(buffer.str());
}

}  // namespace kabc

#include "cvswap/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

#include "cvswap/analytics.hpp"
#include "cvswap/error.hpp"

namespace cvswap::config {

using nlohmann::json;

namespace {

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// nlohmann::json keeps no source positions; locate the key's first quoted
// occurrence instead. Good enough for diagnostics.
int line_of_key(std::string_view text, std::string_view key) {
    const std::string quoted = fmt::format("\"{}\"", key);
    const auto pos = text.find(quoted);
    return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, std::string_view key, const std::string& what) const {
        const int line = line_of_key(text_, key);
        const std::string where = line > 0 ? fmt::format(" (line {})", line) : std::string{};
        throw ConfigError(fmt::format("{}: {}{}", path, what, where), path, line);
    }

    void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(path.empty() ? key : path + "." + key, key, "unknown key");
            }
        }
    }

    const json& object(const json& parent, const std::string& path, std::string_view key) const {
        const auto it = parent.find(key);
        if (it == parent.end()) fail(path, key, "missing required section");
        if (!it->is_object()) fail(path, key, "expected an object");
        return *it;
    }

    double number(const json& parent, const std::string& path, std::string_view key) const {
        const auto it = parent.find(key);
        if (it == parent.end()) fail(path, key, "missing required number");
        if (!it->is_number()) fail(path, key, "expected a number");
        return it->get<double>();
    }

    std::optional<double> optional_number(const json& parent, const std::string& path, std::string_view key) const {
        if (!parent.contains(key)) return std::nullopt;
        return number(parent, path, key);
    }

    double intensity(const json& parent, const std::string& path, std::string_view key) const {
        const double v = number(parent, path, key);
        if (!(v >= 0.0 && v <= 1.0)) fail(path, key, fmt::format("intensity efficiency must lie in [0, 1], got {}", v));
        return v;
    }

private:
    std::string_view text_;
};

Squeezing read_beam(const Reader& reader, const json& sq, int beam) {
    const std::string r_key = fmt::format("r{}", beam);
    const std::string db_key = fmt::format("r{}_db", beam);
    const bool has_r = sq.contains(r_key);
    const bool has_db = sq.contains(db_key);
    if (has_r == has_db) {
        reader.fail("squeezing." + r_key, has_r ? db_key : r_key,
                    fmt::format("exactly one of '{}' or '{}' is required", r_key, db_key));
    }
    Squeezing out;
    out.unit = has_r ? Squeezing::Unit::r : Squeezing::Unit::db;
    const std::string& key = has_r ? r_key : db_key;
    out.value = reader.number(sq, "squeezing." + key, key);
    if (!(out.value >= 0.0)) reader.fail("squeezing." + key, key, "squeezing must be >= 0");
    return out;
}

}  // namespace

double Squeezing::r() const { return unit == Unit::r ? value : analytics::r_from_db(value); }

ExperimentParams Config::to_params() const {
    ExperimentParams p = ExperimentParams::from_intensities(beam1.r(), beam2.r(), efficiencies, mirror_R, gain);
    p.enl_db = enl_db;
    p.channel_blocked = blocked.value_or(false);
    p.validate();
    return p;
}

Config parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError(fmt::format("JSON syntax error at line {}: {}", line, e.what()), {}, line);
    }
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");

    const Reader reader(text);
    reader.reject_unknown(doc, "", {"squeezing", "efficiencies", "mirror_R", "gain", "enl_db", "blocked"});

    Config cfg;
    const json& sq = reader.object(doc, "squeezing", "squeezing");
    reader.reject_unknown(sq, "squeezing", {"r1", "r1_db", "r2", "r2_db"});
    cfg.beam1 = read_beam(reader, sq, 1);
    cfg.beam2 = read_beam(reader, sq, 2);

    const json& eff = reader.object(doc, "efficiencies", "efficiencies");
    reader.reject_unknown(eff, "efficiencies", {"xi1_sq", "xi2_sq", "xi3_sq", "xi4_sq", "eta_sq"});
    cfg.efficiencies.xi1_sq = reader.intensity(eff, "efficiencies.xi1_sq", "xi1_sq");
    cfg.efficiencies.xi2_sq = reader.intensity(eff, "efficiencies.xi2_sq", "xi2_sq");
    cfg.efficiencies.xi3_sq = reader.intensity(eff, "efficiencies.xi3_sq", "xi3_sq");
    cfg.efficiencies.xi4_sq = reader.intensity(eff, "efficiencies.xi4_sq", "xi4_sq");
    cfg.efficiencies.eta_sq = reader.intensity(eff, "efficiencies.eta_sq", "eta_sq");

    cfg.mirror_R = reader.number(doc, "mirror_R", "mirror_R");
    if (!(cfg.mirror_R >= 0.0 && cfg.mirror_R <= 1.0)) reader.fail("mirror_R", "mirror_R", "must lie in [0, 1]");

    const json& gain = reader.object(doc, "gain", "gain");
    reader.reject_unknown(gain, "gain", {"mode", "value"});
    const auto mode = gain.find("mode");
    if (mode == gain.end() || !mode->is_string()) reader.fail("gain.mode", "mode", "expected \"optimal\" or \"fixed\"");
    if (*mode == "optimal") {
        if (gain.contains("value")) reader.fail("gain.value", "value", "not allowed with mode \"optimal\"");
        cfg.gain = GainSpec::optimal();
    } else if (*mode == "fixed") {
        const double v = reader.number(gain, "gain.value", "value");
        if (!(v >= 0.0)) reader.fail("gain.value", "value", "g_swap must be >= 0");
        cfg.gain = GainSpec::fixed(v);
    } else {
        reader.fail("gain.mode", "mode", fmt::format("expected \"optimal\" or \"fixed\", got {}", mode->dump()));
    }

    cfg.enl_db = reader.optional_number(doc, "enl_db", "enl_db");
    if (doc.contains("blocked")) {
        if (!doc["blocked"].is_boolean()) reader.fail("blocked", "blocked", "expected true or false");
        cfg.blocked = doc["blocked"].get<bool>();
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

json to_json(const Config& cfg) {
    json doc;
    const auto beam = [](const Squeezing& s, int index) {
        return std::pair{s.unit == Squeezing::Unit::r ? fmt::format("r{}", index) : fmt::format("r{}_db", index),
                         s.value};
    };
    const auto [k1, v1] = beam(cfg.beam1, 1);
    const auto [k2, v2] = beam(cfg.beam2, 2);
    doc["squeezing"] = {{k1, v1}, {k2, v2}};
    doc["efficiencies"] = {{"xi1_sq", cfg.efficiencies.xi1_sq}, {"xi2_sq", cfg.efficiencies.xi2_sq},
                           {"xi3_sq", cfg.efficiencies.xi3_sq}, {"xi4_sq", cfg.efficiencies.xi4_sq},
                           {"eta_sq", cfg.efficiencies.eta_sq}};
    doc["mirror_R"] = cfg.mirror_R;
    if (cfg.gain.is_optimal()) {
        doc["gain"] = {{"mode", "optimal"}};
    } else {
        doc["gain"] = {{"mode", "fixed"}, {"value", cfg.gain.value}};
    }
    if (cfg.enl_db) doc["enl_db"] = *cfg.enl_db;
    if (cfg.blocked) doc["blocked"] = *cfg.blocked;
    return doc;
}

std::string serialize(const Config& cfg) { return to_json(cfg).dump(2) + "\n"; }

json params_to_json(const ExperimentParams& p) {
    const auto eff = p.intensities();
    json out = {
        {"r1", p.r1},
        {"r2", p.r2},
        {"xi", {p.xi1, p.xi2, p.xi3, p.xi4}},
        {"xi_sq", {eff.xi1_sq, eff.xi2_sq, eff.xi3_sq, eff.xi4_sq}},
        {"eta", p.eta},
        {"eta_sq", eff.eta_sq},
        {"mirror_R", p.mirror_R},
        {"gain", p.gain.is_optimal() ? json{{"mode", "optimal"}} : json{{"mode", "fixed"}, {"value", p.gain.value}}},
        {"blocked", p.channel_blocked},
    };
    if (p.enl_db) out["enl_db"] = *p.enl_db;
    return out;
}

}  // namespace cvswap::config

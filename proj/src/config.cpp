#include "snowroad/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "snowroad/synthgen.hpp"

namespace snowroad {
namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename N>
N parse_number(std::string_view s) {
    N value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) config_error("not a valid number: '" + std::string(s) + "'");
    return value;
}

template <typename V>
V parse_value(std::string_view s);

template <>
bool parse_value<bool>(std::string_view s) {
    if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "off" || s == "0" || s == "no") return false;
    config_error("not a boolean: '" + std::string(s) + "'");
}

template <>
double parse_value<double>(std::string_view s) {
    const auto v = parse_number<double>(s);
    if (!std::isfinite(v)) config_error("not a finite number: '" + std::string(s) + "'");
    return v;
}

template <>
int parse_value<int>(std::string_view s) { return parse_number<int>(s); }

template <>
std::uint64_t parse_value<std::uint64_t>(std::string_view s) { return parse_number<std::uint64_t>(s); }

template <>
std::uint8_t parse_value<std::uint8_t>(std::string_view s) {
    const int v = parse_number<int>(s);
    if (v < 0 || v > 255) config_error("value out of 0-255 range: '" + std::string(s) + "'");
    return static_cast<std::uint8_t>(v);
}

template <>
std::array<double, 3> parse_value<std::array<double, 3>>(std::string_view s) {
    std::array<double, 3> out{};
    std::size_t n = 0;
    while (true) {
        s = trim(s);
        if (s.empty()) break;
        const auto cut = s.find_first_of(" \t,");
        if (n == 3) config_error("expected three numbers");
        out[n++] = parse_value<double>(s.substr(0, cut));
        if (cut == std::string_view::npos) break;
        s = s.substr(cut + 1);
    }
    if (n != 3) config_error("expected three numbers");
    return out;
}

std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(std::uint64_t v) { return std::to_string(v); }
std::string format_value(std::uint8_t v) { return std::to_string(static_cast<int>(v)); }
std::string format_value(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}
std::string format_value(const std::array<double, 3>& v) {
    return format_value(v[0]) + " " + format_value(v[1]) + " " + format_value(v[2]);
}

template <typename T>
struct Field {
    const char* key;
    std::function<void(T&, std::string_view)> set;
    std::function<std::string(const T&)> get;
};

// `access` is a generic lambda returning a reference into T.
template <typename T, typename Access>
Field<T> field(const char* key, Access access) {
    using V = std::remove_cvref_t<decltype(access(std::declval<T&>()))>;
    return {key, [access](T& t, std::string_view s) { access(t) = parse_value<V>(s); },
            [access](const T& t) { return format_value(access(t)); }};
}

#define SNOWROAD_FIELD(T, key, expr) field<T>(key, [](auto& c) -> auto& { return c.expr; })

const std::vector<Field<PipelineConfig>>& pipeline_fields() {
    using C = PipelineConfig;
    static const std::vector<Field<C>> fields = {
        SNOWROAD_FIELD(C, "rain_snow", rain_snow),
        SNOWROAD_FIELD(C, "rain_median_radius", rain_snow_params.median_radius),
        SNOWROAD_FIELD(C, "rain_streak_threshold", rain_snow_params.streak_threshold),
        SNOWROAD_FIELD(C, "rain_alpha", rain_snow_params.alpha),
        SNOWROAD_FIELD(C, "shadow", shadow),
        SNOWROAD_FIELD(C, "shadow_v_threshold", shadow_params.v_threshold),
        SNOWROAD_FIELD(C, "shadow_s_threshold", shadow_params.s_threshold),
        SNOWROAD_FIELD(C, "shadow_buffer_radius", shadow_params.buffer_radius),
        SNOWROAD_FIELD(C, "light_filter", light_filter),
        SNOWROAD_FIELD(C, "lambda_max", light_params.lambda_max),
        SNOWROAD_FIELD(C, "gaussian", gaussian),
        SNOWROAD_FIELD(C, "gaussian_sigma", gaussian_sigma),
        SNOWROAD_FIELD(C, "equalize", equalize),
        SNOWROAD_FIELD(C, "snow_s_max", snow.s_max),
        SNOWROAD_FIELD(C, "snow_v_min", snow.v_min),
        SNOWROAD_FIELD(C, "se_width", se.width),
        SNOWROAD_FIELD(C, "se_height", se.height),
        SNOWROAD_FIELD(C, "min_coverage", min_coverage),
        SNOWROAD_FIELD(C, "min_base_width_frac", min_base_width_frac),
    };
    return fields;
}

const std::vector<Field<SceneSpec>>& scene_fields() {
    using S = SceneSpec;
    static const std::vector<Field<S>> fields = {
        SNOWROAD_FIELD(S, "width", width),
        {"height", [](S& s, std::string_view v) {
             s.height = parse_value<int>(v);
             s.road.base_y = s.height - 1;
         },
         [](const S& s) { return format_value(s.height); }},
        SNOWROAD_FIELD(S, "apex_x", road.apex_x),
        SNOWROAD_FIELD(S, "apex_y", road.apex_y),
        SNOWROAD_FIELD(S, "base_left", road.base_left),
        SNOWROAD_FIELD(S, "base_right", road.base_right),
        SNOWROAD_FIELD(S, "curvature", curvature),
        SNOWROAD_FIELD(S, "snow_mean", snow.mean),
        SNOWROAD_FIELD(S, "snow_std", snow.stddev),
        SNOWROAD_FIELD(S, "foliage_mean", foliage.mean),
        SNOWROAD_FIELD(S, "foliage_std", foliage.stddev),
        SNOWROAD_FIELD(S, "speck_count", speck_count),
        SNOWROAD_FIELD(S, "speck_size", speck_size),
        SNOWROAD_FIELD(S, "streak_alpha", streak_alpha),
        SNOWROAD_FIELD(S, "streak_count", streak_count),
        SNOWROAD_FIELD(S, "streak_length", streak_length),
        SNOWROAD_FIELD(S, "apex_jitter_x", apex_jitter_x),
        SNOWROAD_FIELD(S, "apex_jitter_y", apex_jitter_y),
        SNOWROAD_FIELD(S, "base_jitter", base_jitter),
        SNOWROAD_FIELD(S, "seed", seed),
    };
    return fields;
}

#undef SNOWROAD_FIELD

template <typename T>
void set_field(const std::vector<Field<T>>& fields, T& target, std::string_view key, std::string_view value) {
    for (const auto& f : fields) {
        if (key == f.key) {
            f.set(target, trim(value));
            return;
        }
    }
    config_error("unknown key '" + std::string(key) + "'");
}

template <typename T>
T parse_text(const std::vector<Field<T>>& fields, std::string_view text) {
    T out{};
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) config_error(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (!seen.insert(std::string(key)).second) config_error(where + "duplicate key '" + std::string(key) + "'");
        try {
            set_field(fields, out, key, line.substr(eq + 1));
        } catch (const Error& e) {
            config_error(where + e.what());
        }
    }
    return out;
}

template <typename T>
KeyValues key_values(const std::vector<Field<T>>& fields, const T& target) {
    KeyValues out;
    for (const auto& f : fields) out.emplace_back(f.key, f.get(target));
    return out;
}

std::string to_text(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) fail(ErrorCode::FileNotFound, "no such file: " + path.string());
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void PipelineConfig::validate() const {
    auto bad = [](const std::string& why) { config_error("invalid pipeline config: " + why); };
    if (!(gaussian_sigma > 0.0)) bad("gaussian_sigma must be > 0");
    if (!(light_params.lambda_max > 1.0 / 3.0 && light_params.lambda_max <= 1.0)) bad("lambda_max must lie in (1/3, 1]");
    if (shadow_params.buffer_radius < 1) bad("shadow_buffer_radius must be >= 1");
    if (rain_snow_params.median_radius < 1) bad("rain_median_radius must be >= 1");
    if (!(rain_snow_params.alpha >= 0.0 && rain_snow_params.alpha <= 1.0)) bad("rain_alpha must lie in [0, 1]");
    if (se.width < 1 || se.height < 1 || se.width % 2 == 0 || se.height % 2 == 0) bad("se_width and se_height must be odd and >= 1");
    if (!(min_coverage >= 0.0 && min_coverage <= 1.0)) bad("min_coverage must lie in [0, 1]");
    if (!(min_base_width_frac >= 0.0 && min_base_width_frac <= 1.0)) bad("min_base_width_frac must lie in [0, 1]");
}

PipelineConfig parse_pipeline_config(std::string_view text) {
    auto cfg = parse_text(pipeline_fields(), text);
    cfg.validate();
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return parse_pipeline_config(read_text(path));
}

void set_option(PipelineConfig& cfg, std::string_view key, std::string_view value) {
    set_field(pipeline_fields(), cfg, trim(key), value);
}

KeyValues to_key_values(const PipelineConfig& cfg) { return key_values(pipeline_fields(), cfg); }

std::string serialize(const PipelineConfig& cfg) { return to_text(to_key_values(cfg)); }

SceneSpec parse_scene_spec(std::string_view text) {
    SceneSpec spec;
    try {
        spec = parse_text(scene_fields(), text);
    } catch (const Error& e) {
        fail(ErrorCode::InvalidSpec, e.what());
    }
    spec.validate();
    return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) { return parse_scene_spec(read_text(path)); }

void set_option(SceneSpec& spec, std::string_view key, std::string_view value) {
    try {
        set_field(scene_fields(), spec, trim(key), value);
    } catch (const Error& e) {
        fail(ErrorCode::InvalidSpec, e.what());
    }
}

KeyValues to_key_values(const SceneSpec& spec) { return key_values(scene_fields(), spec); }

std::string serialize(const SceneSpec& spec) { return to_text(to_key_values(spec)); }

}  // namespace snowroad

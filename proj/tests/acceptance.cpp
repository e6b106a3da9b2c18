// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "snowroad/colorspace.hpp"
#include "snowroad/evaluation.hpp"
#include "snowroad/filters.hpp"
#include "snowroad/pipeline.hpp"
#include "snowroad/segmentation.hpp"
#include "snowroad/synthgen.hpp"
#include "snowroad/vanishing.hpp"

using namespace snowroad;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool throws_code(const std::function<void()>& f, ErrorCode expected) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == expected;
    }
    return false;
}

BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
    std::bernoulli_distribution bit(density);
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) m.set(x, y, bit(rng));
    }
    return m;
}

RgbImage random_rgb(std::mt19937_64& rng, int w, int h) {
    RgbImage img(w, h);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

bool subset(const BinaryMask& a, const BinaryMask& b) { return (a - b).count() == 0; }

// ---------------------------------------------------------------------------

Outcome color_math() {
    std::size_t checked = 0, mismatches = 0;
    auto check = [&](int r, int g, int b) {
        ++checked;
        if (!(rgb_to_hsv_pixel(r, g, b) == oracle::hsv(r, g, b))) ++mismatches;
    };
    for (int r : {0, 255}) {
        for (int g : {0, 255}) {
            for (int b : {0, 255}) check(r, g, b);
        }
    }
    // Two channels tied at the maximum, third channel swept.
    std::mt19937_64 rng(101);
    for (int i = 0; i < 256; ++i) {
        const int hi = static_cast<int>(rng() % 256);
        const int lo = static_cast<int>(rng() % (hi + 1));
        check(hi, hi, lo);
        check(hi, lo, hi);
        check(lo, hi, hi);
    }
    for (int i = 0; i < 100000; ++i) {
        const auto v = rng();
        check(static_cast<int>(v & 0xFF), static_cast<int>((v >> 8) & 0xFF), static_cast<int>((v >> 16) & 0xFF));
    }
    // Whole-image path as well.
    const auto img = random_rgb(rng, 64, 48);
    const auto hsv = rgb_to_hsv(img);
    for (int y = 0; y < 48; ++y) {
        for (int x = 0; x < 64; ++x) {
            ++checked;
            const auto want = oracle::hsv(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
            if (hsv.at(x, y, 0) != want.h || hsv.at(x, y, 1) != want.s || hsv.at(x, y, 2) != want.v) ++mismatches;
        }
    }
    return {mismatches == 0, fmt("%.0f triples, %.0f mismatches", static_cast<double>(checked),
                                 static_cast<double>(mismatches))};
}

Outcome filter_goldens() {
    bool ok = true;
    std::string notes;

    RgbImage px(1, 1);
    px.at(0, 0, 0) = 150;
    px.at(0, 0, 1) = 100;
    px.at(0, 0, 2) = 50;
    const auto lf = light_filter(px, LightFilterParams{0.6});
    const bool light_ok = lf.at(0, 0, 0) == 113 && lf.at(0, 0, 1) == 63 && lf.at(0, 0, 2) == 13;
    ok = ok && light_ok;
    notes += fmt("light (%.0f,%.0f,%.0f)", lf.at(0, 0, 0), lf.at(0, 0, 1), lf.at(0, 0, 2));

    const bool rejects = throws_code([&] { light_filter(px, LightFilterParams{1.0 / 3.0}); }, ErrorCode::InvalidParameter);
    ok = ok && rejects;
    notes += rejects ? ", 1/3 rejected" : ", 1/3 NOT rejected";

    // Shadow pixels 60, 70, 50 inside a radius-1 ring on a 98/102
    // checkerboard: ring mean 100, standard deviation 2.
    RgbImage img(11, 11, 200);
    BinaryMask shadow(11, 11);
    const std::uint8_t shade[3] = {60, 70, 50};
    for (int i = 0; i < 3; ++i) {
        for (int c = 0; c < 3; ++c) img.at(4 + i, 5, c) = shade[i];
        shadow.set(4 + i, 5, true);
    }
    for (int y = 4; y <= 6; ++y) {
        for (int x = 3; x <= 7; ++x) {
            if (shadow.get(x, y)) continue;
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = (x + y) % 2 ? 98 : 102;
        }
    }
    ShadowParams sp;
    sp.buffer_radius = 1;
    const auto out = remove_shadow(img, shadow, sp);
    bool shadow_ok = true;
    for (int c = 0; c < 3; ++c) {
        shadow_ok = shadow_ok && out.at(4, 5, c) == 100 && out.at(5, 5, c) == 105 && out.at(6, 5, c) == 95;
    }
    ok = ok && shadow_ok;
    notes += fmt(", shadow 60->%.0f 70->%.0f 50->%.0f", out.at(4, 5, 0), out.at(5, 5, 0), out.at(6, 5, 0));
    return {ok, notes};
}

Outcome metrics_oracle() {
    std::mt19937_64 rng(303);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const auto pred = random_mask(rng, 64, 64, 0.1 + 0.004 * i);
        const auto truth = random_mask(rng, 64, 64, 0.9 - 0.004 * i);
        const auto c = confusion(pred, truth);
        const auto t = oracle::tally(pred, truth);
        const bool same = c == t && fnr(c) == oracle::rate(t.fn, t.tp + t.fn) && fpr(c) == oracle::rate(t.fp, t.fp + t.tn);
        if (!same) ++mismatches;
    }
    return {mismatches == 0, fmt("200 mask pairs, %.0f mismatches", mismatches)};
}

Outcome triangle_recovery() {
    std::mt19937_64 rng(7);
    int bad = 0;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        Triangle t;
        t.base_y = 95;
        t.apex_x = 20 + static_cast<double>(rng() % 88);
        t.apex_y = 2 + static_cast<double>(rng() % 60);
        t.base_left = static_cast<int>(rng() % 50);
        t.base_right = 78 + static_cast<int>(rng() % 50);
        const auto fit = fit_triangle(rasterize_triangle(t, 128, 96));
        const double d = std::max(std::abs(fit.apex_x - t.apex_x), std::abs(fit.apex_y - t.apex_y));
        worst = std::max(worst, d);
        if (d > 1.0) ++bad;
    }
    return {bad == 0, fmt("50 triangles, worst apex error %.2f px, %.0f outside +-1", worst, bad)};
}

// Writes the corpus to disk and scores it the way the eval command does.
MetricsReport score_corpus(const SceneSpec& base, int n, std::uint64_t seed, const fs::path& dir, int threads) {
    const auto corpus = generate_corpus(base, n, seed);
    write_corpus(corpus, base, seed, dir);
    return evaluate_corpus_dir(dir, PipelineConfig{}, threads);
}

double straight_fnr = -1;

Outcome straight_corpus(const fs::path& scratch) {
    const SceneSpec base;
    const auto a = score_corpus(base, 100, 42, scratch / "straight_a", 0);
    const auto b = score_corpus(base, 100, 42, scratch / "straight_b", 1);
    const bool deterministic = to_json(a) == to_json(b);
    straight_fnr = a.mean_fnr;
    const bool ok = a.mean_fnr <= 0.10 && a.mean_fpr <= 0.05 && deterministic;
    return {ok, fmt("mean FNR %.4f (<= 0.10), mean FPR %.4f (<= 0.05), ", a.mean_fnr, a.mean_fpr) +
                    (deterministic ? "repeat run identical" : "repeat run DIFFERS")};
}

Outcome curved_corpus(const fs::path& scratch) {
    SceneSpec base;
    base.curvature = 0.4;
    const auto r = score_corpus(base, 20, 42, scratch / "curved", 0);
    const bool ok = straight_fnr >= 0 && r.mean_fnr > straight_fnr;
    return {ok, fmt("curved mean FNR %.4f vs straight %.4f", r.mean_fnr, straight_fnr)};
}

// 8-connected components as lists of pixel indices.
std::vector<std::vector<int>> components(const BinaryMask& m) {
    const int w = m.width(), h = m.height();
    std::vector<int> label(static_cast<std::size_t>(w * h), -1);
    std::vector<std::vector<int>> out;
    for (int start = 0; start < w * h; ++start) {
        if (!m.get(start % w, start / w) || label[start] >= 0) continue;
        out.emplace_back();
        std::vector<int> stack{start};
        label[start] = static_cast<int>(out.size() - 1);
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            out.back().push_back(p);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = p % w + dx, y = p / w + dy;
                    if (x < 0 || y < 0 || x >= w || y >= h || !m.get(x, y)) continue;
                    if (label[y * w + x] >= 0) continue;
                    label[y * w + x] = label[start];
                    stack.push_back(y * w + x);
                }
            }
        }
    }
    return out;
}

// Components whose bounding box is smaller than the element in both
// directions and which keep more than the element radius of clearance from
// every other true pixel must vanish under open_close.
bool specks_removed(const BinaryMask& m, const StructuringElement& se, int& checked) {
    const auto cleaned = open_close(m, se);
    const int w = m.width(), h = m.height();
    const int reach = std::max(se.radius_x(), se.radius_y());
    for (const auto& comp : components(m)) {
        int x0 = w, x1 = -1, y0 = h, y1 = -1;
        for (int p : comp) {
            x0 = std::min(x0, p % w);
            x1 = std::max(x1, p % w);
            y0 = std::min(y0, p / w);
            y1 = std::max(y1, p / w);
        }
        if (x1 - x0 + 1 >= se.width || y1 - y0 + 1 >= se.height) continue;
        BinaryMask own(w, h);
        for (int p : comp) own.set(p % w, p / w, true);
        bool isolated = true;
        for (int p : comp) {
            for (int dy = -reach; dy <= reach && isolated; ++dy) {
                for (int dx = -reach; dx <= reach && isolated; ++dx) {
                    const int x = p % w + dx, y = p / w + dy;
                    if (m.get_or_false(x, y) && !own.get(x, y)) isolated = false;
                }
            }
        }
        if (!isolated) continue;
        ++checked;
        for (int p : comp) {
            if (cleaned.get(p % w, p / w)) return false;
        }
    }
    return true;
}

Outcome morphology() {
    std::mt19937_64 rng(707);
    const StructuringElement shapes[] = {{3, 3}, {5, 5}, {5, 3}};
    int failures = 0, specks = 0;
    for (int i = 0; i < 500; ++i) {
        const auto m = random_mask(rng, 32, 32, 0.05 + 0.9 * (i % 50) / 50.0);
        for (const auto& se : shapes) {
            const int rx = se.radius_x(), ry = se.radius_y();
            const auto e = erode(m, se), d = dilate(m, se), o = opening(m, se), c = closing(m, se);
            bool ok = e == oracle::erode(m, rx, ry) && d == oracle::dilate(m, rx, ry) &&
                      o == oracle::dilate(oracle::erode(m, rx, ry), rx, ry) && c == oracle::closing(m, rx, ry);
            // Duality away from the frame, where the background convention
            // cannot interfere.
            const auto dual = ~erode(~m, se);
            for (int y = ry; y < 32 - ry && ok; ++y) {
                for (int x = rx; x < 32 - rx && ok; ++x) ok = d.get(x, y) == dual.get(x, y);
            }
            ok = ok && subset(e, m) && subset(m, d) && subset(o, m) && subset(m, c);
            ok = ok && opening(o, se) == o && closing(c, se) == c;
            ok = ok && specks_removed(m, se, specks);
            if (!ok) ++failures;
        }
    }
    return {failures == 0 && specks > 0,
            fmt("500 masks x 3 elements, %.0f failures, %.0f isolated specks checked", failures, specks)};
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + SNOWROAD_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const fs::path& scratch) {
    std::vector<fs::path> runs;
    for (const char* name : {"run_a", "run_b"}) {
        const fs::path dir = scratch / name;
        fs::create_directories(dir);
        const std::string corpus = "\"" + (dir / "corpus").string() + "\"";
        if (run_cli("synth --out " + corpus + " --n 20 --seed 42", dir / "synth.log") != 0 ||
            run_cli("eval --corpus " + corpus + " --report \"" + (dir / "report.json").string() + "\" --csv \"" +
                        (dir / "report.csv").string() + "\"",
                    dir / "eval.log") != 0) {
            return {false, std::string("CLI failed in ") + name};
        }
        fs::remove(dir / "synth.log");
        fs::remove(dir / "eval.log");
        runs.push_back(dir);
    }
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(runs[0])) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), runs[0]);
        if (!fs::exists(runs[1] / rel) || slurp(entry.path()) != slurp(runs[1] / rel)) {
            return {false, "differs: " + rel.string()};
        }
        ++files;
    }
    std::size_t other = 0;
    for (const auto& entry : fs::recursive_directory_iterator(runs[1])) other += entry.is_regular_file();
    return {files == other && files >= 43, fmt("%.0f files byte-identical across two runs", static_cast<double>(files))};
}

Outcome stage_neutrality() {
    std::mt19937_64 rng(909);
    int failures = 0;
    for (int i = 0; i < 20; ++i) {
        const int w = 5 + static_cast<int>(rng() % 40), h = 5 + static_cast<int>(rng() % 40);
        const auto v = static_cast<std::uint8_t>(rng() & 0xFF);
        const double sigma = 0.3 + 0.2 * i;
        const GrayImage gray(w, h, v);
        if (!(gaussian_blur(gray, sigma) == gray)) ++failures;
        HsvImage hsv(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                hsv.at(x, y, 0) = static_cast<std::uint8_t>(v % 180);
                hsv.at(x, y, 1) = static_cast<std::uint8_t>(255 - v);
                hsv.at(x, y, 2) = v;
            }
        }
        if (!(gaussian_blur(hsv, sigma) == hsv)) ++failures;
    }
    for (int i = 0; i < 20; ++i) {
        const auto hsv = rgb_to_hsv(random_rgb(rng, 40, 30));
        const auto eq = equalize_value_channel(hsv);
        for (int y = 0; y < 30; ++y) {
            for (int x = 0; x < 40; ++x) {
                if (eq.at(x, y, 0) != hsv.at(x, y, 0) || eq.at(x, y, 1) != hsv.at(x, y, 1)) ++failures;
            }
        }
    }
    std::size_t outside = 0;
    for (int i = 0; i < 20; ++i) {
        // Smooth background with a few bright streaks, plus a fully random image.
        RgbImage img(48, 36);
        for (int y = 0; y < 36; ++y) {
            for (int x = 0; x < 48; ++x) {
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(60 + x + y + 10 * c);
            }
        }
        for (int s = 0; s < 4; ++s) {
            const int x0 = static_cast<int>(rng() % 44), y0 = static_cast<int>(rng() % 28);
            for (int k = 0; k < 8; ++k) {
                for (int c = 0; c < 3; ++c) img.at(x0 + k / 2, y0 + k, c) = 250;
            }
        }
        for (const auto& input : {img, random_rgb(rng, 30, 20)}) {
            const RainSnowParams p;
            const auto out = remove_rain_snow(input, p);
            const auto streaks = streak_mask(input, median_filter(input, p.median_radius), p.streak_threshold);
            for (int y = 0; y < input.height(); ++y) {
                for (int x = 0; x < input.width(); ++x) {
                    if (streaks.get(x, y)) continue;
                    ++outside;
                    for (int c = 0; c < 3; ++c) failures += out.at(x, y, c) != input.at(x, y, c);
                }
            }
        }
    }
    return {failures == 0,
            fmt("blur/equalize/rain fixtures, %.0f violations (%.0f off-streak pixels checked)", failures,
                static_cast<double>(outside))};
}

}  // namespace

int main() {
    const fs::path scratch = fs::temp_directory_path() / ("snowroad_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(scratch);

    struct Criterion {
        const char* name;
        double budget_s;  // 0 = no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"color-math oracle equivalence", 10, color_math},
        {"filter golden values", 0, filter_goldens},
        {"metrics oracle equivalence", 0, metrics_oracle},
        {"triangle-fit recovery", 30, triangle_recovery},
        {"straight-road corpus FNR/FPR", 120, [&] { return straight_corpus(scratch); }},
        {"curved-road limitation", 0, [&] { return curved_corpus(scratch); }},
        {"morphology properties", 0, morphology},
        {"synth + eval determinism", 0, [&] { return cli_determinism(scratch); }},
        {"stage neutrality", 0, stage_neutrality},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }

    std::error_code ec;
    fs::remove_all(scratch, ec);
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

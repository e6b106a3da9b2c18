// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 no road detected, 2 usage / config / I/O error.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "snowroad/snowroad.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoRoad = 1;
constexpr int kExitUsage = 2;

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using ImagePtr = std::unique_ptr<sr_image, Deleter<sr_image, sr_image_free>>;
using ConfigPtr = std::unique_ptr<sr_config, Deleter<sr_config, sr_config_free>>;
using SpecPtr = std::unique_ptr<sr_scene_spec, Deleter<sr_scene_spec, sr_scene_spec_free>>;
using ResultPtr = std::unique_ptr<sr_result, Deleter<sr_result, sr_result_free>>;

int report(sr_status status) {
    std::fprintf(stderr, "snowroad: %s: %s\n", sr_status_name(status), sr_last_error());
    return (status == SR_ERR_NO_ROAD_DETECTED || status == SR_ERR_DEGENERATE_BASE) ? kExitNoRoad : kExitUsage;
}

sr_status make_config(const std::string& path, ConfigPtr& out) {
    sr_config* raw = nullptr;
    const sr_status st = path.empty() ? sr_config_default(&raw) : sr_config_load(path.c_str(), &raw);
    out.reset(raw);
    return st;
}

int run_detect(const std::string& image_path, const std::string& config_path, const std::string& out_dir,
               bool dump_stages) {
    ConfigPtr config;
    if (auto st = make_config(config_path, config); st != SR_OK) return report(st);

    sr_image* raw_image = nullptr;
    if (auto st = sr_image_load(image_path.c_str(), &raw_image); st != SR_OK) return report(st);
    ImagePtr image(raw_image);

    sr_result* raw_result = nullptr;
    const std::uint32_t flags = dump_stages ? SR_DETECT_KEEP_STAGES : 0u;
    if (auto st = sr_detect(image.get(), config.get(), flags, &raw_result); st != SR_OK) return report(st);
    ResultPtr result(raw_result);

    if (auto st = sr_result_write(result.get(), out_dir.c_str()); st != SR_OK) return report(st);

    int32_t vx = 0, vy = 0;
    sr_result_vanishing_point(result.get(), &vx, &vy);
    std::printf("vanishing point (%d, %d), %lld road pixels -> %s\n", vx, vy,
                static_cast<long long>(sr_result_road_pixel_count(result.get())), out_dir.c_str());
    return kExitOk;
}

int run_eval(const std::string& corpus, const std::string& config_path, const std::string& report_path,
             const std::string& csv_path, int threads) {
    ConfigPtr config;
    if (auto st = make_config(config_path, config); st != SR_OK) return report(st);
    sr_metrics metrics{};
    const auto st = sr_eval_corpus(corpus.c_str(), config.get(), report_path.c_str(),
                                   csv_path.empty() ? nullptr : csv_path.c_str(), threads, &metrics);
    // Per-image detection failures land in the report, not here.
    if (st != SR_OK) return report(st);
    std::printf("%d images: mean FNR %.4f, mean FPR %.4f -> %s\n", metrics.image_count, metrics.mean_fnr,
                metrics.mean_fpr, report_path.c_str());
    return kExitOk;
}

int run_synth(const std::string& spec_path, const std::string& out_dir, int count, std::uint64_t seed,
              bool seed_given) {
    sr_scene_spec* raw = nullptr;
    const sr_status st = spec_path.empty() ? sr_scene_spec_default(&raw) : sr_scene_spec_load(spec_path.c_str(), &raw);
    SpecPtr spec(raw);
    if (st != SR_OK) return report(st);
    if (!seed_given) seed = sr_scene_spec_seed(spec.get());
    if (auto rc = sr_synth_corpus(spec.get(), out_dir.c_str(), count, seed); rc != SR_OK) return report(rc);
    std::printf("wrote %d scenes (seed %llu) to %s\n", count, static_cast<unsigned long long>(seed), out_dir.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Snow-covered road detection: filtering, snow classification and triangle-fit vanishing point"};
    app.require_subcommand(1);

    std::string image_path, config_path, out_dir = "snowroad_out";
    bool dump_stages = false;
    auto* detect = app.add_subcommand("detect", "Detect the road in one image");
    detect->add_option("image", image_path, "Input image (PPM or PNG)")->required();
    detect->add_option("--config", config_path, "Pipeline config file (key = value)");
    detect->add_option("--out", out_dir, "Output directory for overlay.ppm and result.json");
    detect->add_flag("--dump-stages", dump_stages, "Also write one image per pipeline stage");

    std::string corpus_dir, eval_config, report_path, csv_path;
    int threads = 0;
    auto* eval = app.add_subcommand("eval", "Run detection over a corpus and report FNR/FPR");
    eval->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    eval->add_option("--config", eval_config, "Pipeline config file");
    eval->add_option("--report", report_path, "JSON report path")->required();
    eval->add_option("--csv", csv_path, "Optional id,fnr,fpr table");
    eval->add_option("--threads", threads, "Worker threads (0 = all cores)");

    std::string spec_path, synth_out;
    int count = 20;
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic snowy-road corpus");
    synth->add_option("--spec", spec_path, "Scene spec file (defaults built in)");
    synth->add_option("--out", synth_out, "Corpus directory")->required();
    synth->add_option("--n", count, "Number of scenes")->check(CLI::PositiveNumber);
    auto* seed_opt = synth->add_option("--seed", seed, "Base seed (scene i uses seed + i)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*detect) return run_detect(image_path, config_path, out_dir, dump_stages);
    if (*eval) return run_eval(corpus_dir, eval_config, report_path, csv_path, threads);
    return run_synth(spec_path, synth_out, count, seed, seed_opt->count() > 0);
}

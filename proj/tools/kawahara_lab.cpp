#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "kawahara/errors.hpp"
#include "kawahara/lab/config.hpp"
#include "kawahara/lab/run.hpp"

namespace {

unsigned thread_count(int flag) {
    if (flag > 0) return static_cast<unsigned>(flag);
    if (const char* env = std::getenv("KAWAHARA_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
        std::fprintf(stderr, "ignoring KAWAHARA_LAB_THREADS='%s'\n", env);
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for the periodic Kawahara equation"};
    std::string kind, config_path, out_dir;
    int threads = 0;
    bool plots = false;
    app.add_option("kind", kind, "solve | verify-bilinear | counterexample | converge-pointwise | converge-uniform | "
                                 "truncate | strichartz-check")
        ->required();
    app.add_option("--config", config_path, "flat key = value file")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--threads", threads, "worker threads (default: $KAWAHARA_LAB_THREADS or 1)");
    app.add_flag("--plots", plots, "also write SVG plots");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    kawahara::lab::RunManifest manifest;
    try {
        const auto k = kawahara::lab::parse_kind(kind);
        const auto cfg = kawahara::lab::ExperimentConfig::load(config_path);
        manifest = kawahara::lab::run(k, cfg, out_dir, thread_count(threads), plots);
    } catch (const kawahara::InvalidParameters& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::printf("%s %s (%.2f s) -> %s\n", manifest.run_id.c_str(), manifest.completed ? "completed" : "failed",
                manifest.wall_time, out_dir.c_str());
    if (!manifest.completed) {
        std::fprintf(stderr, "run failed: %s\n", manifest.reason.c_str());
        return 2;
    }
    return 0;
}

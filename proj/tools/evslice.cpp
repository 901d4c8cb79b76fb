// Batch pipeline frontend: simulate / slice / augment / mga / metrics / inspect.
// Every subcommand accepts --config FILE (key=value, flags override the file)
// and prints its fully resolved configuration. Exit codes: 0 success,
// 1 usage error, 2 data error. Timing lines start with '#'.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evslice/augment.hpp"
#include "evslice/error.hpp"
#include "evslice/event_core.hpp"
#include "evslice/io_formats.hpp"
#include "evslice/metrics.hpp"
#include "evslice/mga.hpp"
#include "evslice/parallel.hpp"
#include "evslice/simulator.hpp"
#include "evslice/tcb_slicer.hpp"

namespace fs = std::filesystem;
using namespace evslice;

namespace {

std::string fmt(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_config(const CLI::App* sub) {
    std::istringstream dump(sub->config_to_str(true, false));
    std::string line;
    while (std::getline(dump, line))
        if (!line.empty())
            std::cout << "[config] " << line << "\n";
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// Applies --config FILE before the real parse: file pairs are injected as
// low-precedence arguments right after the subcommand name, so explicit
// flags override them (every option takes its last value).
void inject_config_args(std::vector<std::string>& args,
                        const std::vector<std::pair<std::string, CLI::App*>>& subs) {
    if (args.empty())
        return;
    CLI::App* sub = nullptr;
    for (const auto& [name, ptr] : subs)
        if (args[0] == name)
            sub = ptr;
    if (sub == nullptr)
        return;

    std::string file;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            file = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            file = args[i].substr(9);
    }
    if (file.empty())
        return;
    std::ifstream in(file);
    if (!in)
        throw CLI::FileError::Missing(file);

    std::set<std::string> valid;
    for (const CLI::Option* opt : sub->get_options())
        for (const std::string& n : opt->get_lnames())
            valid.insert(n);
    valid.erase("config");

    std::vector<std::string> injected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line.erase(comment);
        line = trimmed(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ConfigError(file + " line " + std::to_string(line_no) +
                                   ": expected key=value");
        const std::string key = trimmed(line.substr(0, eq));
        std::string value = trimmed(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (valid.count(key) == 0)
            throw CLI::ConfigError(file + " line " + std::to_string(line_no) +
                                   ": unknown key \"" + key + "\"");
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
    if (!fs::is_directory(dir))
        fail("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::uint64_t> read_timestamps(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open timestamps file " + path.string());
    std::vector<std::uint64_t> ts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        unsigned long long v = 0;
        auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc() || res.ptr != line.data() + line.size())
            fail(path.string() + " line " + std::to_string(line_no) +
                 ": bad timestamp \"" + line + "\"");
        ts.push_back(v);
    }
    return ts;
}

ThetaPolicy parse_theta(const std::string& text, int window_k, double theta_min,
                        double theta_max) {
    if (text == "adaptive")
        return ThetaPolicy::adaptive_median(window_k, theta_min, theta_max);
    if (text.rfind("fixed:", 0) == 0) {
        const std::string num = text.substr(6);
        double v = 0;
        auto res = std::from_chars(num.data(), num.data() + num.size(), v);
        if (res.ec == std::errc() && res.ptr == num.data() + num.size())
            return ThetaPolicy::fixed(v);
    }
    throw CLI::ValidationError("--theta", "expected \"adaptive\" or \"fixed:<value>\"");
}

RenderMode parse_mode(const std::string& text) {
    if (text == "binary")
        return RenderMode::binary();
    if (text.rfind("magnitude:", 0) == 0) {
        const std::string num = text.substr(10);
        int v = 0;
        auto res = std::from_chars(num.data(), num.data() + num.size(), v);
        if (res.ec == std::errc() && res.ptr == num.data() + num.size())
            return RenderMode::magnitude_scaled(v);
    }
    throw CLI::ValidationError("--mode", "expected \"binary\" or \"magnitude:<phi_max>\"");
}

std::vector<long long> parse_int_list(const std::string& text, std::size_t count,
                                      const std::string& flag) {
    std::vector<long long> vals;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string field = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        long long v = 0;
        auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc() || res.ptr != field.data() + field.size())
            throw CLI::ValidationError(flag, "bad integer \"" + field + "\"");
        vals.push_back(v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (vals.size() != count)
        throw CLI::ValidationError(flag, "expected " + std::to_string(count) +
                                             " comma-separated integers");
    return vals;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string frames_dir, timestamps, out;
    double contrast = 0.2;
    double eps = 1e-3;
    int jobs = 1;
};

void run_simulate(const SimulateArgs& a) {
    const std::vector<fs::path> files = list_pngs(a.frames_dir);
    if (files.size() < 2)
        fail("frames dir " + a.frames_dir + " holds " + std::to_string(files.size()) +
             " png files, need at least 2");
    const std::vector<std::uint64_t> ts = read_timestamps(a.timestamps);
    if (ts.size() != files.size())
        fail("timestamps file has " + std::to_string(ts.size()) + " entries for " +
             std::to_string(files.size()) + " frames");

    FrameSequence seq;
    seq.timestamps_us = ts;
    for (std::size_t i = 0; i < files.size(); ++i) {
        ImageU8 img = read_png(files[i]);
        if (i == 0) {
            seq.geometry = {img.width, img.height};
        } else if (img.width != seq.geometry.width || img.height != seq.geometry.height) {
            fail("frame " + files[i].string() + " is " + std::to_string(img.width) + "x" +
                 std::to_string(img.height) + ", expected " +
                 std::to_string(seq.geometry.width) + "x" +
                 std::to_string(seq.geometry.height));
        }
        seq.frames.push_back(luminance01(img));
    }

    SimulatorConfig cfg;
    cfg.contrast_threshold = a.contrast;
    cfg.intensity_floor = a.eps;
    cfg.geometry = seq.geometry;
    EventStream stream = simulate(seq, cfg, a.jobs);
    write_events(a.out, stream);
    std::cout << "events=" << stream.size() << "\n";
}

// ------------------------------------------------------------------- slice

struct SliceArgs {
    std::string in, out_dir;
    double fps = 30.0;
    double alpha = 0.1;
    std::string theta = "adaptive";
    int window_k = 16;
    double theta_min = 20.0, theta_max = 50.0;
    std::string mode = "binary";
    std::int64_t origin = -1; // <0: first event time
    int jobs = 1;
};

void run_slice(const SliceArgs& a) {
    TcbConfig cfg;
    cfg.slices_per_second = a.fps;
    cfg.alpha = a.alpha;
    cfg.theta = parse_theta(a.theta, a.window_k, a.theta_min, a.theta_max);
    const RenderMode mode = parse_mode(a.mode);

    EventStream stream = read_events(a.in);
    std::optional<std::uint64_t> origin;
    if (a.origin >= 0)
        origin = std::uint64_t(a.origin);
    SliceResult result = slice_stream(stream, cfg, origin);

    fs::create_directories(a.out_dir);
    for (std::size_t i = 0; i < result.slices.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "slice_%06zu.png", i);
        result.manifest.records[i].path = name;
    }
    // slices render to independent files; content does not depend on jobs
    std::vector<std::string> errors(result.slices.size());
    parallel_chunks(std::int64_t(result.slices.size()), a.jobs,
                    [&](std::int64_t lo, std::int64_t hi) {
                        for (std::int64_t i = lo; i < hi; ++i) {
                            try {
                                ImageU8 img = render_slice(result.slices[std::size_t(i)], mode);
                                write_png(fs::path(a.out_dir) /
                                              result.manifest.records[std::size_t(i)].path,
                                          img);
                            } catch (const std::exception& e) {
                                errors[std::size_t(i)] = e.what();
                            }
                        }
                    });
    for (const std::string& e : errors)
        if (!e.empty())
            fail(e);
    write_manifest_csv(fs::path(a.out_dir) / "manifest.csv", result.manifest);
    std::cout << "slices=" << result.slices.size() << "\n";
}

// ----------------------------------------------------------------- augment

struct AugmentArgs {
    std::string in, out;
    std::string translate; // "MAXDX,MAXDY"
    bool per_slice = false;
    std::string manifest;
    std::string image, image_out;
    std::string crop;           // "WxH"
    std::string protected_str;  // "x0,y0,w,h"
    std::uint64_t seed = 0;
    int jobs = 1;
};

void run_augment(const AugmentArgs& a) {
    bool did_anything = false;
    if (!a.translate.empty()) {
        if (a.in.empty() || a.out.empty())
            throw CLI::ValidationError("--translate", "needs --in and --out event files");
        const auto bounds = parse_int_list(a.translate, 2, "--translate");
        TranslationSpec spec;
        spec.max_dx = int(bounds[0]);
        spec.max_dy = int(bounds[1]);
        spec.per_slice = a.per_slice;
        spec.seed = a.seed;
        EventStream stream = read_events(a.in);
        SliceManifest manifest;
        if (a.per_slice) {
            if (a.manifest.empty())
                throw CLI::ValidationError("--per-slice", "needs --manifest");
            manifest = read_manifest_csv(a.manifest);
        }
        EventStream moved =
            translate_events(stream, spec, a.per_slice ? &manifest : nullptr);
        write_events(a.out, moved);
        std::cout << "events_in=" << stream.size() << " events_out=" << moved.size()
                  << " dropped=" << stream.size() - moved.size() << "\n";
        did_anything = true;
    }
    if (!a.crop.empty() || !a.image.empty()) {
        if (a.image.empty() || a.image_out.empty() || a.crop.empty() ||
            a.protected_str.empty())
            throw CLI::ValidationError(
                "--crop", "needs --image, --image-out, --crop WxH and --protected");
        std::size_t xpos = a.crop.find('x');
        if (xpos == std::string::npos)
            throw CLI::ValidationError("--crop", "expected WxH");
        const auto w = parse_int_list(a.crop.substr(0, xpos), 1, "--crop")[0];
        const auto h = parse_int_list(a.crop.substr(xpos + 1), 1, "--crop")[0];
        const auto pr = parse_int_list(a.protected_str, 4, "--protected");
        CropSpec spec;
        spec.out_w = int(w);
        spec.out_h = int(h);
        spec.protected_region = {int(pr[0]), int(pr[1]), int(pr[2]), int(pr[3])};
        spec.seed = a.seed;
        CropResult result = crop_reference(read_png(a.image), spec);
        write_png(a.image_out, result.image);
        std::cout << "applied_rect=" << result.applied.x0 << "," << result.applied.y0
                  << "," << result.applied.w << "," << result.applied.h << "\n";
        did_anything = true;
    }
    if (!did_anything)
        throw CLI::ValidationError("augment", "nothing to do: pass --translate or --crop");
}

// --------------------------------------------------------------------- mga

struct MgaArgs {
    std::string gen, event;
    double tau = 0.07;
    std::string kernel = "0.3,0.4,0.3";
    double norm_eps = 1e-8;
    std::string sbar_csv;
    int jobs = 1;
};

void run_mga(const MgaArgs& a) {
    MgaConfig cfg;
    cfg.tau = a.tau;
    cfg.norm_eps = a.norm_eps;
    {
        std::array<double, 3> k{};
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i) {
            std::size_t comma = a.kernel.find(',', start);
            if ((i < 2) != (comma != std::string::npos))
                throw CLI::ValidationError("--kernel", "expected w1,w2,w3");
            std::string field = a.kernel.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            auto res = std::from_chars(field.data(), field.data() + field.size(), k[i]);
            if (res.ec != std::errc() || res.ptr != field.data() + field.size())
                throw CLI::ValidationError("--kernel", "bad weight \"" + field + "\"");
            start = comma + 1;
        }
        cfg.kernel = k;
    }

    const LatentTensor5 gen = read_tensor(a.gen);
    const LatentTensor5 ev = read_tensor(a.event);
    if (gen.b != ev.b || gen.t != ev.t || gen.c != ev.c || gen.h != ev.h || gen.w != ev.w)
        fail("tensor dimensions differ between " + a.gen + " and " + a.event);

    const GradientTensor ggen =
        normalize_channels(temporal_gradient(gen, cfg.kernel), cfg.norm_eps);
    const GradientTensor gev =
        normalize_channels(temporal_gradient(ev, cfg.kernel), cfg.norm_eps);
    const MeanSimilarity sbar = mean_similarity(similarity(ggen, gev));
    const double loss = contrastive_loss(sbar, cfg.tau);

    if (!a.sbar_csv.empty()) {
        std::string out = "b,i,j,sbar\n";
        for (int b = 0; b < sbar.b; ++b)
            for (int i = 0; i < sbar.n; ++i)
                for (int j = 0; j < sbar.n; ++j)
                    out += std::to_string(b) + "," + std::to_string(i) + "," +
                           std::to_string(j) + "," + fmt(sbar.at(b, i, j)) + "\n";
        std::ofstream f(a.sbar_csv, std::ios::binary | std::ios::trunc);
        if (!f)
            fail("cannot open " + a.sbar_csv + " for writing");
        f << out;
        if (!f)
            fail("failed writing " + a.sbar_csv);
    }
    std::cout << "loss=" << fmt(loss) << "\n";
}

// ----------------------------------------------------------------- metrics

struct MetricsArgs {
    std::string ref_dir, cand_dir;
    std::string csv;
    bool buckets = false;
    int jobs = 1;
};

void score_bucket(const std::string& bucket, const fs::path& ref_dir,
                  const fs::path& cand_dir, int jobs, std::string& csv_rows) {
    const std::vector<fs::path> ref_files = list_pngs(ref_dir);
    const std::vector<fs::path> cand_files = list_pngs(cand_dir);
    if (ref_files.size() != cand_files.size())
        fail("bucket " + bucket + ": " + std::to_string(ref_files.size()) +
             " reference frames vs " + std::to_string(cand_files.size()) + " candidates");

    std::vector<ImageU8> ref, cand;
    ref.reserve(ref_files.size());
    cand.reserve(cand_files.size());
    for (std::size_t i = 0; i < ref_files.size(); ++i) {
        ref.push_back(read_png(ref_files[i]));
        cand.push_back(read_png(cand_files[i]));
    }
    const SequenceReport report = sequence_report(ref, cand, jobs);
    for (std::size_t i = 0; i < report.frames.size(); ++i) {
        // lpips/fid/is/fvd are reserved for external tools to merge
        csv_rows += bucket + "," + std::to_string(i) + "," +
                    ref_files[i].filename().string() + "," +
                    cand_files[i].filename().string() + "," +
                    fmt(report.frames[i].psnr_db) + "," + fmt(report.frames[i].ssim) +
                    ",,,,\n";
    }
    std::cout << "bucket=" << bucket << " frames=" << report.frames.size()
              << " mean_psnr_db=" << fmt(report.mean_psnr_db)
              << " mean_ssim=" << fmt(report.mean_ssim)
              << " psnr_excluded=" << report.psnr_excluded << "\n";
}

void run_metrics(const MetricsArgs& a) {
    std::string csv_rows = "bucket,index,ref,cand,psnr_db,ssim,lpips,fid,is,fvd\n";
    if (a.buckets) {
        std::vector<fs::path> sub;
        if (!fs::is_directory(a.ref_dir))
            fail("not a directory: " + a.ref_dir);
        for (const auto& entry : fs::directory_iterator(a.ref_dir))
            if (entry.is_directory())
                sub.push_back(entry.path());
        std::sort(sub.begin(), sub.end());
        if (sub.empty())
            fail("no bucket subdirectories under " + a.ref_dir);
        for (const fs::path& s : sub) {
            const fs::path cand = fs::path(a.cand_dir) / s.filename();
            if (!fs::is_directory(cand))
                fail("candidate bucket missing: " + cand.string());
            score_bucket(s.filename().string(), s, cand, a.jobs, csv_rows);
        }
    } else {
        score_bucket("all", a.ref_dir, a.cand_dir, a.jobs, csv_rows);
    }
    if (!a.csv.empty()) {
        std::ofstream f(a.csv, std::ios::binary | std::ios::trunc);
        if (!f)
            fail("cannot open " + a.csv + " for writing");
        f << csv_rows;
        if (!f)
            fail("failed writing " + a.csv);
    }
}

// ----------------------------------------------------------------- inspect

struct InspectArgs {
    std::string in;
    int bins = 20;
    int jobs = 1;
};

void run_inspect(const InspectArgs& a) {
    if (a.bins < 1)
        throw CLI::ValidationError("--bins", "must be >= 1");
    EventStream stream = read_events(a.in);
    StreamStats stats = stream_stats(stream);
    std::cout << "count=" << stats.count << "\n"
              << "duration_us=" << stats.duration_us << "\n"
              << "mean_rate_events_per_s=" << fmt(stats.mean_rate_events_per_s) << "\n"
              << "polarity_balance=" << fmt(stats.polarity_balance) << "\n"
              << "geometry=" << stream.geometry().width << "x"
              << stream.geometry().height << "\n";
    if (stream.empty())
        return;
    const std::uint64_t t0 = stream.events().front().t;
    const std::uint64_t t1 = stream.events().back().t;
    const std::uint64_t span = std::max<std::uint64_t>(1, t1 - t0);
    std::vector<std::uint64_t> hist(std::size_t(a.bins), 0);
    for (const Event& e : stream.events()) {
        std::size_t bin = std::size_t((__int128(e.t - t0) * a.bins) / span);
        if (bin >= hist.size())
            bin = hist.size() - 1;
        hist[bin]++;
    }
    for (std::size_t b = 0; b < hist.size(); ++b) {
        const std::uint64_t b0 = t0 + (span * b) / std::size_t(a.bins);
        const std::uint64_t b1 = t0 + (span * (b + 1)) / std::size_t(a.bins);
        std::cout << "bin=" << b << " t_start_us=" << b0 << " t_end_us=" << b1
                  << " count=" << hist[b] << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-stream slicing, simulation and evaluation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto make_sub = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        // last value wins, so config-file injections lose to explicit flags
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--config", config_path, "key=value config file; flags override it");
        return sub;
    };

    SimulateArgs sim;
    CLI::App* c_sim = make_sub("simulate", "frame dump -> event file");
    c_sim->add_option("--frames", sim.frames_dir, "directory of numbered PNG frames")
        ->required();
    c_sim->add_option("--timestamps", sim.timestamps, "file of microsecond timestamps")
        ->required();
    c_sim->add_option("--out", sim.out, "output .evst path")->required();
    c_sim->add_option("--contrast", sim.contrast, "log-intensity threshold C")
        ->capture_default_str();
    c_sim->add_option("--eps", sim.eps, "intensity floor added before log")
        ->capture_default_str();
    c_sim->add_option("--jobs", sim.jobs, "worker cap")->capture_default_str();

    SliceArgs slc;
    CLI::App* c_slice = make_sub("slice", "event file -> PNG slices + manifest");
    c_slice->add_option("--in", slc.in, "input .evst path")->required();
    c_slice->add_option("--out-dir", slc.out_dir, "output directory")->required();
    c_slice->add_option("--fps", slc.fps, "target slices per second F")
        ->capture_default_str();
    c_slice->add_option("--alpha", slc.alpha, "per-slice density ratio")
        ->capture_default_str();
    c_slice->add_option("--theta", slc.theta, "adaptive | fixed:<value>")
        ->capture_default_str();
    c_slice->add_option("--window-k", slc.window_k, "adaptive median window")
        ->capture_default_str();
    c_slice->add_option("--theta-min", slc.theta_min, "adaptive clamp lower bound")
        ->capture_default_str();
    c_slice->add_option("--theta-max", slc.theta_max, "adaptive clamp upper bound")
        ->capture_default_str();
    c_slice->add_option("--mode", slc.mode, "binary | magnitude:<phi_max>")
        ->capture_default_str();
    c_slice->add_option("--origin", slc.origin, "window origin in us (default: first event)")
        ->capture_default_str();
    c_slice->add_option("--jobs", slc.jobs, "worker cap")->capture_default_str();

    AugmentArgs aug;
    CLI::App* c_aug = make_sub("augment", "seeded event/reference augmentation");
    c_aug->add_option("--in", aug.in, "input .evst path");
    c_aug->add_option("--out", aug.out, "output .evst path");
    c_aug->add_option("--translate", aug.translate, "max shifts MAXDX,MAXDY");
    c_aug->add_flag("--per-slice", aug.per_slice, "one shift per manifest slice");
    c_aug->add_option("--manifest", aug.manifest, "manifest csv for --per-slice");
    c_aug->add_option("--image", aug.image, "reference image to crop");
    c_aug->add_option("--image-out", aug.image_out, "cropped image output");
    c_aug->add_option("--crop", aug.crop, "crop size WxH");
    c_aug->add_option("--protected", aug.protected_str, "protected rect x0,y0,w,h");
    c_aug->add_option("--seed", aug.seed, "rng seed")->capture_default_str();
    c_aug->add_option("--jobs", aug.jobs, "worker cap")->capture_default_str();

    MgaArgs mga;
    CLI::App* c_mga = make_sub("mga", "motion gradient alignment loss");
    c_mga->add_option("--gen", mga.gen, "generated-latent tensor file")->required();
    c_mga->add_option("--event", mga.event, "event-latent tensor file")->required();
    c_mga->add_option("--tau", mga.tau, "softmax temperature")->capture_default_str();
    c_mga->add_option("--kernel", mga.kernel, "gradient kernel w1,w2,w3")
        ->capture_default_str();
    c_mga->add_option("--norm-eps", mga.norm_eps, "channel-norm epsilon")
        ->capture_default_str();
    c_mga->add_option("--sbar-csv", mga.sbar_csv, "write spatially averaged similarity");
    c_mga->add_option("--jobs", mga.jobs, "worker cap")->capture_default_str();

    MetricsArgs met;
    CLI::App* c_met = make_sub("metrics", "frame-level psnr/ssim report");
    c_met->add_option("--ref", met.ref_dir, "reference frame directory")->required();
    c_met->add_option("--cand", met.cand_dir, "candidate frame directory")->required();
    c_met->add_option("--csv", met.csv, "per-frame csv output path");
    c_met->add_flag("--buckets", met.buckets, "score each subdirectory separately");
    c_met->add_option("--jobs", met.jobs, "worker cap")->capture_default_str();

    InspectArgs ins;
    CLI::App* c_ins = make_sub("inspect", "stream stats and density histogram");
    c_ins->add_option("--in", ins.in, "input .evst path")->required();
    c_ins->add_option("--bins", ins.bins, "histogram bins")->capture_default_str();
    c_ins->add_option("--jobs", ins.jobs, "worker cap")->capture_default_str();

    const std::vector<std::pair<std::string, CLI::App*>> subs = {
        {"simulate", c_sim}, {"slice", c_slice}, {"augment", c_aug},
        {"mga", c_mga},      {"metrics", c_met}, {"inspect", c_ins}};

    const auto start = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        inject_config_args(args, subs);
        std::reverse(args.begin(), args.end()); // CLI11 parses a reversed stack
        app.parse(args);
        CLI::App* sub = app.get_subcommands().front();
        print_config(sub);
        if (sub == c_sim)
            run_simulate(sim);
        else if (sub == c_slice)
            run_slice(slc);
        else if (sub == c_aug)
            run_augment(aug);
        else if (sub == c_mga)
            run_mga(mga);
        else if (sub == c_met)
            run_metrics(met);
        else
            run_inspect(ins);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::cout << "# elapsed_ms=" << elapsed.count() << "\n";
    return 0;
}

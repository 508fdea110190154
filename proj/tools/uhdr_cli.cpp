// Copyright (c) 2026 The uhdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uhdr/dataset.hpp"
#include "uhdr/encoding.hpp"
#include "uhdr/image_export.hpp"
#include "uhdr/isp.hpp"
#include "uhdr/metrics.hpp"
#include "uhdr/noise.hpp"
#include "uhdr/uraw.hpp"

namespace fs = std::filesystem;

namespace {

// Every failure class maps to its own exit status.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kBadMagic = 4,
    kBadVersion = 5,
    kTruncated = 6,
    kFormat = 7,
    kProfile = 8,
    kConfig = 9,
    kDimension = 10,
    kDomain = 11,
    kInternal = 12,
};

struct Options {
    // shared
    std::string profile;
    std::string config;
    std::string out;
    std::string input;
    uint64_t seed = 0;
    std::optional<int> stops;
    std::optional<double> sigma;
    std::optional<int> dims;
    std::optional<double> ratio_min;
    std::optional<double> ratio_max;

    // synth-dataset
    std::string src_dir;
    int workers = 1;
    std::optional<int> samples_per_image;
    bool force = false;

    // fuse
    int levels = 0;

    // ratio-map
    std::string lighted;
    std::string fused;
    double epsilon = uhdr::kRatioEpsilon;

    // add-noise
    std::string model = "physics";
    std::string ratio_map;
    std::string corrected_out;

    // encode
    double ratio = 100.0;
    std::optional<double> r_lo;
    std::optional<double> r_hi;
    std::string encoder = "gaussian";

    // render
    int bits = 8;

    // eval
    std::string pred_dir;
    std::string ref_dir;
    bool per_channel = false;
};

uhdr::CameraProfile load_profile(const Options& o) {
    return o.profile.empty() ? uhdr::CameraProfile{} : uhdr::read_profile(o.profile);
}

uhdr::EncodingSpec encoding_from(const Options& o, uhdr::EncodingSpec spec) {
    if (o.sigma) spec.sigma = *o.sigma;
    if (o.dims) spec.dims = *o.dims;
    if (o.r_lo) spec.r_lo = *o.r_lo;
    if (o.r_hi) spec.r_hi = *o.r_hi;
    uhdr::validate(spec);
    return spec;
}

int cmd_synth_dataset(const Options& o) {
    uhdr::SynthJob job;
    job.src_dir = o.src_dir;
    job.out_dir = o.out;
    job.profile = load_profile(o);
    job.config = o.config.empty() ? uhdr::SynthConfig{} : uhdr::read_synth_config(o.config);
    if (o.stops) job.config.fusion.n_stops = *o.stops;
    if (o.ratio_min) job.config.ratio_min = *o.ratio_min;
    if (o.ratio_max) job.config.ratio_max = *o.ratio_max;
    if (o.samples_per_image) job.config.samples_per_image = *o.samples_per_image;
    job.config.encoding = encoding_from(o, job.config.encoding);
    uhdr::validate(job.config);
    job.seed = o.seed;
    job.workers = o.workers;
    job.overwrite = o.force;

    const auto manifest = uhdr::synth_dataset(job);
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << manifest.samples.size() << " samples to " << o.out << "\n";
    return kOk;
}

int cmd_fuse(const Options& o) {
    uhdr::FusionParams params;
    if (o.stops) params.n_stops = *o.stops;
    params.levels = o.levels;
    const auto lighted = uhdr::read_packed(o.input);
    uhdr::write_uraw(uhdr::fuse_to_raw(lighted, load_profile(o), params), o.out);
    return kOk;
}

int cmd_ratio_map(const Options& o) {
    const auto lighted = uhdr::read_packed(o.lighted);
    const auto fused = uhdr::read_packed(o.fused);
    const auto s = uhdr::ratio_map(lighted, fused, o.epsilon);
    uhdr::write_uraw(uhdr::PackedRaw(s.values, lighted.meta), o.out);
    return kOk;
}

int cmd_add_noise(const Options& o) {
    const auto profile = load_profile(o);
    const auto lighted = uhdr::read_packed(o.input);
    uhdr::Rng rng(o.seed);
    auto sample = uhdr::sample_noise_params(profile, rng, uhdr::noise_model_from_string(o.model));
    sample.R = uhdr::sample_ratio(o.ratio_min.value_or(50.0), o.ratio_max.value_or(300.0), rng);
    sample.seed = o.seed;
    const auto noisy = uhdr::synthesize_noisy(lighted, sample, rng);
    uhdr::write_uraw(noisy, o.out);
    if (!o.ratio_map.empty()) {
        if (o.corrected_out.empty()) throw uhdr::ConfigError("--ratio-map needs --corrected-out");
        const uhdr::RatioMap s{uhdr::read_packed(o.ratio_map).planes};
        uhdr::write_uraw(uhdr::apply_ratio_correction(noisy, s), o.corrected_out);
    }
    std::cout << uhdr::to_json(sample).dump() << "\n";
    return kOk;
}

int cmd_encode(const Options& o) {
    const auto spec = encoding_from(o, {});
    const uhdr::RatioMap s{uhdr::read_packed(o.ratio_map).planes};
    const auto kind = uhdr::encoder_from_string(o.encoder);
    uhdr::EncodedRatio enc{uhdr::encode(uhdr::tile_ratio(s, o.ratio), spec, kind), spec, kind,
                           static_cast<float>(o.ratio)};
    uhdr::write_uenc(enc, o.out);
    return kOk;
}

int cmd_render(const Options& o) {
    const auto packed = uhdr::read_packed(o.input);
    uhdr::write_image(uhdr::render(packed, load_profile(o)), o.out, o.bits);
    return kOk;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int cmd_eval(const Options& o) {
    const auto profile = load_profile(o);
    const auto preds = uhdr::list_sources(o.pred_dir);
    if (!fs::is_directory(o.ref_dir)) throw uhdr::IoError("reference directory not found: " + o.ref_dir);

    std::string csv = "file,psnr,ssim,l1,weighted_l1,weighted_l1_eps0,align_scale\n";
    uhdr::MetricReport mean;
    mean.align_scale = 0.0;
    int n = 0;
    for (const auto& pred_path : preds) {
        const auto ref_path = fs::path(o.ref_dir) / pred_path.filename();
        if (!fs::exists(ref_path)) throw uhdr::IoError("no reference for " + pred_path.filename().string());
        const auto pred = uhdr::read_packed(pred_path);
        const auto ref = uhdr::read_packed(ref_path);
        const auto aligned = uhdr::exposure_align(pred.planes, ref.planes, o.per_channel);
        const uhdr::PackedRaw aligned_raw(aligned.aligned, pred.meta);
        const auto rgb_pred = uhdr::render(aligned_raw, profile);
        const auto rgb_ref = uhdr::render(ref, profile);

        uhdr::MetricReport r;
        r.psnr = uhdr::psnr(rgb_pred.planes, rgb_ref.planes);
        r.ssim = uhdr::ssim(rgb_pred.planes, rgb_ref.planes);
        r.l1 = uhdr::l1(aligned.aligned, ref.planes);
        r.weighted_l1 = uhdr::weighted_l1(ref.planes, aligned.aligned, 1e-2);
        r.weighted_l1_eps0 = uhdr::weighted_l1(ref.planes, aligned.aligned, 0.0);
        r.align_scale = aligned.scales.front();
        csv += pred_path.filename().string() + "," + fmt(r.psnr) + "," + fmt(r.ssim) + "," + fmt(r.l1) + "," +
               fmt(r.weighted_l1) + "," + fmt(r.weighted_l1_eps0) + "," + fmt(r.align_scale) + "\n";
        mean.psnr += r.psnr;
        mean.ssim += r.ssim;
        mean.l1 += r.l1;
        mean.weighted_l1 += r.weighted_l1;
        mean.weighted_l1_eps0 += r.weighted_l1_eps0;
        mean.align_scale += r.align_scale;
        ++n;
    }
    if (n > 0) {
        csv += "mean," + fmt(mean.psnr / n) + "," + fmt(mean.ssim / n) + "," + fmt(mean.l1 / n) + "," +
               fmt(mean.weighted_l1 / n) + "," + fmt(mean.weighted_l1_eps0 / n) + "," + fmt(mean.align_scale / n) + "\n";
    } else {
        std::cerr << "warning: no .uraw predictions in " << o.pred_dir << "\n";
    }
    if (o.out.empty()) {
        std::cout << csv;
    } else {
        uhdr::detail::write_file_text(o.out, csv);
    }
    return kOk;
}

int run_guarded(int (*cmd)(const Options&), const Options& o) {
    try {
        return cmd(o);
    } catch (const uhdr::BadMagicError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadMagic;
    } catch (const uhdr::VersionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadVersion;
    } catch (const uhdr::TruncatedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTruncated;
    } catch (const uhdr::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFormat;
    } catch (const uhdr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const uhdr::ProfileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kProfile;
    } catch (const uhdr::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const uhdr::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDimension;
    } catch (const uhdr::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uhdr: RAW-domain UHDR training-data synthesis and evaluation"};
    app.require_subcommand(1);
    Options o;
    int (*selected)(const Options&) = nullptr;

    auto add_profile = [&](CLI::App* sub) { sub->add_option("--profile", o.profile, "Camera profile (JSON)"); };

    auto* synth = app.add_subcommand("synth-dataset", "Synthesize paired training samples from clean URAW sources");
    synth->add_option("src_dir", o.src_dir, "Directory of clean .uraw sources")->required();
    add_profile(synth);
    synth->add_option("--config", o.config, "Synthesis config (JSON)");
    synth->add_option("--out", o.out, "Output dataset directory")->required();
    synth->add_option("--seed", o.seed, "Dataset seed");
    synth->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    synth->add_option("--stops", o.stops, "Exposure stops in the pseudo stack");
    synth->add_option("--sigma", o.sigma, "Encoding bandwidth");
    synth->add_option("--dims", o.dims, "Encoding dimensions");
    synth->add_option("--ratio-min", o.ratio_min, "Lower bound of the attenuation ratio");
    synth->add_option("--ratio-max", o.ratio_max, "Upper bound of the attenuation ratio");
    synth->add_option("--samples-per-image", o.samples_per_image, "Samples drawn per source");
    synth->add_flag("--force", o.force, "Replace an existing dataset in --out");
    synth->callback([&] { selected = cmd_synth_dataset; });

    auto* fuse = app.add_subcommand("fuse", "Fuse the pseudo exposure stack of a lighted image (I_L -> I_LF)");
    fuse->add_option("input", o.input, "Lighted image (.uraw)")->required();
    add_profile(fuse);
    fuse->add_option("--stops", o.stops, "Exposure stops");
    fuse->add_option("--levels", o.levels, "Pyramid levels (0 = automatic)");
    fuse->add_option("--out", o.out, "Output .uraw")->required();
    fuse->callback([&] { selected = cmd_fuse; });

    auto* ratio = app.add_subcommand("ratio-map", "Clean ratio map S = I_L / (I_LF + eps)");
    ratio->add_option("--lighted", o.lighted, "Lighted image I_L (.uraw)")->required();
    ratio->add_option("--fused", o.fused, "Fused image I_LF (.uraw)")->required();
    ratio->add_option("--epsilon", o.epsilon, "Stabilizer added to I_LF");
    ratio->add_option("--out", o.out, "Output .uraw")->required();
    ratio->callback([&] { selected = cmd_ratio_map; });

    auto* noise = app.add_subcommand("add-noise", "Synthesize the noisy amplified input I_NL");
    noise->add_option("input", o.input, "Lighted image I_L (.uraw)")->required();
    add_profile(noise);
    noise->add_option("--seed", o.seed, "Noise seed");
    noise->add_option("--ratio-min", o.ratio_min, "Lower bound of the attenuation ratio");
    noise->add_option("--ratio-max", o.ratio_max, "Upper bound of the attenuation ratio");
    noise->add_option("--model", o.model, "physics | pg");
    noise->add_option("--ratio-map", o.ratio_map, "Ratio map used for exposure correction");
    noise->add_option("--corrected-out", o.corrected_out, "Output for the corrected image I_N");
    noise->add_option("--out", o.out, "Output .uraw")->required();
    noise->callback([&] { selected = cmd_add_noise; });

    auto* enc = app.add_subcommand("encode", "Encode r = R / S of a ratio map");
    enc->add_option("--ratio-map", o.ratio_map, "Ratio map (.uraw)")->required();
    enc->add_option("--ratio", o.ratio, "Amplification ratio R");
    enc->add_option("--sigma", o.sigma, "Encoding bandwidth");
    enc->add_option("--dims", o.dims, "Encoding dimensions");
    enc->add_option("--r-lo", o.r_lo, "Lower bound of the ratio grid");
    enc->add_option("--r-hi", o.r_hi, "Upper bound of the ratio grid");
    enc->add_option("--encoder", o.encoder, "gaussian | onehot | positional");
    enc->add_option("--out", o.out, "Output .uenc")->required();
    enc->callback([&] { selected = cmd_encode; });

    auto* render = app.add_subcommand("render", "Render a URAW image to PNG or PPM");
    render->add_option("input", o.input, "Image (.uraw)")->required();
    add_profile(render);
    render->add_option("--bits", o.bits, "8 or 16")->check(CLI::IsMember({8, 16}));
    render->add_option("--out", o.out, "Output .png or .ppm")->required();
    render->callback([&] { selected = cmd_render; });

    auto* eval = app.add_subcommand("eval", "Exposure-aligned PSNR/SSIM/L1 of predictions against references");
    eval->add_option("pred_dir", o.pred_dir, "Directory of predicted .uraw")->required();
    eval->add_option("ref_dir", o.ref_dir, "Directory of reference .uraw with matching names")->required();
    add_profile(eval);
    eval->add_flag("--per-channel", o.per_channel, "Align each packed channel separately");
    eval->add_option("--out", o.out, "CSV output (stdout when omitted)");
    eval->callback([&] { selected = cmd_eval; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    return run_guarded(selected, o);
}

/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pat/backward.hpp"
#include "pat/config.hpp"
#include "pat/io.hpp"
#include "pat/metrics.hpp"
#include "pat/phantom.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "Configuration file (defaults apply when omitted)");
    cmd->add_option("--out", o.out_dir, "Output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "Seed for synthetic noise");
    cmd->add_flag("--quiet", o.quiet, "Suppress informational output");
}

pat::ConfigFile load_config(const CommonOpts& o) {
    pat::ConfigFile cf = o.config_path.empty() ? pat::parse_config("")
                                               : pat::load_config_file(o.config_path);
    if (!o.quiet)
        for (const std::string& w : cf.warnings)
            std::cerr << "warning: " << w << "\n";
    return cf;
}

fs::path ensure_out(const CommonOpts& o, const char* subcommand) {
    if (o.out_dir.empty())
        pat::fail(pat::Errc::InvalidArgument,
                  std::string(subcommand) + " needs --out");
    fs::path p(o.out_dir);
    fs::create_directories(p);
    return p;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

/// One metadata record per run: enough to reproduce the invocation and
/// match outputs to the exact config bytes. Deliberately no timestamps,
/// so identical runs produce identical files.
void write_metadata(const fs::path& out, const std::string& subcommand,
                    const CommonOpts& o, const pat::ConfigFile& cf,
                    const json& extra) {
    json meta;
    meta["subcommand"] = subcommand;
    meta["config_path"] = o.config_path;
    meta["config_hash"] = hash_hex(cf.hash);
    meta["defaults_version"] = pat::kConfigDefaultsVersion;
    meta["padf_version"] = pat::kPadfVersion;
    meta["mode"] = pat::run_mode_name(cf.run.mode);
    meta["seed"] = o.seed;
    meta["warnings"] = cf.warnings;
    meta.update(extra);
    pat::atomic_write_file((out / "run.json").string(), meta.dump(2) + "\n");
}

pat::Mat<double> to_double(const pat::Mat<std::int32_t>& m) {
    pat::Mat<double> out(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.size(); ++k)
        out.data()[k] = double(m.data()[k]);
    return out;
}

/// Images travel as lossless CSV or as a PADF f64 payload; the
/// extension decides.
pat::Mat<double> load_image_matrix(const std::string& path) {
    if (fs::path(path).extension() == ".padf")
        return pat::padf_as_f64(pat::read_padf(path));
    return pat::read_csv_matrix(path);
}

void write_normalized_outputs(const fs::path& out, const pat::Image& image) {
    pat::write_csv((out / "image.csv").string(), image.pixels);
    pat::write_pgm((out / "image.pgm").string(), image);
}

void write_trace_csv(const fs::path& path, const std::vector<double>& trace) {
    std::string bytes = "iteration,loss\n";
    char buf[48];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, trace[i]);
        bytes += buf;
    }
    pat::atomic_write_file(path.string(), bytes);
}

void write_jsonl(const fs::path& path, const std::vector<json>& records) {
    std::string bytes;
    for (const json& r : records)
        bytes += r.dump() + "\n";
    pat::atomic_write_file(path.string(), bytes);
}

json cycles_record(const pat::CycleReport& c) {
    return json{{"record", "cycles"},
                {"das", c.cycles_das},
                {"swave", c.cycles_swave},
                {"deviation", c.cycles_deviation},
                {"loss", c.cycles_loss},
                {"total", c.total_cycles},
                {"iterations", c.iterations_run},
                {"fps_at_200mhz", c.fps_at_clock(200.0e6)}};
}

json table_overflow_record(const pat::HwTables& t) {
    return json{{"record", "table_overflow"},
                {"delay", t.delay_overflow},
                {"phase", t.phase_overflow},
                {"amplitude", t.amplitude_overflow}};
}

void check_input_shape(const pat::SensorData& data, const pat::RunConfig& cfg,
                       bool quiet) {
    if (int(data.num_sensors()) != cfg.geometry.num_sensors)
        pat::fail(pat::Errc::DimensionMismatch,
                  "input has " + std::to_string(data.num_sensors()) +
                      " channels but the config expects " +
                      std::to_string(cfg.geometry.num_sensors));
    if (int(data.sample_depth()) != cfg.acoustic.sample_depth)
        pat::fail(pat::Errc::DimensionMismatch,
                  "input has " + std::to_string(data.sample_depth()) +
                      " samples per channel but the config expects " +
                      std::to_string(cfg.acoustic.sample_depth));
    const double fs = cfg.acoustic.sample_rate;
    if (!quiet && std::abs(data.sample_rate - fs) > 1e-6 * fs)
        std::cerr << "warning: input sample rate " << data.sample_rate
                  << " differs from the configured " << fs
                  << "; the configured rate drives the tables\n";
}

int run_gen_phantom(const CommonOpts& o, bool oracle, bool emit_config) {
    if (emit_config) {
        std::cout << pat::default_config_text();
        return 0;
    }
    const pat::ConfigFile cf = load_config(o);
    const pat::RunConfig& cfg = cf.run;
    const fs::path out = ensure_out(o, "gen-phantom");

    const pat::Image img = pat::gen_phantom(cfg.phantom, cfg.grid);
    const std::vector<double> wave = pat::make_waveform(cfg);
    pat::SensorData data =
        oracle ? pat::oracle_forward(cfg.phantom, cfg.geometry, cfg.acoustic,
                                     cfg.swave, wave)
               : pat::swave_forward(img.pixels, cfg.geometry, cfg.grid,
                                    cfg.acoustic, cfg.swave, wave);
    if (cfg.phantom.noise_sigma)
        pat::add_noise(data, *cfg.phantom.noise_sigma, o.seed);

    pat::write_csv((out / "phantom.csv").string(), img.pixels);
    pat::write_pgm((out / "phantom.pgm").string(),
                   pat::normalize_image(img.pixels));
    pat::write_padf((out / "data.padf").string(), data.samples,
                    cfg.acoustic.sample_rate);

    write_metadata(out, "gen-phantom", o, cf,
                   json{{"oracle", oracle},
                        {"targets", cfg.phantom.targets.size()},
                        {"outputs", {"phantom.csv", "phantom.pgm", "data.padf"}}});
    if (!o.quiet)
        std::cout << "wrote " << cfg.grid.n << "x" << cfg.grid.m << " phantom ("
                  << cfg.phantom.targets.size() << " targets) and "
                  << data.num_sensors() << "x" << data.sample_depth()
                  << " channel data to " << out.string() << "\n";
    return 0;
}

int run_forward(const CommonOpts& o, const std::string& input) {
    const pat::ConfigFile cf = load_config(o);
    const pat::RunConfig& cfg = cf.run;
    const fs::path out = ensure_out(o, "forward");

    const pat::Mat<double> img = load_image_matrix(input);
    if (int(img.rows()) != cfg.grid.n || int(img.cols()) != cfg.grid.m)
        pat::fail(pat::Errc::DimensionMismatch,
                  "image is " + std::to_string(img.rows()) + "x" +
                      std::to_string(img.cols()) + " but the grid is " +
                      std::to_string(cfg.grid.n) + "x" +
                      std::to_string(cfg.grid.m));

    pat::SensorData data =
        pat::swave_forward(img, cfg.geometry, cfg.grid, cfg.acoustic, cfg.swave,
                           pat::make_waveform(cfg));
    if (cfg.phantom.noise_sigma)
        pat::add_noise(data, *cfg.phantom.noise_sigma, o.seed);
    pat::write_padf((out / "data.padf").string(), data.samples,
                    cfg.acoustic.sample_rate);

    write_metadata(out, "forward", o, cf,
                   json{{"input", input}, {"outputs", {"data.padf"}}});
    if (!o.quiet)
        std::cout << "wrote " << data.num_sensors() << "x" << data.sample_depth()
                  << " channel data to " << out.string() << "\n";
    return 0;
}

int run_reconstruct(const CommonOpts& o, const std::string& input,
                    const std::string& algo, const std::string& mode_flag) {
    const pat::ConfigFile cf = load_config(o);
    const pat::RunConfig& cfg = cf.run;
    const fs::path out = ensure_out(o, "reconstruct");

    pat::RunMode mode = cfg.mode;
    if (!mode_flag.empty())
        mode = mode_flag == "hardware" ? pat::RunMode::Hardware
                                       : pat::RunMode::Reference;

    const pat::SensorData data = pat::load_sensor_data(input);
    check_input_shape(data, cfg, o.quiet);

    json result;
    std::vector<std::string> outputs = {"image.csv", "image.pgm"};

    if (mode == pat::RunMode::Reference) {
        if (algo == "model-based") {
            pat::ReconConfig rc = cfg.recon;
            rc.record_trace = true;
            const pat::ReconResult res = pat::model_based_reconstruct(
                data, cfg.geometry, cfg.grid, cfg.acoustic, cfg.swave,
                pat::make_waveform(cfg), rc);
            write_normalized_outputs(out,
                                     pat::normalize_image(res.rendered.pixels));
            write_trace_csv(out / "trace.csv", res.loss_trace);
            outputs.push_back("trace.csv");
            result = {{"iterations", res.iterations_run},
                      {"converged", res.converged},
                      {"final_loss", res.final_loss},
                      {"threshold", res.threshold}};
        } else {
            // The float path carries delays at full precision; the
            // narrow table width belongs to the hardware model.
            const pat::DelayTable table = pat::compute_delay_table(
                cfg.geometry, cfg.grid, cfg.acoustic, 31);
            pat::Mat<double> raw;
            if (algo == "das")
                raw = pat::das(data, table, cfg.grid);
            else if (algo == "dmas")
                raw = pat::dmas(data, table, cfg.grid);
            else
                raw = pat::das_cf(data, table, cfg.grid);
            write_normalized_outputs(out, pat::normalize_image(raw));
        }
    } else {
        if (algo != "das" && algo != "model-based")
            pat::fail(pat::Errc::InvalidArgument,
                      "algo '" + algo +
                          "' has no hardware datapath; hardware mode supports "
                          "das and model-based");
        const pat::HwTables tables =
            pat::quantize_tables(cfg.geometry, cfg.grid, cfg.acoustic, cfg.swave,
                                 cfg.fold, cfg.fixed_point);
        const pat::ExecSchedule sched = pat::make_schedule(cfg);
        std::vector<json> report;

        if (algo == "das") {
            const pat::QuantizedSensorData q =
                pat::quantize_sensor_data(data, cfg.fixed_point.sample_bits);
            const pat::HwDasResult r = pat::hw_das(q.samples, tables, sched);
            pat::Image im;
            im.pixels = to_double(r.image);
            im.value_range = std::make_pair(0.0, 256.0);
            write_normalized_outputs(out, im);
            report.push_back(json{{"record", "das"},
                                  {"max_abs", r.max_abs},
                                  {"steps", r.steps},
                                  {"input_scale", q.scale}});
            result = {{"max_abs", r.max_abs}};
        } else {
            pat::HwIterateConfig hc;
            hc.learning_rate = cfg.recon.learning_rate;
            hc.max_iterations = cfg.recon.max_iterations;
            hc.loss_threshold_rel = cfg.recon.loss_threshold_rel;
            hc.loss_threshold_abs = cfg.recon.loss_threshold_abs;
            hc.record_trace = true;
            hc.normalize_each_das = cfg.normalize_each_das;
            const pat::HwIterateResult res = pat::hw_model_based(
                data, tables, sched, pat::make_waveform(cfg), hc);
            pat::Image im;
            im.pixels = to_double(res.image);
            im.value_range = std::make_pair(0.0, 256.0);
            write_normalized_outputs(out, im);
            write_trace_csv(out / "trace.csv", res.loss_trace);
            outputs.push_back("trace.csv");
            report.push_back(cycles_record(res.cycles));
            report.push_back(json{{"record", "steps"},
                                  {"das_calls", res.counts.das_calls},
                                  {"das", res.counts.das_steps},
                                  {"swave_calls", res.counts.swave_calls},
                                  {"swave", res.counts.swave_steps},
                                  {"deviation", res.counts.deviation_steps},
                                  {"loss", res.counts.loss_steps},
                                  {"norm", res.counts.norm_steps}});
            report.push_back(json{{"record", "saturation"},
                                  {"count", res.saturation_count}});
            result = {{"iterations", res.iterations_run},
                      {"converged", res.converged},
                      {"final_loss", res.final_loss},
                      {"lr_numerator", res.lr_numerator},
                      {"total_cycles", res.cycles.total_cycles}};
        }
        report.push_back(table_overflow_record(tables));
        write_jsonl(out / "report.jsonl", report);
        outputs.push_back("report.jsonl");
    }

    write_metadata(out, "reconstruct", o, cf,
                   json{{"algo", algo},
                        {"mode", mode == pat::RunMode::Hardware ? "hardware"
                                                                : "reference"},
                        {"input", input},
                        {"outputs", outputs},
                        {"result", result}});
    if (!o.quiet)
        std::cout << "reconstructed " << cfg.grid.n << "x" << cfg.grid.m << " ("
                  << algo << ", "
                  << (mode == pat::RunMode::Hardware ? "hardware" : "reference")
                  << ") into " << out.string() << "\n";
    return 0;
}

int run_compare(const CommonOpts& o, const std::string& a_path,
                const std::string& b_path, bool want_error_map) {
    const pat::ConfigFile cf = load_config(o);
    const pat::Mat<double> a = load_image_matrix(a_path);
    const pat::Mat<double> b = load_image_matrix(b_path);

    const double s = pat::ssim(a, b);
    const double m = pat::mse(a, b);
    std::printf("ssim = %.17g\n", s);
    std::printf("mse = %.17g\n", m);

    if (want_error_map || !o.out_dir.empty()) {
        const fs::path out = ensure_out(o, "compare");
        std::vector<std::string> outputs = {"metrics.jsonl"};
        write_jsonl(out / "metrics.jsonl",
                    {json{{"record", "compare"},
                          {"a", a_path},
                          {"b", b_path},
                          {"ssim", s},
                          {"mse", m}}});
        if (want_error_map) {
            const pat::Mat<double> em = pat::error_map(a, b);
            pat::write_csv((out / "error_map.csv").string(), em);
            pat::write_pgm((out / "error_map.pgm").string(),
                           pat::normalize_image(em));
            outputs.push_back("error_map.csv");
            outputs.push_back("error_map.pgm");
        }
        write_metadata(out, "compare", o, cf,
                       json{{"a", a_path}, {"b", b_path}, {"outputs", outputs}});
    }
    return 0;
}

int run_budget(const CommonOpts& o) {
    const pat::ConfigFile cf = load_config(o);
    const pat::RunConfig& cfg = cf.run;
    const pat::FixedPointSpec& sp = cfg.fixed_point;

    std::printf("storage budget: N=%d grid=%dx%d widths delay=%d phase=%d amplitude=%d\n",
                cfg.geometry.num_sensors, cfg.grid.n, cfg.grid.m, sp.delay_bits,
                sp.phase_bits, sp.amplitude_bits);
    std::vector<json> rows;
    for (pat::FoldKind fold : {pat::FoldKind::None, pat::FoldKind::Half,
                               pat::FoldKind::Quarter, pat::FoldKind::Octant}) {
        try {
            const pat::StorageBudget b = pat::storage_budget(
                cfg.geometry.num_sensors, cfg.grid.n, cfg.grid.m, sp.delay_bits,
                sp.phase_bits, sp.amplitude_bits, fold);
            std::printf("[budget] fold=%s stored=%d delay_bits=%" PRIu64
                        " phase_bits=%" PRIu64 " amplitude_bits=%" PRIu64
                        " total_bits=%" PRIu64 " total_megabits=%.2f ratio=%.4f\n",
                        pat::fold_name(fold), b.stored_sensor_count, b.delay_bits,
                        b.phase_bits, b.amplitude_bits, b.total_bits,
                        pat::bits_to_megabits(b.total_bits), b.savings_ratio);
            rows.push_back(json{{"fold", pat::fold_name(fold)},
                                {"stored", b.stored_sensor_count},
                                {"delay_bits", b.delay_bits},
                                {"phase_bits", b.phase_bits},
                                {"amplitude_bits", b.amplitude_bits},
                                {"total_bits", b.total_bits},
                                {"total_megabits", pat::bits_to_megabits(b.total_bits)},
                                {"ratio", b.savings_ratio}});
        } catch (const pat::Error& e) {
            std::printf("[budget] fold=%s unsupported (%s)\n",
                        pat::fold_name(fold), e.what());
        }
    }
    if (!o.out_dir.empty()) {
        const fs::path out = ensure_out(o, "budget");
        pat::atomic_write_file((out / "budget.json").string(),
                               json(rows).dump(2) + "\n");
        write_metadata(out, "budget", o, cf, json{{"outputs", {"budget.json"}}});
    }
    return 0;
}

int run_bench(const CommonOpts& o, double clock_mhz, int max_iterations) {
    const pat::ConfigFile cf = load_config(o);
    const pat::RunConfig& cfg = cf.run;

    const pat::HwTables tables =
        pat::quantize_tables(cfg.geometry, cfg.grid, cfg.acoustic, cfg.swave,
                             cfg.fold, cfg.fixed_point);
    const pat::ExecSchedule sched = pat::make_schedule(cfg);
    const pat::QuantizedSeries wq =
        pat::quantize_waveform(pat::make_waveform(cfg), cfg.fixed_point.sample_bits);

    // Synthetic full-scale codes; bench measures the engine, not a scene.
    const std::int32_t full = (std::int32_t(1) << (cfg.fixed_point.sample_bits - 1)) - 1;
    std::mt19937_64 gen(o.seed);
    pat::Mat<std::int32_t> codes(std::size_t(cfg.geometry.num_sensors),
                                 std::size_t(cfg.acoustic.sample_depth));
    for (std::size_t k = 0; k < codes.size(); ++k)
        codes.data()[k] = std::int32_t(gen() % (2 * std::uint64_t(full) + 1)) - full;

    const auto t0 = std::chrono::steady_clock::now();
    const pat::HwDasResult das = pat::hw_das(codes, tables, sched);
    const auto t1 = std::chrono::steady_clock::now();
    const double das_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::printf("[time] hw_das ms=%.3f steps=%" PRIu64 "\n", das_ms, das.steps);

    pat::Mat<std::int32_t> image = das.image;
    const auto t2 = std::chrono::steady_clock::now();
    const pat::HwSwaveResult sw = pat::hw_swave(image, tables, sched, wq);
    const auto t3 = std::chrono::steady_clock::now();
    const double sw_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
    std::printf("[time] hw_swave ms=%.3f steps=%" PRIu64 "\n", sw_ms, sw.steps);

    std::string csv = "iterations,das,swave,deviation,loss,total,fps\n";
    char buf[192];
    for (int k = 1; k <= max_iterations; ++k) {
        const pat::CycleReport cr = pat::cycle_model(
            cfg.grid.n, cfg.grid.m, cfg.geometry.num_sensors, sched.lanes,
            std::size_t(cfg.acoustic.sample_depth), wq.active_len(), k);
        const double fps = cr.fps_at_clock(clock_mhz * 1.0e6);
        std::printf("[bench] iterations=%d total_cycles=%" PRIu64 " fps_at_%.0fmhz=%.2f\n",
                    k, cr.total_cycles, clock_mhz, fps);
        std::snprintf(buf, sizeof(buf),
                      "%d,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
                      ",%" PRIu64 ",%.6f\n",
                      k, cr.cycles_das, cr.cycles_swave, cr.cycles_deviation,
                      cr.cycles_loss, cr.total_cycles, fps);
        csv += buf;
    }
    if (!o.out_dir.empty()) {
        const fs::path out = ensure_out(o, "bench");
        // Wall-clock timings stay on stdout; files under --out must be
        // reproducible bit for bit.
        pat::atomic_write_file((out / "cycles.csv").string(), csv);
        write_metadata(out, "bench", o, cf,
                       json{{"clock_mhz", clock_mhz},
                            {"outputs", {"cycles.csv"}}});
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photoacoustic tomography reconstruction engine"};
    app.require_subcommand(1);

    int rc = 0;

    CommonOpts gen_o;
    bool gen_oracle = false;
    bool gen_emit = false;
    CLI::App* gen = app.add_subcommand(
        "gen-phantom", "Rasterize the configured phantom and synthesize its channel data");
    add_common(gen, gen_o);
    gen->add_flag("--oracle", gen_oracle,
                  "Synthesize from target coordinates instead of the pixel grid");
    gen->add_flag("--emit-config", gen_emit,
                  "Print the default configuration and exit");
    gen->callback([&] { rc = run_gen_phantom(gen_o, gen_oracle, gen_emit); });

    CommonOpts fwd_o;
    std::string fwd_input;
    CLI::App* fwd = app.add_subcommand(
        "forward", "Run the forward model on an intensity image (CSV or PADF)");
    add_common(fwd, fwd_o);
    fwd->add_option("input", fwd_input, "Intensity image")->required();
    fwd->callback([&] { rc = run_forward(fwd_o, fwd_input); });

    CommonOpts rec_o;
    std::string rec_input;
    std::string rec_algo = "model-based";
    std::string rec_mode;
    CLI::App* rec = app.add_subcommand(
        "reconstruct", "Reconstruct an image from PADF channel data");
    add_common(rec, rec_o);
    rec->add_option("input", rec_input, "PADF channel data")->required();
    rec->add_option("--algo", rec_algo, "Reconstruction algorithm")
        ->check(CLI::IsMember({"das", "dmas", "das-cf", "model-based"}));
    rec->add_option("--mode", rec_mode, "Execution mode (overrides the config)")
        ->check(CLI::IsMember({"reference", "hardware"}));
    rec->callback([&] { rc = run_reconstruct(rec_o, rec_input, rec_algo, rec_mode); });

    CommonOpts cmp_o;
    std::string cmp_a;
    std::string cmp_b;
    bool cmp_ssim = false;
    bool cmp_error_map = false;
    CLI::App* cmp = app.add_subcommand("compare", "Compare two images");
    add_common(cmp, cmp_o);
    cmp->add_option("a", cmp_a, "First image")->required();
    cmp->add_option("b", cmp_b, "Second image")->required();
    cmp->add_flag("--ssim", cmp_ssim, "Structural similarity (always printed)");
    cmp->add_flag("--error-map", cmp_error_map,
                  "Write the absolute difference map under --out");
    cmp->callback([&] { rc = run_compare(cmp_o, cmp_a, cmp_b, cmp_error_map); });

    CommonOpts bud_o;
    CLI::App* bud = app.add_subcommand(
        "budget", "Print the on-chip table storage for each symmetry fold");
    add_common(bud, bud_o);
    bud->callback([&] { rc = run_budget(bud_o); });

    CommonOpts ben_o;
    double ben_clock = 200.0;
    int ben_iters = 20;
    CLI::App* ben = app.add_subcommand(
        "bench", "Time the emulated datapath and print the cycle model");
    add_common(ben, ben_o);
    ben->add_option("--clock-mhz", ben_clock, "Modeled clock rate");
    ben->add_option("--iterations", ben_iters, "Largest iteration count to model")
        ->check(CLI::Range(1, 10000));
    ben->callback([&] { rc = run_bench(ben_o, ben_clock, ben_iters); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: Usage: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const pat::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

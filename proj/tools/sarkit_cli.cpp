#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sarkit/cnn.hpp"
#include "sarkit/dataset.hpp"
#include "sarkit/denoiser.hpp"
#include "sarkit/error.hpp"
#include "sarkit/homomorphic.hpp"
#include "sarkit/metrics.hpp"
#include "sarkit/mulog.hpp"
#include "sarkit/raster.hpp"
#include "sarkit/speckle.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sarkit;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MethodConfig {
  std::string method = "mulog-tv";
  std::vector<std::string> weights;
  int iters = 6;
  double beta0 = 1.0;
  double beta_growth = 1.3;
  double tv_lambda_scale = 1.5;
};

void add_method_options(CLI::App* cmd, MethodConfig& m) {
  cmd->add_option("--method", m.method, "homom-tv | homom-cnn | mulog-tv | mulog-cnn | sarcnn")
      ->check(CLI::IsMember({"homom-tv", "homom-cnn", "mulog-tv", "mulog-cnn", "sarcnn"}))
      ->capture_default_str();
  cmd->add_option("--weights", m.weights, "SCNW file, repeat for a bank of noise levels");
  cmd->add_option("--iters", m.iters, "MuLoG iterations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--beta0", m.beta0, "initial MuLoG penalty")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--beta-growth", m.beta_growth)->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--tv-lambda-scale", m.tv_lambda_scale, "TV weight per unit sigma")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void check_method(const MethodConfig& m) {
  const bool cnn = m.method == "homom-cnn" || m.method == "mulog-cnn" || m.method == "sarcnn";
  if (cnn && m.weights.empty()) throw UsageError("--method " + m.method + " requires --weights");
  if (!cnn && !m.weights.empty()) throw UsageError("--weights is only used by the cnn methods");
  if (m.method == "sarcnn" && m.weights.size() != 1) throw UsageError("sarcnn takes exactly one --weights");
}

json method_params(const MethodConfig& m) {
  json j;
  j["method"] = m.method;
  j["weights"] = m.weights;
  if (m.method.rfind("mulog", 0) == 0) {
    j["iters"] = m.iters;
    j["beta0"] = m.beta0;
    j["beta_growth"] = m.beta_growth;
  }
  if (m.method.find("-tv") != std::string::npos) j["tv_lambda_scale"] = m.tv_lambda_scale;
  return j;
}

DespeckleMethod build_method(const MethodConfig& m, double looks) {
  if (m.method == "sarcnn") {
    auto w = std::make_shared<CnnWeights>(load_weights(m.weights.front()));
    return [w, looks](const RasterImage& y) { return sarcnn_despeckle(y, looks, *w); };
  }
  std::shared_ptr<GaussianDenoiser> den;
  if (m.method.ends_with("-tv")) {
    TvOptions opts;
    opts.lambda_scale = m.tv_lambda_scale;
    den = std::make_shared<TvDenoiser>(opts);
  } else {
    std::vector<CnnWeights> bank;
    for (const auto& p : m.weights) bank.push_back(load_weights(p));
    den = std::make_shared<CnnDenoiser>(std::move(bank));
  }
  if (m.method.starts_with("homom")) {
    return [den, looks](const RasterImage& y) { return homomorphic_despeckle(y, looks, *den); };
  }
  MulogOptions opts;
  opts.iterations = m.iters;
  opts.beta0 = m.beta0;
  opts.beta_growth = m.beta_growth;
  return [den, looks, opts](const RasterImage& y) { return mulog_despeckle(y, looks, *den, opts); };
}

RasterImage load_intensity(const fs::path& p) {
  const RasterImage img = read_raster(p);
  switch (img.domain()) {
    case Domain::intensity:
      return img;
    case Domain::amplitude:
      return to_intensity(img);
    case Domain::log_intensity:
      return from_log(img);
  }
  return img;
}

Region region_or_full(const std::vector<int>& r, const RasterImage& img) {
  if (r.empty()) return {0, 0, img.height(), img.width()};
  return {r[0], r[1], r[2], r[3]};
}

void provenance(const std::string& command, const json& params) {
  std::cout << "# sarkit " << kVersion << "\n# command: " << command << "\n# params: " << params.dump() << "\n";
}

void error_line(const std::string& kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << std::endl;
}

const char* layer_type(LayerKind k) {
  switch (k) {
    case LayerKind::conv_relu:
      return "Conv+ReLU";
    case LayerKind::conv_bn_relu_folded:
      return "Conv+BN+ReLU";
    case LayerKind::conv:
      return "Conv";
  }
  return "?";
}

void inspect_weights(const fs::path& p) {
  const CnnWeights w = load_weights(p);
  std::printf("file: %s\n", p.string().c_str());
  std::printf("D=%d\n", w.depth());
  std::string chain = std::to_string(w.layers.front().in_channels);
  for (const auto& l : w.layers) chain += "→" + std::to_string(l.out_channels);
  std::printf("chain: %s\n", chain.c_str());
  std::printf("trained_sigma: %.9g (%.6g/255)\n", w.trained_sigma, w.trained_sigma * 255.0);
  std::printf("trained_bias_term: %.9g\n", w.trained_bias_term);
  std::printf("input_normalization: offset %.9g scale %.9g\n", w.input_norm.offset, w.input_norm.scale);
  std::printf("receptive_field: %dx%d\n", 2 * w.receptive_radius() + 1, 2 * w.receptive_radius() + 1);
  std::printf("%-6s %-14s %-8s %4s %4s %10s\n", "layer", "type", "kernel", "in", "out", "params");
  std::size_t total = 0;
  for (int i = 0; i < w.depth(); ++i) {
    const auto& l = w.layers[i];
    const std::size_t params = l.kernel.size() + l.bias.size();
    total += params;
    std::printf("%-6d %-14s %-8s %4d %4d %10zu\n", i + 1, layer_type(l.kind), "3x3", l.in_channels, l.out_channels,
                params);
  }
  std::printf("total_params: %zu\n", total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAR intensity despeckling toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  // simulate
  auto* sim = app.add_subcommand("simulate", "multiply a reflectivity image by gamma speckle");
  std::string sim_in, sim_out;
  double sim_looks = 1.0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--in", sim_in, "reflectivity RAD1")->required();
  sim->add_option("--looks", sim_looks)->required();
  sim->add_option("--seed", sim_seed)->required();
  sim->add_option("--out", sim_out)->required();

  // despeckle
  auto* desp = app.add_subcommand("despeckle", "estimate reflectivity from a speckled intensity image");
  std::string desp_in, desp_out;
  double desp_looks = 1.0;
  bool desp_sub2 = false;
  MethodConfig desp_method;
  desp->add_option("--in", desp_in)->required();
  desp->add_option("--looks", desp_looks)->required();
  desp->add_option("--out", desp_out)->required();
  desp->add_flag("--subsample2", desp_sub2, "decimate by 2 before despeckling");
  add_method_options(desp, desp_method);

  // dataset
  auto* ds = app.add_subcommand("dataset", "ground truth and training pairs");
  ds->require_subcommand(1);
  auto* ml = ds->add_subcommand("multilook", "average the intensity of a temporal stack");
  std::vector<std::string> ml_in;
  std::string ml_out;
  ml->add_option("--in", ml_in, "dates, in order")->required();
  ml->add_option("--out", ml_out)->required();

  auto* gt = ds->add_subcommand("groundtruth", "multilook then MuLoG+TV with the estimated looks");
  std::vector<std::string> gt_in;
  std::vector<int> gt_region;
  std::string gt_out;
  MethodConfig gt_method;
  gt->add_option("--in", gt_in)->required();
  gt->add_option("--region", gt_region, "homogeneous region r,c,h,w")->delimiter(',')->expected(4)->required();
  gt->add_option("--out", gt_out)->required();
  gt->add_option("--iters", gt_method.iters)->check(CLI::PositiveNumber)->capture_default_str();
  gt->add_option("--beta0", gt_method.beta0)->check(CLI::PositiveNumber)->capture_default_str();
  gt->add_option("--tv-lambda-scale", gt_method.tv_lambda_scale)->check(CLI::PositiveNumber)->capture_default_str();

  auto* pt = ds->add_subcommand("patches", "cut a log-intensity image into patches");
  std::string pt_in, pt_dir;
  int pt_size = kPatchSize, pt_stride = kPatchStride;
  pt->add_option("--in", pt_in)->required();
  pt->add_option("--out-dir", pt_dir)->required();
  pt->add_option("--size", pt_size)->check(CLI::PositiveNumber)->capture_default_str();
  pt->add_option("--stride", pt_stride)->check(CLI::PositiveNumber)->capture_default_str();

  auto* pr = ds->add_subcommand("pairs", "synthesize augmented clean/noisy log patch pairs");
  std::string pr_in, pr_dir;
  double pr_looks = 1.0;
  std::uint64_t pr_seed = 0;
  int pr_size = kPatchSize, pr_stride = kPatchStride, pr_id = 0;
  pr->add_option("--in", pr_in, "clean intensity RAD1")->required();
  pr->add_option("--looks", pr_looks)->required();
  pr->add_option("--seed", pr_seed)->required();
  pr->add_option("--out-dir", pr_dir)->required();
  pr->add_option("--size", pr_size)->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_option("--stride", pr_stride)->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_option("--image-id", pr_id)->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "PSNR/SSIM over independent speckle realizations");
  std::string ev_clean, ev_report;
  double ev_looks = 1.0;
  int ev_runs = 20;
  std::uint64_t ev_seed = 0;
  MethodConfig ev_method;
  ev->add_option("--clean", ev_clean, "clean intensity RAD1")->required();
  ev->add_option("--looks", ev_looks)->capture_default_str();
  ev->add_option("--realizations", ev_runs)->check(CLI::Range(2, 100000))->capture_default_str();
  ev->add_option("--seed", ev_seed)->required();
  ev->add_option("--report", ev_report, "also write the report to this file");
  add_method_options(ev, ev_method);

  // metrics
  auto* met = app.add_subcommand("metrics", "no-reference measures");
  met->require_subcommand(1);
  auto* enl = met->add_subcommand("enl", "equivalent number of looks over a region");
  std::string enl_in;
  std::vector<int> enl_region;
  enl->add_option("--in", enl_in)->required();
  enl->add_option("--region", enl_region, "r,c,h,w (default: whole image)")->delimiter(',')->expected(4);
  auto* ratio = met->add_subcommand("ratio", "noisy / denoised");
  std::string ratio_noisy, ratio_den, ratio_out;
  std::vector<int> ratio_region;
  ratio->add_option("--noisy", ratio_noisy)->required();
  ratio->add_option("--denoised", ratio_den)->required();
  ratio->add_option("--out", ratio_out, "write the ratio image");
  ratio->add_option("--region", ratio_region, "r,c,h,w for the ENL (default: whole image)")
      ->delimiter(',')
      ->expected(4);

  // weights
  auto* wt = app.add_subcommand("weights", "SCNW weight files");
  wt->require_subcommand(1);
  auto* insp = wt->add_subcommand("inspect", "print the layer table");
  std::string insp_path;
  insp->add_option("file", insp_path)->required();

  // convert
  auto* conv = app.add_subcommand("convert", "export a RAD1 image as 16-bit amplitude PGM");
  std::string conv_in, conv_out;
  conv->add_option("--in", conv_in)->required();
  conv->add_option("--out", conv_out)->required();

  try {
    app.parse(argc, argv);
    if (*desp) check_method(desp_method);
    if (*ev) check_method(ev_method);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    error_line("usage", e.what(), 1);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\nRun with --help for more information.\n";
    error_line("usage", e.what(), 1);
    return 1;
  }

  if (threads > 0) omp_set_num_threads(threads);
  const int resolved_threads = omp_get_max_threads();

  try {
    if (*sim) {
      provenance("simulate", {{"in", sim_in}, {"looks", sim_looks}, {"seed", sim_seed}, {"out", sim_out},
                              {"threads", resolved_threads}});
      const auto x = load_intensity(sim_in);
      write_raster(simulate_speckle(x, sim_looks, sim_seed), sim_out);
      std::cout << "wrote " << sim_out << " (" << x.width() << "x" << x.height() << ")\n";
    } else if (*desp) {
      json p{{"in", desp_in}, {"looks", desp_looks}, {"subsample2", desp_sub2}};
      p.update(method_params(desp_method));
      p["out"] = desp_out;
      p["threads"] = resolved_threads;
      provenance("despeckle", p);
      auto y = load_intensity(desp_in);
      if (desp_sub2) y = subsample2(y);
      const auto x = build_method(desp_method, desp_looks)(y);
      write_raster(x, desp_out);
      std::cout << "wrote " << desp_out << " (" << x.width() << "x" << x.height() << ")\n";
    } else if (*ml) {
      provenance("dataset multilook", {{"in", ml_in}, {"out", ml_out}, {"threads", resolved_threads}});
      TemporalStack stack;
      for (const auto& p : ml_in) stack.push_back(load_intensity(p));
      write_raster(temporal_multilook(stack), ml_out);
      std::cout << "dates: " << stack.size() << "\nwrote " << ml_out << "\n";
    } else if (*gt) {
      provenance("dataset groundtruth", {{"in", gt_in},
                                         {"region", gt_region},
                                         {"iters", gt_method.iters},
                                         {"beta0", gt_method.beta0},
                                         {"tv_lambda_scale", gt_method.tv_lambda_scale},
                                         {"out", gt_out},
                                         {"threads", resolved_threads}});
      TemporalStack stack;
      for (const auto& p : gt_in) stack.push_back(load_intensity(p));
      TvOptions tv;
      tv.lambda_scale = gt_method.tv_lambda_scale;
      MulogOptions mo;
      mo.iterations = gt_method.iters;
      mo.beta0 = gt_method.beta0;
      const auto res = generate_groundtruth(stack, TvDenoiser(tv), {gt_region[0], gt_region[1], gt_region[2], gt_region[3]},
                                            mo);
      for (const auto& w : res.warnings) {
        std::cout << "# warning: " << w << "\n";
        std::cerr << "warning: " << w << "\n";
      }
      std::printf("enl_multilook: %.6g\n", res.enl.enl);
      std::printf("enl_final: %.6g\n", estimate_enl(res.image, res.enl.region).enl);
      write_raster(res.image, gt_out);
      std::cout << "wrote " << gt_out << "\n";
    } else if (*pt) {
      provenance("dataset patches", {{"in", pt_in}, {"size", pt_size}, {"stride", pt_stride}, {"out_dir", pt_dir}});
      const auto img = read_raster(pt_in);
      const auto patches = extract_patches(img, pt_size, pt_stride);
      fs::create_directories(pt_dir);
      std::ofstream index(fs::path(pt_dir) / "patches.tsv");
      index << "#path\trow\tcol\n";
      char name[32];
      for (std::size_t i = 0; i < patches.size(); ++i) {
        std::snprintf(name, sizeof(name), "patch_%07zu.rad", i);
        write_raster(patches[i].image, fs::path(pt_dir) / name);
        index << name << '\t' << patches[i].row << '\t' << patches[i].col << '\n';
      }
      if (!index) throw Error(ErrorKind::input, "cannot write patch index in " + pt_dir);
      std::cout << "patches: " << patches.size() << "\n";
    } else if (*pr) {
      provenance("dataset pairs", {{"in", pr_in},
                                   {"looks", pr_looks},
                                   {"seed", pr_seed},
                                   {"size", pr_size},
                                   {"stride", pr_stride},
                                   {"image_id", pr_id},
                                   {"out_dir", pr_dir},
                                   {"threads", resolved_threads}});
      const auto clean = load_intensity(pr_in);
      const auto pairs = synthesize_pairs(clean, pr_looks, pr_seed, pr_size, pr_stride, pr_id);
      write_pair_archive(pr_dir, pairs, pr_looks, pr_seed);
      std::cout << "pairs: " << pairs.size() << "\nmanifest: " << (fs::path(pr_dir) / kManifestName).string() << "\n";
    } else if (*ev) {
      json p{{"clean", ev_clean}, {"looks", ev_looks}, {"realizations", ev_runs}, {"seed", ev_seed}};
      p.update(method_params(ev_method));
      p["threads"] = resolved_threads;
      provenance("eval", p);
      const auto clean = load_intensity(ev_clean);
      const auto report = evaluate_suite(clean, build_method(ev_method, ev_looks), ev_looks, ev_runs, ev_seed);
      write_report(std::cout, report);
      if (!ev_report.empty()) {
        std::ofstream f(ev_report);
        write_report(f, report);
        if (!f) throw Error(ErrorKind::input, "cannot write " + ev_report);
      }
    } else if (*enl) {
      provenance("metrics enl", {{"in", enl_in}, {"region", enl_region}});
      const auto img = load_intensity(enl_in);
      const auto e = estimate_enl(img, region_or_full(enl_region, img));
      std::printf("mean: %.9g\nvariance: %.9g\nenl: %.6g\ncapped: %s\n", e.mean, e.variance, e.enl,
                  e.capped ? "true" : "false");
    } else if (*ratio) {
      provenance("metrics ratio", {{"noisy", ratio_noisy}, {"denoised", ratio_den}, {"region", ratio_region}});
      const auto r = ratio_residual(load_intensity(ratio_noisy), load_intensity(ratio_den));
      const auto e = estimate_enl(r, region_or_full(ratio_region, r));
      std::printf("mean: %.9g\nenl: %.6g\n", e.mean, e.enl);
      if (!ratio_out.empty()) write_raster(r, ratio_out);
    } else if (*insp) {
      inspect_weights(insp_path);
    } else if (*conv) {
      const auto img = read_raster(conv_in);
      write_pgm(img.domain() == Domain::amplitude ? img : to_amplitude(load_intensity(conv_in)), conv_out);
      std::cout << "wrote " << conv_out << "\n";
    }
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::numerical ? 3 : 2;
    error_line(std::string(to_string(e.kind())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    error_line("input", e.what(), 2);
    return 2;
  }
  return 0;
}

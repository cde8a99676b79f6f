// smac: rate regions of a state-dependent MAC with an informed and a
// strictly causal encoder.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "smac/cli.hpp"

namespace {

void add_search_flags(CLI::App* cmd, smac::cli::DmRegionOptions& o) {
  cmd->add_option("channel_file", o.channel_file, "channel file (dmmac v1)")->required();
  cmd->add_option("--levels", o.levels, "grid units per simplex row")->capture_default_str();
  cmd->add_option("--restarts", o.restarts, "random restarts")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--directions", o.directions, "number of support directions")->capture_default_str();
  cmd->add_flag("--force_structure", o.force_structure, "only structured seeds V=S, U=X1");
  cmd->add_option("--threads", o.threads, "worker threads (output does not depend on it)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate regions of a state-dependent multiple-access channel"};
  app.set_version_flag("--version", smac::cli::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  bool timing = false;
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_flag("--timing", timing, "append the wall-clock duration to the manifest");

  smac::cli::DmRegionOptions region;
  auto* dm_region = app.add_subcommand("dm_region", "trace the inner region C (or C' with --no_v)");
  dm_region->alias("dm-region");
  add_search_flags(dm_region, region);
  dm_region->add_option("--umax", region.umax, "|U| cap");
  dm_region->add_option("--vmax", region.vmax, "|V| cap");
  dm_region->add_flag("--no_v", region.no_v, "degenerate V (region C')");
  dm_region->add_flag("--constrained", region.constrained, "keep laws with I(V,X2;Y) >= I(V,X2;S)");
  dm_region->add_flag("--allow_large_caps", region.allow_large_caps, "permit caps above the sufficient ones");
  dm_region->add_option("--max_iters", region.max_iters, "coordinate-ascent sweeps per direction")
      ->capture_default_str();

  smac::cli::DmRegionOptions outer;
  auto* dm_outer = app.add_subcommand("dm_outer", "trace the outer bound over sampled input laws");
  dm_outer->alias("dm-outer");
  add_search_flags(dm_outer, outer);

  smac::cli::CmCapacityOptions cm;
  auto* cm_capacity = app.add_subcommand("cm_capacity", "common-message capacity estimate");
  cm_capacity->alias("cm-capacity");
  cm_capacity->add_option("channel_file", cm.channel_file, "channel file (dmmac v1)")->required();
  cm_capacity->add_option("--levels", cm.levels, "grid units per simplex row")->capture_default_str();
  cm_capacity->add_option("--restarts", cm.restarts, "random restarts")->capture_default_str();
  cm_capacity->add_option("--seed", cm.seed, "RNG seed")->capture_default_str();
  cm_capacity->add_option("--kmax", cm.kmax, "|K| cap");
  cm_capacity->add_option("--threads", cm.threads, "worker threads")->capture_default_str();

  smac::cli::BinaryExampleOptions bin;
  auto* binary = app.add_subcommand("binary_example", "binary example closed forms and brute force");
  binary->alias("binary-example");
  binary->add_option("--p", bin.p, "crossover probability")->capture_default_str();
  binary->add_option("--q1", bin.q1, "input weight of X1")->capture_default_str();
  binary->add_option("--q2", bin.q2, "input weight of X2")->capture_default_str();
  binary->add_flag("--sweep", bin.sweep, "9x9 grid over p, q1");
  binary->add_option("--levels", bin.levels, "brute-force grid points")->capture_default_str();

  smac::cli::GaussianOptions gs;
  bool no_refine = false;
  auto* gaussian = app.add_subcommand("gaussian", "Gaussian region and common-message capacity");
  gaussian->add_option("--p1", gs.p1, "power of encoder 1")->capture_default_str();
  gaussian->add_option("--p2", gs.p2, "power of encoder 2")->capture_default_str();
  gaussian->add_option("--q", gs.q, "state variance")->capture_default_str();
  gaussian->add_option("--n", gs.n, "noise variance")->capture_default_str();
  gaussian->add_option("--grid", gs.grid, "correlation grid steps")->capture_default_str();
  gaussian->add_option("--directions", gs.directions, "number of support directions")->capture_default_str();
  gaussian->add_flag("--no_refine", no_refine, "skip the pattern-search refinement");

  std::string system_file;
  auto* fme = app.add_subcommand("fme", "Fourier-Motzkin reduction of an inequality system");
  fme->add_option("system_file", system_file, "inequality system file")->required();

  double bc_p = 0.1;
  std::optional<double> bc_q1, bc_q2;
  auto* binary_channel = app.add_subcommand("binary_channel", "write the binary example channel");
  binary_channel->alias("binary-channel");
  binary_channel->add_option("--p", bc_p, "crossover probability")->capture_default_str();
  binary_channel->add_option("--q1", bc_q1, "E[X1] bound");
  binary_channel->add_option("--q2", bc_q2, "E[X2] bound");

  std::vector<std::size_t> rc_sizes{2, 2, 2, 2};
  std::uint64_t rc_seed = 0;
  auto* random_channel = app.add_subcommand("random_channel", "write a seeded random channel");
  random_channel->alias("random-channel");
  random_channel->add_option("--sizes", rc_sizes, "|S| |X1| |X2| |Y|")->expected(4)->capture_default_str();
  random_channel->add_option("--seed", rc_seed, "RNG seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  gs.refine = !no_refine;

  const auto start = std::chrono::steady_clock::now();
  std::string text;
  try {
    namespace c = smac::cli;
    if (dm_region->parsed()) text = c::cmd_dm_region(region);
    if (dm_outer->parsed()) text = c::cmd_dm_outer(outer);
    if (cm_capacity->parsed()) text = c::cmd_cm_capacity(cm);
    if (binary->parsed()) text = c::cmd_binary_example(bin);
    if (gaussian->parsed()) text = c::cmd_gaussian(gs);
    if (fme->parsed()) text = c::cmd_fme(system_file);
    if (binary_channel->parsed()) text = c::cmd_binary_channel(bc_p, bc_q1, bc_q2);
    if (random_channel->parsed()) {
      text = c::cmd_random_channel(rc_sizes[0], rc_sizes[1], rc_sizes[2], rc_sizes[3], rc_seed);
    }
  } catch (const smac::cli::SanityError& e) {
    std::cerr << "smac: sanity check failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "smac: " << e.what() << '\n';
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (timing) text += "# duration_s=" + smac::cli::fmt6(seconds) + "\n";

  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) return 1;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
      std::cerr << "smac: cannot write '" << out_path << "'\n";
      return 1;
    }
  }
  std::cerr << "smac: done in " << smac::cli::fmt6(seconds) << " s\n";
  return 0;
}

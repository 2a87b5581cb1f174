// chordlab command-line front end.
//
// Exit codes: 0 success, 1 a guaranteed-regime check failed, 2 usage or input
// error, 3 numerical assumption violated.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chordlab/chords.hpp"
#include "chordlab/electro.hpp"
#include "chordlab/errors.hpp"
#include "chordlab/fourier_op.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/loop_spec.hpp"
#include "chordlab/serialize.hpp"
#include "chordlab/spectral.hpp"
#include "chordlab/suite.hpp"

namespace {

using namespace chordlab;

constexpr std::uint64_t kDefaultSeed = 1;

struct Output {
  std::string format = "json";
  std::string path;

  Format fmt() const { return format == "csv" ? Format::csv : Format::json; }
};

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("--format", out.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", out.path, "output file (default stdout)");
}

void emit(const Json& j, const Table& t, const Output& out) {
  write_text(out.fmt() == Format::json ? canonical_json(j) : render_csv(t), out.path);
}

Json fourier_spec(const FourierLoop& loop) {
  Json coeffs = Json::array();
  for (int n = 1; n <= loop.max_mode(); ++n) {
    std::vector<double> re, im;
    for (const auto& c : loop.coeff(n)) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    coeffs.push_back(Json{{"n", n}, {"re", re}, {"im", im}});
  }
  return Json{{"type", "fourier"}, {"dim", loop.dim()}, {"coeffs", coeffs}};
}

Table fourier_table(const FourierLoop& loop) {
  Table t{{"n", "component", "re", "im"}, {}};
  for (int n = 1; n <= loop.max_mode(); ++n) {
    const auto c = loop.coeff(n);
    for (std::size_t i = 0; i < c.size(); ++i)
      t.rows.push_back({std::to_string(n), std::to_string(i), format_double(c[i].real()),
                        format_double(c[i].imag())});
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chord inequalities, point interactions and charged necklaces on closed loops"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "chordlab 1.0.0");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "ground state of point interactions on a loop");
  std::string spectrum_loop;
  double alpha = 0.0;
  int spectrum_dim = 2;
  std::optional<int> spectrum_marks;
  Output spectrum_out;
  spectrum->add_option("--loop", spectrum_loop, "loop spec file")->required();
  spectrum->add_option("--alpha", alpha, "coupling")->required();
  spectrum->add_option("--dim", spectrum_dim, "2 or 3")->required();
  spectrum->add_option("--N", spectrum_marks, "marks on a curve spec");
  add_output_options(spectrum, spectrum_out);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "constrained extremal configurations");
  std::string target;
  int opt_n = 0;
  double opt_length = 0.0;
  int opt_dim = 2;
  int opt_m = 1;
  double opt_alpha = 0.0;
  double opt_q = 1.0;
  OptimizerOptions opts;
  opts.seed = kDefaultSeed;
  Output optimize_out;
  optimize->add_option("target", target, "coulomb | fm | groundstate")
      ->required()
      ->check(CLI::IsMember({"coulomb", "fm", "groundstate"}));
  optimize->add_option("--N", opt_n, "number of beads")->required()->check(CLI::Range(2, 100000));
  optimize->add_option("--L", opt_length, "length budget")->required()->check(CLI::PositiveNumber);
  optimize->add_option("--dim", opt_dim, "ambient dimension")->capture_default_str();
  optimize->add_option("--m", opt_m, "chord index for fm")->capture_default_str();
  optimize->add_option("--alpha", opt_alpha, "coupling for groundstate")->capture_default_str();
  optimize->add_option("--q", opt_q, "bead charge for coulomb")->capture_default_str();
  optimize->add_option("--restarts", opts.restarts, "random starts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--seed", opts.seed, "master seed")->capture_default_str();
  add_output_options(optimize, optimize_out);

  // check
  auto* check = app.add_subcommand("check", "chord inequalities for one loop");
  std::string check_loop;
  std::vector<double> p_grid{2.0};
  std::vector<int> m_list{1};
  bool all_m = false;
  std::optional<int> check_marks;
  Output check_out;
  check->add_option("--loop", check_loop, "loop spec file")->required();
  check->add_option("--p", p_grid, "exponents; negative values select the D^-|p| family")
      ->delimiter(',')
      ->capture_default_str();
  check->add_option("--m", m_list, "chord indices")->delimiter(',')->capture_default_str();
  check->add_flag("--all-m", all_m, "every m in 1..N/2");
  check->add_option("--N", check_marks, "marks on a curve spec");
  add_output_options(check, check_out);

  // opnorm
  auto* opnorm = app.add_subcommand("opnorm", "norm of the chord operator");
  int op_n = 0;
  int op_m = 0;
  std::string op_mode = "block";
  long op_cutoff = 10000;
  Output opnorm_out;
  opnorm->add_option("--N", op_n, "marks")->required();
  opnorm->add_option("--m", op_m, "chord index")->required();
  opnorm->add_option("--mode", op_mode, "block or dense")
      ->check(CLI::IsMember({"block", "dense"}))
      ->capture_default_str();
  opnorm->add_option("--cutoff", op_cutoff, "dense truncation K")->capture_default_str();
  add_output_options(opnorm, opnorm_out);

  // verify
  auto* verify = app.add_subcommand("verify", "seeded property suite");
  std::uint64_t verify_seed = kDefaultSeed;
  int trials = 10;
  Output verify_out;
  verify->add_option("--seed", verify_seed, "master seed")->capture_default_str();
  verify->add_option("--trials", trials, "number of trials")->capture_default_str();
  add_output_options(verify, verify_out);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a loop spec");
  std::string gen_type;
  int gen_n = 0;
  double gen_length = 0.0;
  int gen_dim = 2;
  double gen_theta = 0.0;
  double gen_side = 1.0;
  std::uint64_t gen_seed = kDefaultSeed;
  int gen_modes = 8;
  double gen_decay = 3.0;
  Output gen_out;
  gen->add_option("--type", gen_type, "regular | rhomboid | random | admissible")
      ->required()
      ->check(CLI::IsMember({"regular", "rhomboid", "random", "admissible"}));
  gen->add_option("--N", gen_n, "beads (regular, admissible) or marks (random)");
  gen->add_option("--L", gen_length, "length");
  gen->add_option("--dim", gen_dim, "ambient dimension")->capture_default_str();
  gen->add_option("--theta", gen_theta, "rhomboid angle");
  gen->add_option("--side", gen_side, "rhomboid side")->capture_default_str();
  gen->add_option("--seed", gen_seed, "seed")->capture_default_str();
  gen->add_option("--M", gen_modes, "modes of a random loop")->capture_default_str();
  gen->add_option("--decay", gen_decay, "coefficient decay")->capture_default_str();
  add_output_options(gen, gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) {
      const auto cfg = spec_configuration(load_loop_spec(spectrum_loop), spectrum_marks);
      const auto gs = ground_state(cfg, alpha, spectrum_dim);
      if (gs) {
        Json j = to_json(*gs);
        j["bound_state"] = true;
        emit(j, to_table(*gs), spectrum_out);
      } else {
        emit(Json{{"bound_state", false}}, Table{{"kappa1", "energy", "iterations"}, {}},
             spectrum_out);
      }
      return 0;
    }
    if (*optimize) {
      OptimizationResult res = [&] {
        if (target == "coulomb") return minimize_coulomb(opt_n, opt_length, opt_dim, opt_q, opts);
        if (target == "fm") return maximize_fm(opt_n, opt_length, opt_dim, opt_m, opts);
        return maximize_ground_state(opt_n, opt_length, opt_alpha, opt_dim, opts);
      }();
      emit_report(res, optimize_out.fmt(), optimize_out.path);
      return 0;
    }
    if (*check) {
      const auto run = run_check(load_loop_spec(check_loop), p_grid, all_m, m_list, check_marks);
      emit_report(run.reports, check_out.fmt(), check_out.path);
      return run.exit_code;
    }
    if (*opnorm) {
      const auto mode = op_mode == "dense" ? NormMode::dense : NormMode::block;
      const double norm = operator_norm(op_n, op_m, mode, op_cutoff);
      const double bound = bound_rhs(op_n, op_m);
      Json j{{"N", op_n},         {"m", op_m},      {"mode", op_mode}, {"norm", norm},
             {"bound", bound},    {"ratio", norm / bound}};
      if (mode == NormMode::dense) j["cutoff"] = op_cutoff;
      Table t{{"N", "m", "mode", "cutoff", "norm", "bound", "ratio"},
              {{std::to_string(op_n), std::to_string(op_m), op_mode,
                mode == NormMode::dense ? std::to_string(op_cutoff) : "", format_double(norm),
                format_double(bound), format_double(norm / bound)}}};
      emit(j, t, opnorm_out);
      return 0;
    }
    if (*verify) {
      if (trials < 1) {
        std::cerr << "verify: --trials must be >= 1\n";
        return 2;
      }
      const auto summary = run_verify(verify_seed, trials);
      emit_report(summary, verify_out.fmt(), verify_out.path);
      return summary.failed() == 0 ? 0 : 1;
    }
    if (*gen) {
      if (gen_type == "regular" || gen_type == "admissible") {
        if (gen_n < 2 || !(gen_length > 0.0)) {
          std::cerr << "gen: --N >= 2 and --L > 0 are required\n";
          return 2;
        }
        const auto cfg = gen_type == "regular" ? regular_polygon(gen_n, gen_length, gen_dim)
                                               : random_admissible(gen_seed, gen_n, gen_length, gen_dim);
        emit_report(cfg, gen_out.fmt(), gen_out.path);
      } else if (gen_type == "rhomboid") {
        emit_report(rhomboid(gen_theta, gen_side), gen_out.fmt(), gen_out.path);
      } else {
        const double length = gen_length > 0.0 ? gen_length : kTwoPi;
        const auto loop = random_fourier_loop(gen_seed, gen_modes, gen_decay, length, gen_dim);
        if (gen_n > 0) {
          emit_report(sample_equidistant(loop, gen_n), gen_out.fmt(), gen_out.path);
        } else {
          Json j = fourier_spec(loop);
          j["L"] = length;
          emit(j, fourier_table(loop), gen_out);
        }
      }
      return 0;
    }
  } catch (const AssumptionError& e) {
    std::cerr << "numerical assumption violated: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include <iostream>

#include <CLI11.hpp>

#include "ckalg/cli.hpp"

using namespace ckalg;

int main(int argc, char** argv) {
  CLI::App app{"Cuntz-Krieger algebra toolkit"};
  app.require_subcommand(1);
  bool explain = false;
  app.add_flag("--explain", explain, "append prose lines after the report");

  std::string matrix_path, graph_path, action_path;

  auto* analyze = app.add_subcommand("analyze", "validity, aperiodicity and projection classes of A");
  auto* an_m = analyze->add_option("--matrix", matrix_path, "matrix file");
  auto* an_g = analyze->add_option("--graph", graph_path, "graph file");
  an_m->excludes(an_g);
  analyze->add_flag("--explain", explain);

  cli::ActionOptions aopt;
  std::string verify_mode;
  std::vector<std::string> witness_args;
  int fixed = -1, cocycle = -1;
  auto* action = app.add_subcommand("action", "check a diagonal quasi-free action");
  action->add_option("--matrix", matrix_path)->required();
  action->add_option("--action", action_path)->required();
  auto* verify = action->add_option("--verify", verify_mode, "run the action checks; 'oracle' adds path-space checks")->expected(0, 1);
  action->add_option("--cocycle", cocycle, "check chain identities up to K");
  action->add_option("--witness", witness_args, "K eps")->expected(2);
  action->add_option("--fixed", fixed, "fixed-point core dimension at level k");
  action->add_option("--seed", aopt.search.seed);
  action->add_option("--jobs", aopt.search.jobs);
  action->add_option("--budget", aopt.search.budget);
  action->add_flag("--explain", explain);

  std::string kt_matrix;
  auto* ktheory = app.add_subcommand("ktheory", "K-groups and the O_2 flag");
  ktheory->add_option("--matrix", kt_matrix)->required();
  ktheory->add_flag("--explain", explain);

  int r = 10, order = 2;
  std::string model = "scalar";
  auto* rokhlin = app.add_subcommand("rokhlin-demo", "tower averaging defect against 2 pi / r");
  rokhlin->add_option("--r", r)->check(CLI::PositiveNumber);
  rokhlin->add_option("--order", order)->check(CLI::PositiveNumber);
  rokhlin->add_option("--model", model)->check(CLI::IsMember({"scalar", "2x2"}));
  rokhlin->add_flag("--explain", explain);

  cli::ShiftOptions sopt;
  std::vector<int> corner, fullness;
  auto* shift = app.add_subcommand("shift", "phi^k images and corner reports");
  shift->add_option("--matrix", matrix_path)->required();
  shift->add_option("--element", sopt.element);
  shift->add_option("--phi-power", sopt.phi_power);
  shift->add_option("--corner", corner, "i j k")->expected(3);
  shift->add_option("--fullness", fullness, "i j")->expected(2);
  shift->add_flag("--explain", explain);

  int level = 4;
  double eps = 1e-6;
  WitnessOptions wopt;
  auto* witness = app.add_subcommand("witness", "innerness defect trace by level");
  witness->add_option("--matrix", matrix_path)->required();
  witness->add_option("--action", action_path)->required();
  witness->add_option("--level", level);
  witness->add_option("--eps", eps);
  witness->add_option("--seed", wopt.seed);
  witness->add_option("--jobs", wopt.jobs);
  witness->add_option("--budget", wopt.budget);
  witness->add_option("--restarts", wopt.restarts);
  witness->add_flag("--explain", explain);

  CLI11_PARSE(app, argc, argv);

  try {
    cli::Report rep;
    if (*analyze) {
      if (graph_path.empty() && matrix_path.empty()) fail(ErrorKind::Parse, "analyze needs --matrix or --graph");
      rep = graph_path.empty() ? cli::cmd_analyze_file(matrix_path) : cli::cmd_analyze_graph_file(graph_path);
    } else if (*action) {
      if (verify->count() > 0) {
        if (!verify_mode.empty() && verify_mode != "oracle") fail(ErrorKind::Parse, "--verify takes no value or 'oracle'");
        aopt.verify = true;
        aopt.oracle = verify_mode == "oracle";
      }
      if (cocycle >= 0) aopt.cocycle = cocycle;
      if (fixed >= 0) aopt.fixed = fixed;
      if (!witness_args.empty()) {
        aopt.witness_level = std::stoi(witness_args[0]);
        aopt.witness_eps = std::stod(witness_args[1]);
      }
      rep = cli::cmd_action(parse_matrix(cli::read_file(matrix_path)), cli::read_file(action_path), aopt);
    } else if (*ktheory) {
      rep = cli::cmd_ktheory(parse_matrix(cli::read_file(kt_matrix)));
    } else if (*rokhlin) {
      rep = cli::cmd_rokhlin_demo(r, order, model);
    } else if (*shift) {
      if (!corner.empty()) sopt.corner = corner;
      if (!fullness.empty()) sopt.fullness = fullness;
      rep = cli::cmd_shift(parse_matrix(cli::read_file(matrix_path)), sopt);
    } else if (*witness) {
      const ZeroOneMatrix a = parse_matrix(cli::read_file(matrix_path));
      rep = cli::cmd_witness(CKAlgebra(a), parse_action(cli::read_file(action_path), a.size()), level, eps, wopt);
    }
    std::cout << rep.render(explain);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Parse);
  } catch (const std::out_of_range& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Parse);
  }
}

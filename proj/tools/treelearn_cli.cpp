// Command-line front end: sampling, learning, thresholds, sample-size
// bounds, the minimax family, declarative experiments, model validation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treelearn/treelearn.hpp"

namespace {

using namespace treelearn;

ChannelSpec parse_channel(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  ChannelSpec ch;
  if (kind == "identity")
    ch.kind = ChannelKind::identity;
  else if (kind == "erasure")
    ch.kind = ChannelKind::erasure;
  else if (kind == "bsc")
    ch.kind = ChannelKind::binary_symmetric;
  else if (kind == "msym")
    ch.kind = ChannelKind::m_ary_symmetric;
  else
    throw CLI::ValidationError("channel", "unknown kind '" + kind + "'");
  if (colon != std::string::npos) {
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) ch.q.push_back(std::stod(tok));
  }
  return ch;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void print_tree(std::ostream& os, const Tree& t) {
  for (const Edge& e : t.edges()) os << e.a << "," << e.b << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tree-structured MRF learning toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "csv";
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  app.add_option("--format", format, "csv or tsv")
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->capture_default_str();

  // --- sample ---------------------------------------------------------
  auto* cmd_sample = app.add_subcommand("sample", "draw i.i.d. rows from a model");
  std::string sample_model, sample_out;
  std::int64_t sample_n = 0;
  std::string sample_channel;
  cmd_sample->add_option("--model", sample_model, "model JSON file")->required();
  cmd_sample->add_option("--n", sample_n, "number of rows")->required();
  cmd_sample->add_option("--channel", sample_channel,
                         "optional noise, e.g. bsc:0.1 or erasure:0.1,0.2");
  cmd_sample->add_option("--out", sample_out, "output file (default stdout)");

  // --- learn ----------------------------------------------------------
  auto* cmd_learn = app.add_subcommand("learn", "Chow-Liu tree from a dataset");
  std::string learn_data, learn_estimator = "plugin_mi", learn_q;
  cmd_learn->add_option("--data", learn_data, "dataset file")->required();
  cmd_learn->add_option("--estimator", learn_estimator, "plugin_mi or corrected_correlation")
      ->check(CLI::IsMember({"plugin_mi", "corrected_correlation"}));
  cmd_learn->add_option("--q", learn_q,
                        "flip probabilities for corrected_correlation, e.g. 0.01,0.3,0.3");

  // --- threshold ------------------------------------------------------
  auto* cmd_thr = app.add_subcommand("threshold", "information threshold of a model");
  std::string thr_model, thr_method = "local", thr_channel;
  cmd_thr->add_option("--model", thr_model, "model JSON file")->required();
  cmd_thr->add_option("--method", thr_method, "brute_force or local")
      ->check(CLI::IsMember({"brute_force", "local"}));
  cmd_thr->add_option("--channel", thr_channel, "noisy threshold for this channel");

  // --- bound ----------------------------------------------------------
  auto* cmd_bound = app.add_subcommand("bound", "sufficient sample-size calculators");
  std::string bound_regime = "finite_alphabet", bound_form = "theorem";
  double bound_thr = 0.0, bound_delta = 0.0;
  int bound_p = 0;
  double bound_c = 0.0, bound_c1 = 0.0, bound_c2 = 0.0, bound_C = 0.0;
  std::uint64_t bound_at = 0;
  cmd_bound->add_option("--regime", bound_regime, "bound regime")
      ->check(CLI::IsMember(
          {"countable_c_lt2", "finite_alphabet", "countable_c_ge2", "noisy"}));
  cmd_bound->add_option("--threshold", bound_thr, "information threshold in bits")
      ->required();
  cmd_bound->add_option("--p", bound_p, "node count")->required();
  cmd_bound->add_option("--delta", bound_delta, "failure probability")->required();
  cmd_bound->add_option("--c", bound_c, "tail exponent c");
  cmd_bound->add_option("--c1", bound_c1, "tail constant c1");
  cmd_bound->add_option("--c2", bound_c2, "tail constant c2");
  cmd_bound->add_option("--C", bound_C, "explicit bias constant");
  cmd_bound->add_option("--form", bound_form, "theorem or proof")
      ->check(CLI::IsMember({"theorem", "proof"}));
  cmd_bound->add_option("--at", bound_at,
                        "also report the failure-probability bound at this n");

  // --- converse -------------------------------------------------------
  auto* cmd_conv = app.add_subcommand("converse", "minimax model family and Fano bound");
  int conv_p = 5, conv_ell = 0;
  double conv_rho_a = 0.6, conv_rho_b = 0.3, conv_eta = 0.01;
  cmd_conv->add_option("--p", conv_p, "odd node count >= 5")->capture_default_str();
  cmd_conv->add_option("--rho-a", conv_rho_a, "strong edge correlation")
      ->capture_default_str();
  cmd_conv->add_option("--rho-b", conv_rho_b, "weak edge correlation")
      ->capture_default_str();
  cmd_conv->add_option("--ell", conv_ell, "interpolation index")->capture_default_str();
  cmd_conv->add_option("--eta", conv_eta, "threshold bound for the Fano sample bound")
      ->capture_default_str();

  // --- experiment -----------------------------------------------------
  auto* cmd_exp = app.add_subcommand("experiment", "Monte Carlo sweep from a config file");
  std::string exp_config;
  cmd_exp->add_option("--config", exp_config, "experiment config JSON")->required();

  // --- validate -------------------------------------------------------
  auto* cmd_val = app.add_subcommand("validate", "model admissibility report");
  std::string val_model;
  cmd_val->add_option("--model", val_model, "model JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  const char sep = format == "tsv" ? '\t' : ',';

  try {
    if (*cmd_sample) {
      const DiscreteTreeModel m = load_model_file(sample_model);
      Dataset ds = sample(m, sample_n, seed);
      if (!sample_channel.empty())
        ds = apply(parse_channel(sample_channel), ds, substream_seed(seed, 1));
      if (sample_out.empty()) {
        write_dataset(std::cout, ds, sep);
      } else {
        std::ofstream os(sample_out);
        if (!os) throw std::runtime_error("cannot write " + sample_out);
        write_dataset(os, ds, sep);
      }
    } else if (*cmd_learn) {
      std::ifstream is(learn_data);
      if (!is) throw std::runtime_error("cannot read " + learn_data);
      const Dataset ds = read_dataset(is);
      if (learn_estimator == "plugin_mi") {
        print_tree(std::cout, chow_liu(ds));
      } else {
        std::vector<double> q = learn_q.empty() ? std::vector<double>{0.0}
                                                : parse_doubles(learn_q);
        const auto rho = preprocess_binary_correlations(ds, q);
        WeightedPairs w(ds.node_count);
        for (int i = 1; i <= ds.node_count; ++i)
          for (int j = i + 1; j <= ds.node_count; ++j)
            w.at(i, j) = binary_mi_bits(rho[i - 1][j - 1]);
        print_tree(std::cout, mst(w));
      }
    } else if (*cmd_thr) {
      const DiscreteTreeModel m = load_model_file(thr_model);
      if (thr_channel.empty()) {
        const auto method = thr_method == "local" ? ThresholdMethod::local
                                                  : ThresholdMethod::brute_force;
        const ThresholdReport r = information_threshold(m, method);
        std::cout << "method: " << to_string(r.method) << "\n"
                  << "value_bits: " << format_double(r.value_bits) << "\n"
                  << "argmin: " << to_string(r.argmin) << "\n";
      } else {
        const ChannelSpec ch = parse_channel(thr_channel);
        const ThresholdReport r = noisy_information_threshold(m, ch);
        std::cout << "method: " << to_string(r.method) << "\n"
                  << "value_bits: " << format_double(r.value_bits) << "\n"
                  << "argmin: " << to_string(r.argmin) << "\n"
                  << "verdict: "
                  << (r.value_bits > 0.0
                          ? "positive (raw-data learning feasible)"
                          : r.value_bits < 0.0
                                ? "negative (raw-data learning converges to a wrong tree)"
                                : "zero (ties; recovery not guaranteed)")
                  << "\n";
      }
    } else if (*cmd_bound) {
      BoundQuery q;
      q.threshold_bits = bound_thr;
      q.p = bound_p;
      q.delta = bound_delta;
      q.form = bound_form == "proof" ? BoundForm::proof : BoundForm::theorem;
      if (bound_regime == "countable_c_lt2") q.regime = BoundRegime::countable_c_lt2;
      if (bound_regime == "finite_alphabet") q.regime = BoundRegime::finite_alphabet;
      if (bound_regime == "countable_c_ge2") q.regime = BoundRegime::countable_c_ge2;
      if (bound_regime == "noisy") q.regime = BoundRegime::noisy;
      if (bound_c1 > 0.0 || bound_c2 > 0.0) q.tail = TailParams{bound_c, bound_c1, bound_c2};
      else if (bound_c > 0.0) q.bias_exponent_c = bound_c;
      if (bound_C > 0.0) q.explicit_C = bound_C;
      if (q.tail) {
        const auto bc = bias_constant(*q.tail);
        std::cout << "bias_constant: " << format_double(bc.value)
                  << " (integral: quadrature " << format_double(bc.integral_quadrature)
                  << ", closed form " << format_double(bc.integral_closed_form) << ")\n";
      }
      const SufficientN r = sufficient_n(q);
      std::cout << "form: " << bound_form
                << "  (log(p/delta) natural, log^2 n base 2)\n";
      if (!r.feasible) {
        std::cout << "result: infeasible (" << r.reason << ")\n";
      } else {
        std::cout << "minimal_n: " << r.n << "\n"
                  << "main_inequality: n/log2^2(n) = " << format_double(r.main_lhs)
                  << " >= " << format_double(r.main_rhs) << "\n"
                  << "side_margin: " << format_double(r.side_margin) << "\n";
      }
      if (bound_at >= 3) {
        const FailureBound fb = failure_probability_bound(bound_at, q);
        std::cout << "failure_bound_at_n=" << bound_at << ": ";
        if (!fb.side_condition_ok)
          std::cout << "vacuous (side condition violated)\n";
        else
          std::cout << format_double(fb.value) << (fb.vacuous ? " (vacuous)" : "") << "\n";
      }
    } else if (*cmd_conv) {
      const FanoFamily fam = build_fano_family(
          conv_p, 2, binary_symmetric_joint(conv_rho_a),
          binary_symmetric_joint(conv_rho_b), conv_ell);
      std::cout << "family: p=" << fam.p << " M=" << fam.M << " ell=" << fam.ell
                << "  members=" << (1 + fam.alternatives.size()) << "\n";
      const ThresholdReport base =
          information_threshold(fam.base, ThresholdMethod::brute_force);
      std::cout << "I_threshold[M0]: " << format_double(base.value_bits) << " bits ("
                << to_string(base.argmin) << ")\n";
      for (std::size_t k = 0; k < fam.replaced.size(); ++k) {
        const int i = fam.replaced[k];
        const auto& mi = fam.alternatives[k];
        const ThresholdReport r = information_threshold(mi, ThresholdMethod::brute_force);
        std::cout << "M" << i << ": I_threshold " << format_double(r.value_bits)
                  << " bits, KL(M0||M" << i
                  << ") = " << format_double(kl_between_models_nats(fam.base, mi))
                  << " nats (closed " << format_double(kl_m0_to_mi_closed_nats(fam, i))
                  << "), KL(M" << i
                  << "||M0) = " << format_double(kl_between_models_nats(mi, fam.base))
                  << " nats (closed " << format_double(kl_mi_to_m0_closed_nats(fam, i))
                  << ")\n";
      }
      std::cout << "fano_sample_bound(p=" << conv_p << ", eta=" << conv_eta
                << "): " << fano_sample_bound(conv_p, conv_eta) << "\n";
    } else if (*cmd_exp) {
      ExperimentConfig cfg = load_experiment_config(exp_config);
      if (format != "csv") cfg.separator = sep;
      const auto curves = run_experiment(cfg, threads);
      const std::string text = csv_text(curves, cfg.separator);
      if (cfg.output_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(cfg.output_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + cfg.output_path);
        os << text;
        std::cout << "wrote " << cfg.output_path << "\n";
      }
    } else if (*cmd_val) {
      const DiscreteTreeModel m = load_model_file(val_model);
      const auto report = validate(m);
      if (m.tail)
        std::cout << "note: tail metadata (c=" << m.tail->c << ", c1=" << m.tail->c1
                  << ", c2=" << m.tail->c2 << ") is caller-asserted\n";
      if (report.empty()) {
        std::cout << "ok\n";
      } else {
        for (const auto& line : report) std::cout << "violation: " << line << "\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

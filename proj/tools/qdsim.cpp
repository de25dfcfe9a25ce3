#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "qdsim/analysis.hpp"

namespace {

using namespace qdsim;

struct Options {
  std::string protocol;
  std::string alice_bits;
  std::string bob_bits;
  std::size_t n = 4;
  std::size_t delta1 = 4;
  std::size_t delta2 = 4;
  std::size_t delta3 = 4;
  std::uint64_t seed = 0;
  std::string adversary = "none";
  std::size_t trials = 10000;
  std::string output;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("cannot write output file: " + path);
}

void maybe_write_json(const std::string& path, const json& j) {
  if (!path.empty()) write_file(path, j.dump(2) + "\n");
}

int cmd_run(const Options& opt, bool bell_shape_flags_given) {
  const Protocol proto = protocol_from(opt.protocol);
  if (proto != Protocol::Bell && bell_shape_flags_given)
    throw std::invalid_argument(
        "--n/--delta1/--delta2/--delta3 apply to the bell protocol only");
  const AdversaryModel adv{adversary_kind_from(opt.adversary),
                           EveBasisPolicy::UniformZX};
  const std::size_t need = proto == Protocol::Bell ? 2 * opt.n : 2;
  const std::string alice =
      opt.alice_bits.empty() ? std::string(need, '0') : opt.alice_bits;
  const std::string bob =
      opt.bob_bits.empty() ? std::string(need, '0') : opt.bob_bits;
  require_bits(alice, need, "alice-bits");
  require_bits(bob, need, "bob-bits");

  RunOutcome out = [&] {
    if (proto == Protocol::Bell) {
      BellRunParams p;
      p.n = opt.n;
      p.delta1 = opt.delta1;
      p.delta2 = opt.delta2;
      p.delta3 = opt.delta3;
      p.seed = opt.seed;
      p.adversary = adv;
      return run_bell(alice, bob, p);
    }
    if (proto == Protocol::W) {
      WRunParams p;
      p.seed = opt.seed;
      p.adversary = adv;
      return run_w(alice, bob, p);
    }
    GhzRunParams p;
    p.seed = opt.seed;
    p.adversary = adv;
    return run_ghz(alice, bob, p);
  }();

  maybe_write_json(opt.output, out.transcript.to_json());
  if (out.status == RunStatus::Aborted) {
    std::cout << "aborted: " << out.abort_check << " check failed\n";
    return 2;
  }
  std::cout << "alice_decoded=" << out.alice_decoded
            << " bob_decoded=" << out.bob_decoded << "\n";
  return 0;
}

int cmd_audit(const Options& opt) {
  const Protocol proto = protocol_from(opt.protocol);
  Rng msg_rng = Rng::substream(opt.seed, "audit");
  std::string alice, bob;
  for (int i = 0; i < 2; ++i) alice += msg_rng.coin() ? '1' : '0';
  for (int i = 0; i < 2; ++i) bob += msg_rng.coin() ? '1' : '0';

  const RunOutcome run = [&] {
    if (proto == Protocol::Bell) {
      BellRunParams p;
      p.n = 1;
      p.delta1 = p.delta2 = p.delta3 = 0;
      p.seed = opt.seed;
      return run_bell(alice, bob, p);
    }
    if (proto == Protocol::W) {
      WRunParams p;
      p.seed = opt.seed;
      p.checks_enabled = false;
      return run_w(alice, bob, p);
    }
    GhzRunParams p;
    p.seed = opt.seed;
    p.checks_enabled = false;
    return run_ghz(alice, bob, p);
  }();

  const LeakageReport rep = eve_entropy(proto, run.transcript.public_view());
  maybe_write_json(opt.output, rep.to_json());
  std::cout << "protocol=" << to_string(rep.protocol) << "\n"
            << "per_announcement_entropy_bits=" << rep.per_announcement_entropy_bits
            << "\n"
            << "mutual_information_bits=" << rep.mutual_information_bits << "\n"
            << "consistent_assignments=" << rep.consistent_assignments << "\n";
  return 0;
}

int cmd_attack(const Options& opt) {
  const Protocol proto = protocol_from(opt.protocol);
  const AdversaryModel adv{adversary_kind_from(opt.adversary),
                           EveBasisPolicy::UniformZX};
  const DetectionStats stats =
      detection_stats(proto, adv, opt.trials, opt.seed);
  maybe_write_json(opt.output, stats.to_json());
  auto line = [](const char* name, const RateEstimate& r) {
    std::cout << name << " rate=" << r.rate << " hits=" << r.hits
              << " trials=" << r.trials << " ci3=[" << r.ci3_lo << ", "
              << r.ci3_hi << "]\n";
  };
  line("per_decoy", stats.per_decoy);
  if (stats.has_check_pair) line("per_check_pair", stats.per_check_pair);
  line("abort_delta3_8", stats.abort_delta3_8);
  return 0;
}

int cmd_table1(const Options& opt) {
  maybe_write_json(opt.output, table1_json());
  std::cout << table1_text();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"simulator and analysis toolkit for entanglement-based "
               "quantum dialogue protocols"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "execute one dialogue run");
  run->add_option("--protocol", opt.protocol, "bell, w, or ghz")->required();
  run->add_option("--alice-bits", opt.alice_bits,
                  "Alice's message bits (default: all zeros)");
  run->add_option("--bob-bits", opt.bob_bits,
                  "Bob's message bits (default: all zeros)");
  CLI::Option* n_opt =
      run->add_option("--n", opt.n, "message pairs (bell only, default 4)");
  CLI::Option* d1_opt = run->add_option(
      "--delta1", opt.delta1, "first-check pairs (bell only, default 4)");
  CLI::Option* d2_opt = run->add_option(
      "--delta2", opt.delta2, "second-check pairs (bell only, default 4)");
  CLI::Option* d3_opt = run->add_option(
      "--delta3", opt.delta3, "decoy photons (bell only, default 4)");
  run->add_option("--seed", opt.seed, "RNG seed (default 0)")
      ->envname("QDSIM_SEED");
  run->add_option("--adversary", opt.adversary,
                  "none, passive, intercept-resend, or measure-resend");
  run->add_option("--output", opt.output, "write the transcript JSON here");

  CLI::App* audit =
      app.add_subcommand("audit", "leakage audit of an honest run");
  audit->add_option("--protocol", opt.protocol, "bell, w, or ghz")->required();
  audit->add_option("--seed", opt.seed, "RNG seed (default 0)")
      ->envname("QDSIM_SEED");
  audit->add_option("--output", opt.output, "write the leakage report here");

  CLI::App* attack =
      app.add_subcommand("attack", "Monte-Carlo attack-detection statistics");
  attack->add_option("--protocol", opt.protocol, "bell, w, or ghz")->required();
  attack->add_option("--adversary", opt.adversary,
                     "none, passive, intercept-resend, or measure-resend");
  attack->add_option("--trials", opt.trials, "trial count (default 10000)");
  attack->add_option("--seed", opt.seed, "RNG seed (default 0)")
      ->envname("QDSIM_SEED");
  attack->add_option("--output", opt.output, "write the statistics here");
  attack->parse_complete_callback([&] {
    if (attack->count("--adversary") == 0) opt.adversary = "intercept-resend";
  });

  CLI::App* table1 =
      app.add_subcommand("table1", "efficiency comparison table");
  table1->add_option("--output", opt.output, "write the table JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const bool shape_given = n_opt->count() > 0 || d1_opt->count() > 0 ||
                               d2_opt->count() > 0 || d3_opt->count() > 0;
      return cmd_run(opt, shape_given);
    }
    if (audit->parsed()) return cmd_audit(opt);
    if (attack->parsed()) return cmd_attack(opt);
    return cmd_table1(opt);
  } catch (const qdsim::IntegrityError& e) {
    std::cerr << "integrity failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

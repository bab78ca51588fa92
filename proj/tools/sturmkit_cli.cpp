// Copyright 2026 The sturmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sturmkit: run one experiment and write its table.
//
// Exit status: 0 all assertions passed, 2 an assertion failed, 3 inconclusive
// or budget exceeded, 1 usage or configuration error.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sturmkit/harness.hpp"

namespace {

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"b", "common base b"},
    {"r", "first base"},
    {"s", "second base"},
    {"m", "exponent with s = b^m (checked against r and s)"},
    {"l", "exponent with r = b^l (checked against r and s)"},
    {"rho", "exponent of the source base b^rho"},
    {"sigma", "exponent of the target base b^sigma"},
    {"mu", "lcm(rho, sigma), checked when given"},
    {"slope", "partial quotients, e.g. \"1,(1)\" or \"random:7:9\""},
    {"nmax", "largest factor length n"},
    {"prefix", "digit budget in the widest base"},
    {"mode", "empirical or certified"},
    {"witnesses", "number of quasi-Sturmian witnesses"},
    {"seed", "index of the first witness"},
    {"xi", "rational number num/den instead of a Sturmian seed (probe)"},
    {"out", "output path (default: standard output)"},
    {"format", "csv or json"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace sturmkit;
  CLI::App app{"Factor complexity of real numbers in pairs of integer bases"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"thm2", "p(n,xi,r) + p(n,xi,s) - 2n = m + l for dependent bases r = b^l, s = b^m"},
      {"lemma42", "split-base inequality p(nd) >= (n+1)d and equality p(n) = n + d"},
      {"thm3", "quasi-Sturmian expansions stay quasi-Sturmian under base splitting and regrouping"},
      {"corollary", "find n with p(n,xi,s) >= n + 2 for xi Sturmian in base r"},
      {"probe", "sum_minus_2n table for multiplicatively independent bases"},
      {"selftest", "small instances of every experiment"},
  };

  std::map<std::string, std::string> values;
  std::map<std::string, std::vector<CLI::Option*>> options;
  std::string config_path;
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value configuration file; flags override it");
    for (const Flag& f : kFlags)
      options[f.key].push_back(sub->add_option(std::string("--") + f.key, values[f.key], f.help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    harness::ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw precondition_error("cannot read config file '" + config_path + "'");
      cfg = harness::parse_config(in);
    }
    cfg.experiment = app.get_subcommands().front()->get_name();
    for (const auto& [key, opts] : options)
      for (const CLI::Option* opt : opts)
        if (opt->count() > 0) harness::set_option(cfg, key, values[key]);

    const harness::Report report = harness::run_experiment(cfg);
    if (cfg.out.empty()) {
      harness::write_report(std::cout, report, cfg.format);
    } else {
      std::ofstream out(cfg.out, std::ios::binary);
      if (!out) throw precondition_error("cannot write '" + cfg.out + "'");
      harness::write_report(out, report, cfg.format);
    }
    for (const auto& note : report.notes) std::cerr << "sturmkit: " << note << '\n';
    return harness::exit_code(report.verdict);
  } catch (const budget_exceeded& e) {
    std::cerr << "sturmkit: budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sturmkit: " << e.what() << '\n';
    return 1;
  }
}

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

// Experiments over pairs of bases: configuration, execution and reporting.
//
// Every experiment returns a Report: an ordered table plus metadata and a
// verdict. Reports are pure functions of the configuration, so identical
// configurations serialize to identical bytes.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sturmkit/complexity.hpp"
#include "sturmkit/expansion.hpp"
#include "sturmkit/sturmian.hpp"
#include "sturmkit/word.hpp"

namespace sturmkit::harness {

// ---------------------------------------------------------------------------
// Bases

/// n = root^exponent with the largest possible exponent.
struct PerfectPower {
  std::uint64_t root;
  std::uint64_t exponent;
};

inline PerfectPower perfect_power(std::uint64_t n) {
  if (n < 2) throw precondition_error("perfect_power: need n >= 2");
  for (std::uint64_t e = 63; e >= 2; --e) {
    std::uint64_t lo = 2, hi = std::uint64_t{1} << (64 / e + 1);
    while (lo <= hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      const auto v = checked_pow(mid, e, n);
      if (v && *v == n) return {mid, e};
      if (v)
        lo = mid + 1;
      else
        hi = mid - 1;
    }
  }
  return {n, 1};
}

/// r = b^l and s = b^m with gcd(m, l) = 1, so (m, l) is the least pair with r^m = s^l.
struct DependentBases {
  std::uint64_t b, l, m, r, s;
};

inline std::optional<DependentBases> dependent_bases(std::uint64_t r, std::uint64_t s) {
  const PerfectPower pr = perfect_power(r), ps = perfect_power(s);
  if (pr.root != ps.root) return std::nullopt;
  const std::uint64_t g = std::gcd(pr.exponent, ps.exponent);
  const auto b = checked_pow(pr.root, g, r);
  DependentBases out{*b, pr.exponent / g, ps.exponent / g, r, s};
  if (big_pow(r, out.m) != big_pow(s, out.l))
    throw precondition_error("dependent_bases: r^m != s^l");
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

enum class OutputFormat { csv, json };

/// Plain-text key=value configuration, one entry per line. The first entry
/// must be version=1; '#' starts a comment line.
struct ExperimentConfig {
  static constexpr int kVersion = 1;

  std::string experiment;
  std::optional<std::uint64_t> b, r, s, m, l, rho, sigma, mu;
  std::string slope = "1,(1)";
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> prefix;  // digit budget in the widest base
  ProfileMode mode = ProfileMode::certified;
  std::size_t witnesses = 5;
  std::uint64_t seed = 1;
  std::string xi;  // "num/den" selects a rational number instead of a Sturmian seed
  std::string out;
  OutputFormat format = OutputFormat::csv;
};

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    throw precondition_error("config: '" + key + "' expects a nonnegative integer, got '" + value + "'");
  try {
    return std::stoull(value);
  } catch (const std::out_of_range&) {
    throw precondition_error("config: '" + key + "' is out of range");
  }
}

inline void set_option(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto u = [&] { return parse_unsigned(key, value); };
  if (key == "experiment") cfg.experiment = value;
  else if (key == "b") cfg.b = u();
  else if (key == "r") cfg.r = u();
  else if (key == "s") cfg.s = u();
  else if (key == "m") cfg.m = u();
  else if (key == "l") cfg.l = u();
  else if (key == "rho") cfg.rho = u();
  else if (key == "sigma") cfg.sigma = u();
  else if (key == "mu") cfg.mu = u();
  else if (key == "slope") {
    parse_slope(value);
    cfg.slope = value;
  } else if (key == "nmax") cfg.n_max = u();
  else if (key == "prefix") cfg.prefix = u();
  else if (key == "witnesses") cfg.witnesses = u();
  else if (key == "seed") cfg.seed = u();
  else if (key == "xi") cfg.xi = value;
  else if (key == "out") cfg.out = value;
  else if (key == "mode") {
    if (value == "certified") cfg.mode = ProfileMode::certified;
    else if (value == "empirical") cfg.mode = ProfileMode::empirical;
    else throw precondition_error("config: mode must be empirical or certified");
  } else if (key == "format") {
    if (value == "csv") cfg.format = OutputFormat::csv;
    else if (value == "json") cfg.format = OutputFormat::json;
    else throw precondition_error("config: format must be csv or json");
  } else if (key != "version") {
    throw precondition_error("config: unknown key '" + key + "'");
  }
}

inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  bool versioned = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw precondition_error("config line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string t) {
      const auto x = t.find_first_not_of(" \t\r"), y = t.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string{} : t.substr(x, y - x + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!versioned) {
      if (key != "version")
        throw precondition_error("config: first entry must be version=" +
                                 std::to_string(ExperimentConfig::kVersion));
      if (value != std::to_string(ExperimentConfig::kVersion))
        throw precondition_error("config: unsupported version '" + value + "'");
      versioned = true;
      continue;
    }
    set_option(cfg, key, value);
  }
  if (!versioned) throw precondition_error("config: missing version line");
  return cfg;
}

/// (b, l, m) recomputed from r and s; explicit b, m, l must agree with it.
inline DependentBases resolve_dependent(const ExperimentConfig& cfg) {
  std::uint64_t r, s;
  if (cfg.r && cfg.s) {
    r = *cfg.r;
    s = *cfg.s;
  } else if (cfg.b && cfg.m && cfg.l) {
    const auto rr = checked_pow(*cfg.b, *cfg.l, kMaxAlphabet), ss = checked_pow(*cfg.b, *cfg.m, kMaxAlphabet);
    if (!rr || !ss) throw precondition_error("config: b^l or b^m exceeds 2^31");
    r = *rr;
    s = *ss;
  } else {
    throw precondition_error("config: need r and s, or b, m and l");
  }
  if (r < 2 || s < 2) throw precondition_error("config: bases must be at least 2");
  if (r == s) throw precondition_error("config: r and s must differ");
  const auto db = dependent_bases(r, s);
  if (!db)
    throw precondition_error("config: bases " + std::to_string(r) + " and " + std::to_string(s) +
                             " are multiplicatively independent");
  if (cfg.m && *cfg.m != db->m) throw precondition_error("config: m is not the minimal exponent");
  if (cfg.l && *cfg.l != db->l) throw precondition_error("config: l is not the minimal exponent");
  if (cfg.b && *cfg.b != db->b) throw precondition_error("config: b inconsistent with r and s");
  return *db;
}

// ---------------------------------------------------------------------------
// Reports

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "fail";
}

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 2;
    case Verdict::inconclusive: return 3;
  }
  return 2;
}

using Json = nlohmann::ordered_json;

struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Verdict verdict = Verdict::pass;
  std::vector<std::string> notes;

  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : meta)
      if (k == key) {
        v = value;
        return;
      }
    meta.emplace_back(key, value);
  }
  template <class T>
  void set(const std::string& key, const T& value) {
    set(key, std::to_string(value));
  }
  const std::string* get(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return &v;
    return nullptr;
  }
  void fail(std::string why) {
    verdict = Verdict::fail;
    notes.push_back(std::move(why));
  }
  void inconclusive(std::string why) {
    if (verdict == Verdict::pass) verdict = Verdict::inconclusive;
    notes.push_back(std::move(why));
  }
  /// Merges a sub-report: the worst verdict wins.
  void absorb(const Report& other) {
    if (other.verdict == Verdict::fail) verdict = Verdict::fail;
    else if (other.verdict == Verdict::inconclusive && verdict == Verdict::pass) verdict = Verdict::inconclusive;
    for (const auto& n : other.notes) notes.push_back(other.experiment + ": " + n);
  }
};

inline std::string cell_text(const Json& cell) {
  return cell.is_string() ? cell.get<std::string>() : cell.dump();
}

/// Header row, data rows, then "# key=value" footers, notes and the verdict.
inline void write_csv(std::ostream& os, const Report& rep) {
  for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << rep.columns[i];
  os << '\n';
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  os << "# experiment=" << rep.experiment << '\n';
  for (const auto& [k, v] : rep.meta) os << "# " << k << '=' << v << '\n';
  for (const auto& n : rep.notes) os << "# note: " << n << '\n';
  os << "# verdict=" << to_string(rep.verdict) << '\n';
}

inline Json to_json(const Report& rep) {
  Json j;
  j["experiment"] = rep.experiment;
  j["verdict"] = to_string(rep.verdict);
  Json meta = Json::object();
  for (const auto& [k, v] : rep.meta) meta[k] = v;
  j["meta"] = meta;
  j["columns"] = rep.columns;
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size() && i < rep.columns.size(); ++i) obj[rep.columns[i]] = row[i];
    rows.push_back(obj);
  }
  j["rows"] = rows;
  j["notes"] = rep.notes;
  return j;
}

inline void write_report(std::ostream& os, const Report& rep, OutputFormat format) {
  if (format == OutputFormat::json)
    os << to_json(rep).dump(2) << '\n';
  else
    write_csv(os, rep);
}

// ---------------------------------------------------------------------------
// Shared pieces

/// p_r + p_s - 2n for one n, with the status of each count.
struct ResultRow {
  std::size_t n;
  std::uint64_t p_r, p_s;
  std::int64_t sum_minus_2n;
  Status status_r, status_s;
};

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {"n", "p_r", "p_s", "sum_minus_2n", "status_r", "status_s"};
  return cols;
}

inline std::vector<ResultRow> result_rows(const ComplexityProfile& pr, const ComplexityProfile& ps) {
  std::vector<ResultRow> rows;
  const std::size_t top = std::min(pr.n_max(), ps.n_max());
  for (std::size_t n = 1; n <= top; ++n) {
    const auto a = pr.count(n), c = ps.count(n);
    rows.push_back({n, a, c, static_cast<std::int64_t>(a + c) - 2 * static_cast<std::int64_t>(n), pr.status(n),
                    ps.status(n)});
  }
  return rows;
}

inline void append_rows(Report& rep, const std::vector<ResultRow>& rows) {
  rep.columns = result_columns();
  for (const auto& row : rows)
    rep.rows.push_back({row.n, row.p_r, row.p_s, row.sum_minus_2n, to_string(row.status_r), to_string(row.status_s)});
}

inline std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// W phi(s): a certified quasi-Sturmian word over a digit alphabet.
struct Witness {
  FiniteWord head;
  Morphism phi;
  std::string slope;

  InfiniteWordSource source() const {
    return prepend(head, phi.apply(characteristic_word(parse_slope(slope)))).renamed(describe());
  }
  std::string describe() const {
    std::string images;
    for (Letter a = 0; a < 2; ++a) {
      if (a) images += ";";
      images += std::to_string(a) + "->" + to_string(phi.image(a));
    }
    return "W=" + to_string(head) + " phi=" + images + " slope=" + slope;
  }
};

/// Deterministic witness number `index` over the given alphabet: images of
/// length 1 to 3 with phi(01) != phi(10), and a head of length 0 to 3.
inline Witness quasi_sturmian_witness(std::uint32_t alphabet, std::uint64_t index, const std::string& slope) {
  std::uint64_t state = 0x5EED0000ULL ^ (index * 0x10001ULL) ^ alphabet;
  for (;;) {
    std::vector<FiniteWord> images;
    for (int a = 0; a < 2; ++a) {
      FiniteWord img(alphabet);
      const std::size_t len = 1 + splitmix(state) % 3;
      for (std::size_t i = 0; i < len; ++i) img.push_back(static_cast<Letter>(splitmix(state) % alphabet));
      images.push_back(std::move(img));
    }
    Morphism phi(std::move(images), alphabet);
    if (!order_distinct(phi)) continue;
    FiniteWord head(alphabet);
    const std::size_t h = splitmix(state) % 4;
    for (std::size_t i = 0; i < h; ++i) head.push_back(static_cast<Letter>(splitmix(state) % alphabet));
    return Witness{std::move(head), std::move(phi), slope};
  }
}

/// Slopes used by sweeps: three fixed quadratic slopes, then random a_k <= 9.
inline std::vector<std::string> standard_slopes(std::size_t count) {
  std::vector<std::string> out = {"1,(1)", "2,(1)", "1,2,(3)"};
  for (std::uint64_t seed = 1; out.size() < count; ++seed) out.push_back("random:" + std::to_string(seed) + ":9");
  out.resize(count);
  return out;
}

inline ProfileOptions budget_options(std::size_t max_prefix) { return ProfileOptions{0, max_prefix}; }

/// The label the profile would get after one more doubling of its prefix.
inline ClassLabel classify_after_doubling(const InfiniteWordSource& source, const ComplexityProfile& prof) {
  auto spec = factor_spectrum(source.prefix(2 * prof.prefix_length));
  ComplexityProfile wider = prof;
  wider.prefix_length = 2 * prof.prefix_length;
  for (std::size_t n = 1; n <= wider.n_max(); ++n)
    wider.entries[n - 1].count = n < spec.size() ? spec[n] : 0;
  return classify(wider);
}

/// Sturmian words are the quasi-Sturmian words with k = 1.
inline bool quasi_sturmian_label(const ClassLabel& label) {
  return label.kind == WordClass::quasi_sturmian || label.kind == WordClass::sturmian;
}

inline std::string label_text(const ClassLabel& label) {
  std::string out = to_string(label.kind);
  if (label.kind == WordClass::quasi_sturmian)
    out += "(k=" + std::to_string(label.k) + ",n0=" + std::to_string(label.n0) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

/// p(n, xi, b^l) = n + m and p(n, xi, b^m) = n + l from the observed n0 on,
/// where xi has the Sturmian seed as its base-b^{ml} digits.
inline Report run_thm2_equality(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = "thm2";
  const DependentBases db = resolve_dependent(cfg);
  const std::size_t n_max = cfg.n_max.value_or(128);
  const std::size_t budget = cfg.prefix.value_or(100000);
  const std::uint64_t rho = db.m * db.l;
  rep.set("b", db.b);
  rep.set("r", db.r);
  rep.set("s", db.s);
  rep.set("m", db.m);
  rep.set("l", db.l);
  rep.set("slope", cfg.slope);
  rep.set("mode", std::string(cfg.mode == ProfileMode::certified ? "certified" : "empirical"));
  rep.set("expected", db.m + db.l);
  const auto pq = parse_slope(cfg.slope);
  if (pq.is_finite()) throw precondition_error("thm2: slope must be irrational");
  const DigitExpansion xi = word_to_xi(characteristic_word(pq), db.b, rho);
  const DigitExpansion er = split_expansion(xi, db.b, rho, db.l);
  const DigitExpansion es = split_expansion(xi, db.b, rho, db.m);
  ComplexityProfile pr, ps;
  try {
    pr = profile(er.digits, n_max, cfg.mode, budget_options(budget * db.m));
    ps = profile(es.digits, n_max, cfg.mode, budget_options(budget * db.l));
  } catch (const budget_exceeded& e) {
    rep.inconclusive(e.what());
    return rep;
  }
  rep.set("prefix_r", pr.prefix_length);
  rep.set("prefix_s", ps.prefix_length);
  const auto rows = result_rows(pr, ps);
  append_rows(rep, rows);
  for (const auto& row : rows)
    if (row.p_r <= row.n || row.p_s <= row.n)
      rep.fail("n=" + std::to_string(row.n) + ": a count is at most n on an irrational input");
  // Largest n where either equality fails; n0 is one past it.
  std::size_t n0 = 1;
  for (const auto& row : rows)
    if (row.p_r != row.n + db.m || row.p_s != row.n + db.l) n0 = row.n + 1;
  // Equality is only claimed eventually, so a window that never reaches it
  // does not refute anything.
  if (n0 > n_max) {
    rep.inconclusive("equality not reached by n=" + std::to_string(n_max) + ": p_r=" +
                     std::to_string(rows.back().p_r) + " p_s=" + std::to_string(rows.back().p_s));
    return rep;
  }
  rep.set("n0", n0);
  rep.set("limit", rows.back().sum_minus_2n);
  if (cfg.mode == ProfileMode::empirical && (!pr.stabilized || !ps.stabilized))
    rep.inconclusive("empirical profile did not stabilize within the prefix budget");
  return rep;
}

/// Inequality p(nd) >= (n+1)d on quasi-Sturmian witnesses and the equality
/// p(n) = n + d on the Sturmian seed, base b^rho split to base b^sigma.
inline Report lemma42_case(std::uint64_t b, std::uint64_t rho, std::uint64_t sigma, const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = "lemma42";
  if (sigma == 0 || rho % sigma != 0) throw precondition_error("lemma42: sigma must divide rho");
  const std::size_t d = rho / sigma;
  const std::uint32_t big = power_base(b, rho);
  const std::size_t n_max = cfg.n_max.value_or(120);
  const std::size_t budget = cfg.prefix.value_or(100000) * d;
  rep.set("b", b);
  rep.set("rho", rho);
  rep.set("sigma", sigma);
  rep.set("d", d);
  rep.columns = {"source", "sigma", "n", "length", "p", "bound", "relation", "holds"};
  auto emit = [&](const std::string& source, std::size_t n, std::size_t length, std::uint64_t p,
                  std::uint64_t bound, const char* relation, bool holds) {
    rep.rows.push_back({source, sigma, n, length, p, bound, relation, holds ? "yes" : "no"});
  };
  try {
    // Sturmian seed over {0, 1}: p(n) = n + d from an observed n0 on, so
    // p(dn) = d(n+1) once dn >= n0. Rows below n0 are reported only.
    const auto seed = split_source(b, rho, sigma, characteristic_word(parse_slope(cfg.slope)).widened(big));
    const auto prof = profile(seed, n_max, cfg.mode, budget_options(budget));
    std::size_t n0 = 1;
    for (std::size_t n = 1; n <= n_max; ++n)
      if (prof.count(n) != n + d) n0 = n + 1;
    if (n0 > n_max)
      rep.fail("sturmian seed: p(" + std::to_string(n_max) + ") = " + std::to_string(prof.count(n_max)) +
               ", expected " + std::to_string(n_max + d));
    else if (n_max - n0 < n0)
      rep.inconclusive("sturmian seed: equality tail from n0=" + std::to_string(n0) + " is too short for n_max=" +
                       std::to_string(n_max));
    rep.set("sturmian_n0", n0);
    for (std::size_t n = 1; n * d <= n_max; ++n)
      emit("sturmian", n, n * d, prof.count(n * d), d * (n + 1), n * d >= n0 ? "eq" : "eq-info",
           prof.count(n * d) == d * (n + 1));
    for (std::size_t i = 0; i < cfg.witnesses; ++i) {
      const Witness wit = quasi_sturmian_witness(big, cfg.seed + i, cfg.slope);
      const auto src = split_source(b, rho, sigma, wit.source());
      const auto wp = profile(src, n_max, cfg.mode, budget_options(budget));
      const std::string name = "witness " + std::to_string(cfg.seed + i);
      rep.set(name, wit.describe());
      // The inequality is asserted from n = 2 on; n = 1 is reported only.
      for (std::size_t n = 1; n * d <= n_max; ++n) {
        const bool ok = wp.count(n * d) >= (n + 1) * d;
        emit(name, n, n * d, wp.count(n * d), (n + 1) * d, n == 1 ? "ge-info" : "ge", ok);
        if (!ok && n >= 2)
          rep.fail(name + ": p(" + std::to_string(n * d) + ") < " + std::to_string((n + 1) * d));
      }
    }
  } catch (const budget_exceeded& e) {
    rep.inconclusive(e.what());
  }
  return rep;
}

inline Report run_lemma42(const ExperimentConfig& cfg) {
  if (cfg.r && cfg.s) {
    // Both splits of the pair's common base b^{ml}.
    const DependentBases db = resolve_dependent(cfg);
    Report rep = lemma42_case(db.b, db.m * db.l, db.l, cfg);
    const Report other = lemma42_case(db.b, db.m * db.l, db.m, cfg);
    rep.rows.insert(rep.rows.end(), other.rows.begin(), other.rows.end());
    rep.set("r", db.r);
    rep.set("s", db.s);
    rep.set("sigma", std::to_string(db.l) + "," + std::to_string(db.m));
    rep.set("d", std::to_string(db.m) + "," + std::to_string(db.l));
    for (const auto& [k, v] : other.meta)
      if (k == "sturmian_n0") rep.set("sturmian_n0_s", v);
    rep.absorb(other);
    return rep;
  }
  if (!cfg.b || !cfg.rho || !cfg.sigma) throw precondition_error("lemma42: need r and s, or b, rho and sigma");
  return lemma42_case(*cfg.b, *cfg.rho, *cfg.sigma, cfg);
}

/// Quasi-Sturmian base-b^rho witnesses stay quasi-Sturmian in every base
/// b^sigma with sigma | rho. With sigma given and not dividing rho, also
/// rebuilds the base-b^mu expansion (mu = lcm) from its two splits.
inline Report run_thm3_propagate(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = "thm3";
  const std::uint64_t b = cfg.b.value_or(2), rho = cfg.rho.value_or(4);
  const std::size_t n_max = cfg.n_max.value_or(100);
  const std::size_t budget = cfg.prefix.value_or(100000);
  const std::uint32_t big = power_base(b, rho);
  rep.set("b", b);
  rep.set("rho", rho);
  rep.set("slope", cfg.slope);
  rep.columns = {"witness", "base", "sigma", "class", "k", "n0", "after_doubling", "stable"};
  auto record = [&](const std::string& name, std::uint64_t sigma, const ComplexityProfile& prof,
                    const InfiniteWordSource& src) {
    const ClassLabel label = classify(prof);
    const ClassLabel again = classify_after_doubling(src, prof);
    const bool stable = label == again;
    rep.rows.push_back({name, power_base(b, sigma), sigma, to_string(label.kind), label.k, label.n0,
                        label_text(again), stable ? "yes" : "no"});
    if (!quasi_sturmian_label(label))
      rep.fail(name + " in base " + std::to_string(power_base(b, sigma)) + " classified " + to_string(label.kind) +
               (label.diagnostic.empty() ? "" : " (" + label.diagnostic + ")"));
    else if (!stable)
      rep.fail(name + " in base " + std::to_string(power_base(b, sigma)) + " changed label after doubling");
    return label;
  };
  try {
    for (std::size_t i = 0; i < cfg.witnesses; ++i) {
      const Witness wit = quasi_sturmian_witness(big, cfg.seed + i, cfg.slope);
      const std::string name = "witness " + std::to_string(cfg.seed + i);
      rep.set(name, wit.describe());
      for (std::uint64_t sigma = rho; sigma >= 1; --sigma) {
        if (rho % sigma) continue;
        const auto src = split_source(b, rho, sigma, wit.source());
        const std::size_t d = rho / sigma;
        record(name, sigma, profile(src, n_max, cfg.mode, budget_options(budget * d)), src);
      }
    }
    if (cfg.sigma && rho % *cfg.sigma != 0 && *cfg.sigma % rho != 0) {
      // Common base-b^mu seed, split to b^rho and b^sigma, regrouped back.
      const std::uint64_t sigma = *cfg.sigma, mu = std::lcm(rho, sigma);
      if (cfg.mu && *cfg.mu != mu) throw precondition_error("thm3: mu must be lcm(rho, sigma)");
      rep.set("sigma", sigma);
      rep.set("mu", mu);
      const std::uint32_t top = power_base(b, mu);
      for (std::size_t i = 0; i < cfg.witnesses; ++i) {
        const Witness wit = quasi_sturmian_witness(top, cfg.seed + i, cfg.slope);
        const std::string name = "lcm witness " + std::to_string(cfg.seed + i);
        rep.set(name, wit.describe());
        const InfiniteWordSource x = wit.source();
        const std::size_t check = 4096;
        for (std::uint64_t part : {rho, sigma}) {
          const auto split = split_source(b, mu, part, x);
          record(name, part, profile(split, n_max, cfg.mode, budget_options(budget * (mu / part))), split);
          const auto back = regroup(b, part, mu / part, split);
          if (!(back.prefix(check) == x.prefix(check)))
            rep.fail(name + ": regrouping base " + std::to_string(power_base(b, part)) + " digits does not recover the seed");
          const auto prof = profile(back, n_max, ProfileMode::empirical, budget_options(budget));
          const ClassLabel label = classify(prof);
          rep.rows.push_back({name + " regrouped from base " + std::to_string(power_base(b, part)), top, mu,
                              to_string(label.kind), label.k, label.n0, "empirical",
                              prof.stabilized ? "yes" : "no"});
          if (!quasi_sturmian_label(label))
            rep.fail(name + ": base " + std::to_string(top) + " classified " + to_string(label.kind));
        }
      }
    }
  } catch (const budget_exceeded& e) {
    rep.inconclusive(e.what());
  }
  return rep;
}

/// Base-s digit stream of the number whose base-r digits are `digits`.
/// Dependent bases go through base b exactly; independent ones are rebased.
inline InfiniteWordSource change_base(const InfiniteWordSource& digits, std::uint64_t r, std::uint64_t s,
                                      std::size_t budget_per_digit) {
  if (const auto db = dependent_bases(r, s)) {
    InfiniteWordSource base_b = db->l > 1 ? split_source(db->b, db->l, 1, digits) : digits.widened(db->b);
    return db->m > 1 ? regroup(db->b, 1, db->m, base_b) : base_b;
  }
  const DigitExpansion e{checked_alphabet(r), 0, digits.widened(r)};
  return rebase_source(e, s, budget_per_digit);
}

/// A witness n with p(n, xi, s) >= n + 2 when xi has a Sturmian base-r expansion.
inline Report run_corollary_negative(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = "corollary";
  const std::uint64_t r = cfg.r.value_or(2);
  if (!cfg.s) throw precondition_error("corollary: need s");
  const std::uint64_t s = *cfg.s;
  if (r < 2 || s < 2 || r == s) throw precondition_error("corollary: need distinct bases r, s >= 2");
  const std::size_t n_max = cfg.n_max.value_or(64);
  const std::size_t budget = cfg.prefix.value_or(1 << 14);
  rep.set("r", r);
  rep.set("s", s);
  rep.set("slope", cfg.slope);
  rep.set("dependent", std::string(dependent_bases(r, s) ? "yes" : "no"));
  rep.columns = {"n", "p_s", "n_plus_2", "witness"};
  const auto seed = characteristic_word(parse_slope(cfg.slope)).widened(static_cast<std::uint32_t>(r));
  const auto digits_s = change_base(seed, r, s, std::size_t{1} << 12);
  // Factors seen in any finite prefix are factors of the word, so a count
  // reaching n + 2 on a prefix is already a proof.
  std::optional<ComplexityProfile> prof;
  std::size_t length = std::min<std::size_t>(budget, 1024);
  for (;;) {
    try {
      auto spec = factor_spectrum(digits_s.prefix(length));
      ComplexityProfile p;
      p.word_id = digits_s.id();
      p.alphabet_size = digits_s.alphabet_size();
      p.prefix_length = length;
      for (std::size_t n = 1; n <= n_max; ++n) p.entries.push_back({n < spec.size() ? spec[n] : 0, Status::empirical});
      prof = std::move(p);
    } catch (const budget_exceeded& e) {
      rep.notes.push_back(std::string("rebase stopped: ") + e.what());
      break;
    }
    bool found = false;
    for (std::size_t n = 1; n <= n_max && !found; ++n) found = prof->count(n) >= n + 2;
    if (found || length >= budget) break;
    length = std::min(budget, 2 * length);
  }
  if (!prof) {
    rep.inconclusive("no base-" + std::to_string(s) + " digits could be certified");
    return rep;
  }
  rep.set("prefix_s", prof->prefix_length);
  std::optional<std::size_t> witness;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const bool hit = prof->count(n) >= n + 2;
    if (hit && !witness) witness = n;
    rep.rows.push_back({n, prof->count(n), n + 2, hit ? "yes" : "no"});
  }
  if (witness)
    rep.set("witness", *witness);
  else
    rep.inconclusive("no n <= " + std::to_string(n_max) + " with p(n, xi, s) >= n + 2 in the window");
  return rep;
}

/// sum_minus_2n over n for multiplicatively independent r and s. A Sturmian
/// base-r seed is rebased to s; a rational xi uses exact expansions in both bases.
inline Report run_independent_probe(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = "probe";
  const std::uint64_t r = cfg.r.value_or(2), s = cfg.s.value_or(3);
  if (r < 2 || s < 2) throw precondition_error("probe: bases must be at least 2");
  if (dependent_bases(r, s)) throw precondition_error("probe: r and s must be multiplicatively independent");
  const std::size_t n_max = cfg.n_max.value_or(40);
  const std::size_t budget = cfg.prefix.value_or(1 << 13);
  rep.set("r", r);
  rep.set("s", s);
  if (!cfg.xi.empty()) {
    const auto slash = cfg.xi.find('/');
    if (slash == std::string::npos) throw precondition_error("probe: xi must be num/den");
    const BigInt num(cfg.xi.substr(0, slash)), den(cfg.xi.substr(slash + 1));
    rep.set("xi", cfg.xi);
    const auto pr = profile(rational_expansion(num, den, r).digits, n_max, ProfileMode::certified);
    const auto ps = profile(rational_expansion(num, den, s).digits, n_max, ProfileMode::certified);
    const auto rows = result_rows(pr, ps);
    append_rows(rep, rows);
    std::uint64_t bound = 0;
    for (const auto& row : rows) bound = std::max(bound, row.p_r + row.p_s);
    rep.set("max_p_r_plus_p_s", bound);
    if (classify(pr).kind != WordClass::eventually_periodic || classify(ps).kind != WordClass::eventually_periodic)
      rep.fail("rational input with an unbounded profile");
    return rep;
  }
  rep.set("slope", cfg.slope);
  const auto seed = characteristic_word(parse_slope(cfg.slope)).widened(static_cast<std::uint32_t>(r));
  const auto pr = profile(seed, n_max, ProfileMode::certified);
  const auto digits_s = change_base(seed, r, s, std::size_t{1} << 12);
  // Doubling as in empirical profiles, keeping the last prefix rebase could certify.
  std::vector<std::uint64_t> spec_s;
  std::size_t length = std::min<std::size_t>(budget, std::max<std::size_t>(8 * n_max, 256));
  std::size_t reached = 0, unchanged = 0;
  bool truncated = false;
  for (;;) {
    try {
      auto spec = factor_spectrum(digits_s.prefix(length));
      spec.resize(n_max + 1, 0);
      unchanged = spec == spec_s ? unchanged + 1 : 0;
      spec_s = std::move(spec);
      reached = length;
    } catch (const budget_exceeded& e) {
      truncated = true;
      rep.notes.push_back(std::string("warning: rebase budget exceeded, table truncated to ") +
                          std::to_string(reached) + " digits: " + e.what());
      break;
    }
    if (unchanged >= 2 || length >= budget) break;
    length = std::min(budget, 2 * length);
  }
  if (spec_s.empty()) {
    rep.inconclusive("no base-" + std::to_string(s) + " digits could be certified");
    return rep;
  }
  ComplexityProfile ps;
  ps.word_id = digits_s.id();
  ps.prefix_length = reached;
  ps.stabilized = unchanged >= 2;
  for (std::size_t n = 1; n <= n_max; ++n) ps.entries.push_back({spec_s[n], Status::empirical});
  rep.set("prefix_s", reached);
  rep.set("stabilized", std::string(ps.stabilized ? "yes" : "no"));
  const auto rows = result_rows(pr, ps);
  append_rows(rep, rows);
  bool nondecreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    nondecreasing = nondecreasing && rows[i].sum_minus_2n >= rows[i - 1].sum_minus_2n;
  rep.set("trend", std::string(nondecreasing ? "nondecreasing" : "not monotone"));
  rep.set("last_sum_minus_2n", rows.back().sum_minus_2n);
  // From here on the base-s count is capped by the prefix length, not the word.
  for (const auto& row : rows)
    if (row.p_s + row.n == reached + 1) {
      rep.set("saturated_from", row.n);
      break;
    }
  for (const auto& row : rows)
    if (row.sum_minus_2n < 2) rep.fail("n=" + std::to_string(row.n) + ": sum_minus_2n below 2");
  if (truncated) rep.inconclusive("table truncated by the rebase budget");
  return rep;
}

/// Exhaustive convergent residue sweep: d in [2, d_max], all (c1, c2) not both 0 mod d.
inline Report run_lemma4_sweep(std::int64_t d_max, const std::vector<std::string>& slopes, std::size_t K) {
  Report rep;
  rep.experiment = "lemma4";
  rep.columns = {"slope", "d", "pairs", "all_true"};
  rep.set("K", K);
  for (const auto& slope : slopes) {
    const auto pq = parse_slope(slope);
    for (std::int64_t d = 2; d <= d_max; ++d) {
      std::size_t pairs = 0;
      bool all = true;
      for (std::int64_t c1 = 0; c1 < d; ++c1)
        for (std::int64_t c2 = 0; c2 < d; ++c2) {
          if (c1 == 0 && c2 == 0) continue;
          ++pairs;
          all = all && convergents_mod_witness(pq, d, c1, c2, K);
        }
      rep.rows.push_back({slope, d, pairs, all ? "yes" : "no"});
      if (!all) rep.fail("slope " + slope + " d=" + std::to_string(d));
    }
  }
  return rep;
}

/// Small instances of every experiment.
inline Report run_selftest(const ExperimentConfig& base) {
  Report rep;
  rep.experiment = "selftest";
  rep.columns = {"check", "verdict"};
  auto add = [&](const std::string& name, const Report& sub) {
    rep.rows.push_back({name, to_string(sub.verdict)});
    rep.absorb(sub);
  };
  ExperimentConfig cfg = base;
  cfg.n_max = 32;
  cfg.r = 2;
  cfg.s = 8;
  add("thm2 r=2 s=8", run_thm2_equality(cfg));
  cfg.r = 9;
  cfg.s = 27;
  add("thm2 r=9 s=27", run_thm2_equality(cfg));
  ExperimentConfig l42 = base;
  l42.b = 2;
  l42.rho = 3;
  l42.sigma = 1;
  l42.n_max = 30;
  l42.witnesses = 2;
  add("lemma42 b=2 rho=3 sigma=1", run_lemma42(l42));
  ExperimentConfig t3 = base;
  t3.b = 2;
  t3.rho = 2;
  t3.witnesses = 2;
  t3.n_max = 60;
  add("thm3 b=2 rho=2", run_thm3_propagate(t3));
  ExperimentConfig cor = base;
  cor.r = 2;
  cor.n_max = 16;
  for (std::uint64_t s : {3u, 4u}) {
    cor.s = s;
    add("corollary r=2 s=" + std::to_string(s), run_corollary_negative(cor));
  }
  add("lemma4 d<=5", run_lemma4_sweep(5, standard_slopes(3), 32));
  return rep;
}

inline Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "thm2") return run_thm2_equality(cfg);
  if (cfg.experiment == "lemma42") return run_lemma42(cfg);
  if (cfg.experiment == "thm3") return run_thm3_propagate(cfg);
  if (cfg.experiment == "corollary") return run_corollary_negative(cfg);
  if (cfg.experiment == "probe") return run_independent_probe(cfg);
  if (cfg.experiment == "selftest") return run_selftest(cfg);
  throw precondition_error("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace sturmkit::harness

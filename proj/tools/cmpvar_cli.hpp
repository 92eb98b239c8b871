// Copyright 2026 The cmpvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -----------------------------------------------------------------------------
//
// Command-line front end. Subcommands: generate, tables, verify, consumption,
// bench. Exit codes: 0 success, 2 usage error, 1 internal failure.

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmpvar/cmpvar.hpp"

namespace cmpvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decimal, or hex with a 0x prefix.
inline std::optional<std::uint64_t> parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunSpec {
  std::string subcommand;
  std::string sampler = "grand";
  std::string scheme;
  std::uint64_t n = 0;
  std::string seed_text = "1";
  std::uint64_t seed = 1;
  int K = static_cast<int>(kDefaultWordBits);
  double alpha = 0.01;
  std::string format = "csv";
  std::string out;
};

using Source = UniformSource<>;

namespace detail {

inline SamplerKind require_sampler(const std::string& name) {
  auto kind = parse_sampler(name);
  if (!kind) throw usage_error("unknown sampler '" + name + "'");
  return *kind;
}

inline std::vector<SamplerKind> sampler_list(const std::string& name) {
  if (name == "all") return {kAllSamplers.begin(), kAllSamplers.end()};
  return {require_sampler(name)};
}

inline std::string header(const RunSpec& spec, std::string_view extra = {}) {
  std::ostringstream h;
  h << "# cmpvar " << kVersion << ' ' << spec.subcommand << " seed=" << spec.seed
    << " K=" << spec.K << " n=" << spec.n;
  if (!extra.empty()) h << ' ' << extra;
  return h.str();
}

inline void cmd_generate(const RunSpec& spec, std::ostream& out) {
  const SamplerKind kind = require_sampler(spec.sampler);
  const bool has_interval = sampler_scheme(kind).has_value();
  Source src(spec.seed);
  Generator<Source> gen(SamplerConfig::make(kind, spec.K));
  if (spec.format == "jsonl") {
    nlohmann::json head = {{"tool", "cmpvar"},
                           {"version", kVersion},
                           {"subcommand", "generate"},
                           {"sampler", std::string(sampler_name(kind))},
                           {"seed", spec.seed},
                           {"K", spec.K},
                           {"n", spec.n}};
    out << nlohmann::json{{"header", head}}.dump() << '\n';
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      const Variate v = gen(src);
      nlohmann::json rec = {{"value", v.value}};
      if (has_interval) rec["interval_k"] = v.interval;
      out << rec.dump() << '\n';
    }
    return;
  }
  out << header(spec, "sampler=" + std::string(sampler_name(kind)) +
                          " format=csv")
      << '\n';
  out << (has_interval ? "value,interval_k" : "value") << '\n';
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    const Variate v = gen(src);
    out << format_double(v.value);
    if (has_interval) out << ',' << v.interval;
    out << '\n';
  }
}

inline void cmd_tables(const RunSpec& spec, std::ostream& out) {
  auto scheme = parse_scheme(spec.scheme);
  if (!scheme) throw usage_error("unknown scheme '" + spec.scheme + "'");
  if (spec.K < 1 || spec.K > kMaxTableLength) {
    throw usage_error("K must be in [1, " + std::to_string(kMaxTableLength) + "]");
  }
  write_table(out, build_table(*scheme, spec.K));
}

/// Expected occupancy of intervals 1..K, with everything past K in the last.
inline std::vector<double> occupancy_probs(SamplerKind kind,
                                           const IntervalTable& table) {
  const int K = table.size();
  std::vector<double> p(K);
  double acc = 0.0;
  for (int k = 1; k < K; ++k) {
    p[k - 1] = kind == SamplerKind::exp_vn
                   ? -std::expm1(-1.0) * std::exp(-(k - 1.0))
                   : table.selection_probability(k);
    acc += p[k - 1];
  }
  p[K - 1] = 1.0 - acc;
  return p;
}

inline std::vector<TestReport> verify_sampler(SamplerKind kind,
                                              const RunSpec& spec) {
  Source src(spec.seed);
  const SamplerConfig config = SamplerConfig::make(kind, spec.K);
  Generator<Source> gen(config);
  std::vector<double> xs(spec.n);
  std::vector<std::uint64_t> occupancy(config.table ? config.table->size() : 0);
  for (auto& x : xs) {
    const Variate v = gen(src);
    x = v.value;
    if (!occupancy.empty()) {
      const auto slot = std::min<std::size_t>(v.interval, occupancy.size());
      ++occupancy[slot - 1];
    }
  }
  std::sort(xs.begin(), xs.end());
  const std::string name(sampler_name(kind));
  std::vector<TestReport> reports;
  if (is_normal_sampler(kind)) {
    reports.push_back(ks_test(xs, normal_cdf, spec.alpha, name + ".ks"));
  } else {
    reports.push_back(ks_test(xs, exponential_cdf, spec.alpha, name + ".ks"));
  }
  // Too few samples leave a single bin after merging.
  if (config.table && config.table->size() >= 2 && spec.n >= 100) {
    reports.push_back(chi_square_test(occupancy,
                                      occupancy_probs(kind, *config.table),
                                      spec.n, spec.alpha, name + ".occupancy"));
  }
  return reports;
}

inline void cmd_verify(const RunSpec& spec, std::ostream& out) {
  const auto kinds = sampler_list(spec.sampler);
  if (spec.n < 2) throw usage_error("verify needs --n >= 2");
  out << header(spec, "sampler=" + spec.sampler + " alpha=" +
                          format_double(spec.alpha))
      << '\n';
  out << "name,statistic,critical,result\n";
  for (SamplerKind kind : kinds) {
    for (const TestReport& r : verify_sampler(kind, spec)) {
      out << r.test_name << ',' << format_double(r.statistic) << ','
          << format_double(r.critical_value) << ','
          << (r.passed ? "pass" : "fail") << '\n';
    }
  }
}

inline void cmd_consumption(const RunSpec& spec, std::ostream& out) {
  const auto kinds = sampler_list(spec.sampler);
  if (spec.n < kMinConsumptionSamples) {
    throw usage_error("consumption needs --n >= " +
                      std::to_string(kMinConsumptionSamples));
  }
  out << header(spec, "sampler=" + spec.sampler) << '\n';
  out << "sampler,n,mean,ci95\n";
  for (SamplerKind kind : kinds) {
    const ConsumptionReport r =
        measure_consumption(SamplerConfig::make(kind, spec.K), spec.n, spec.seed);
    out << r.sampler_kind << ',' << r.samples << ','
        << format_double(r.mean_per_sample) << ','
        << format_double(r.ci95_halfwidth) << '\n';
  }
}

inline void cmd_bench(const RunSpec& spec, std::ostream& out) {
  out << header(spec, "timings are machine-dependent") << '\n';
  out << "sampler,n,seconds,rate\n";
  for (SamplerKind kind : kAllSamplers) {
    Source src(spec.seed);
    Generator<Source> gen(SamplerConfig::make(kind, spec.K));
    double sink = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < spec.n; ++i) sink += gen(src).value;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const double rate = seconds > 0.0 ? spec.n / seconds : 0.0;
    out << sampler_name(kind) << ',' << spec.n << ',' << format_double(seconds)
        << ',' << format_double(rate) << '\n';
    // Keeps the loop from being optimized away.
    if (sink == 0.123456789) out << "#\n";
  }
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Comparison-method random variate generators"};
  app.name("cmpvar");
  app.require_subcommand(1);

  RunSpec spec;
  std::string samplers;
  for (SamplerKind k : kAllSamplers) {
    samplers += (samplers.empty() ? "" : ", ") + std::string(sampler_name(k));
  }

  auto* generate = app.add_subcommand("generate", "emit samples");
  generate->add_option("--sampler", spec.sampler, samplers)
      ->capture_default_str();
  generate->add_option("--n", spec.n, "number of samples (default 10)");
  generate->add_option("--format", spec.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();

  auto* tables = app.add_subcommand("tables", "dump an interval table");
  tables->add_option("--scheme", spec.scheme,
                     "exp_vn, exp_brent, normal_forsythe, normal_brent")
      ->required();
  tables->add_option("--K", spec.K, "table length")->capture_default_str();
  tables->add_option("--out", spec.out, "write to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "goodness-of-fit reports");
  verify->add_option("--sampler", spec.sampler, "all, " + samplers)
      ->capture_default_str();
  verify->add_option("--n", spec.n, "samples per sampler (default 100000)");
  verify->add_option("--alpha", spec.alpha, "significance level")
      ->capture_default_str();

  auto* consumption =
      app.add_subcommand("consumption", "uniforms consumed per sample");
  consumption->add_option("--sampler", spec.sampler, "all, " + samplers)
      ->capture_default_str();
  consumption->add_option("--n", spec.n, "samples (default 1000000)");

  auto* bench = app.add_subcommand("bench", "samples per second per sampler");
  bench->add_option("--n", spec.n, "samples per sampler (default 1000000)");

  for (auto* sub : {generate, verify, consumption, bench}) {
    sub->add_option("--seed", spec.seed_text, "64-bit seed, decimal or 0x hex")
        ->capture_default_str();
    sub->add_option("--K", spec.K, "interval table length")
        ->capture_default_str();
    sub->add_option("--out", spec.out, "write to this file instead of stdout");
  }
  generate->callback([&] { spec.subcommand = "generate"; });
  tables->callback([&] { spec.subcommand = "tables"; });
  verify->callback([&] { spec.subcommand = "verify"; });
  consumption->callback([&] { spec.subcommand = "consumption"; });
  bench->callback([&] { spec.subcommand = "bench"; });

  std::vector<const char*> argv{"cmpvar"};
  for (const auto& a : args) argv.push_back(a.c_str());
  spec.n = std::numeric_limits<std::uint64_t>::max();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (spec.n == std::numeric_limits<std::uint64_t>::max()) {
    spec.n = spec.subcommand == "generate" ? 10
             : spec.subcommand == "verify" ? 100000
                                           : 1000000;
  }

  auto* active = app.get_subcommands().front();
  try {
    auto seed = parse_seed(spec.seed_text);
    if (!seed) throw usage_error("invalid seed '" + spec.seed_text + "'");
    spec.seed = *seed;
    if (spec.K < 1 || spec.K > kMaxTableLength) {
      throw usage_error("K must be in [1, " + std::to_string(kMaxTableLength) +
                        "]");
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!spec.out.empty()) {
      file.open(spec.out, std::ios::binary);
      if (!file) {
        err << "cannot open output file " << spec.out << '\n';
        return kExitInternal;
      }
      sink = &file;
    }
    if (spec.subcommand == "generate") detail::cmd_generate(spec, *sink);
    if (spec.subcommand == "tables") detail::cmd_tables(spec, *sink);
    if (spec.subcommand == "verify") detail::cmd_verify(spec, *sink);
    if (spec.subcommand == "consumption") detail::cmd_consumption(spec, *sink);
    if (spec.subcommand == "bench") detail::cmd_bench(spec, *sink);
    sink->flush();
    if (!*sink) {
      err << "write failed\n";
      return kExitInternal;
    }
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace cmpvar::cli

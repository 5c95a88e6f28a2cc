// fgstat: batch front-end for free-group conjugacy-class statistics.
//
// Usage: fgstat <subcommand> <config.json> [--output-dir DIR]
//
// One structured config document per run; flags only select the subcommand
// and config path. All randomness is seeded from the config, so identical
// config + seed reproduces byte-identical data files.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgs/stats.hpp"
#include "fgs/thermo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  fgs::Rank p{2};
  json weight_spec;
  std::string class_rep;
  std::vector<int> m_grid;
  fgs::SampleMode mode = fgs::SampleMode::exact;
  std::uint64_t sample_count = 100000;
  std::uint64_t seed = 1;
  std::uint64_t enumeration_cap = 10'000'000;
  double ks_max = 0.1;
  double ratio_lo = 1.7, ratio_hi = 2.3;
  double derivative_tol = 1e-6;
  std::vector<double> t_grid;
  std::vector<double> cdf_grid;
  std::string output_dir = "out";
  json echo;
};

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j = json::parse(in);
  Config c{fgs::Rank(j.at("p").get<int>())};
  c.echo = j;
  c.weight_spec = j.at("weight");
  c.class_rep = j.value("class", "");
  c.m_grid = j.value("m_grid", std::vector<int>{});
  for (std::size_t i = 0; i + 1 < c.m_grid.size(); ++i)
    if (c.m_grid[i] >= c.m_grid[i + 1])
      throw ConfigError("m_grid must be strictly ascending");
  const std::string mode = j.value("mode", "exact");
  if (mode == "exact") {
    c.mode = fgs::SampleMode::exact;
  } else if (mode == "sampled") {
    c.mode = fgs::SampleMode::sampled;
    c.sample_count = j.at("sample_count").get<std::uint64_t>();
    if (c.sample_count < 1000) throw ConfigError("sampled mode needs sample_count >= 1000");
  } else {
    throw ConfigError("mode must be 'exact' or 'sampled'");
  }
  c.seed = j.value("seed", std::uint64_t{1});
  c.enumeration_cap = j.value("enumeration_cap", std::uint64_t{10'000'000});
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    c.ks_max = t.value("ks_max", 0.1);
    if (t.contains("ratio_band")) {
      c.ratio_lo = t["ratio_band"].at(0).get<double>();
      c.ratio_hi = t["ratio_band"].at(1).get<double>();
    }
    c.derivative_tol = t.value("derivative_tol", 1e-6);
  }
  c.t_grid = j.value("t_grid", std::vector<double>{});
  c.cdf_grid = j.value("cdf_grid", std::vector<double>{});
  c.output_dir = j.value("output_dir", std::string("out"));
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Collects files in memory and flushes them after the manifest is written,
// so a manifest always precedes valid data on disk.
struct OutputSet {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& name, const std::string& content) { files.emplace_back(name, content); }

  void flush(const Config& c, const std::vector<std::pair<std::string, double>>& stages) {
    fs::create_directories(dir);
    json manifest;
    manifest["version"] = FGS_VERSION;
    manifest["config"] = c.echo;
    for (const auto& [name, seconds] : stages)
      manifest["stages"].push_back({{"name", name}, {"seconds", seconds}});
    manifest["files"] = json::array();
    for (const auto& [name, content] : files) {
      char digest[20];
      std::snprintf(digest, sizeof digest, "%016" PRIx64, fnv1a64(content));
      manifest["files"].push_back({{"name", name}, {"fnv1a64", digest}});
    }
    {
      std::ofstream out(dir / "manifest.json", std::ios::binary);
      out << manifest.dump(2) << "\n";
    }
    for (const auto& [name, content] : files) {
      std::ofstream out(dir / name, std::ios::binary);
      out << content;
    }
  }
};

struct StageTimer {
  std::vector<std::pair<std::string, double>> stages;
  template <class Fn>
  void run(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    stages.emplace_back(name, dt.count());
  }
};

fgs::ConjugacyClass class_from(const Config& c) {
  if (c.class_rep.empty()) throw ConfigError("config needs a 'class' entry");
  return fgs::ConjugacyClass::of(fgs::parse_word(c.class_rep, c.p));
}

std::vector<int> m_grid_from(const Config& c) {
  if (c.m_grid.empty()) throw ConfigError("config needs a non-empty 'm_grid'");
  return c.m_grid;
}

json base_summary(const Config& c) {
  json s;
  s["seed"] = c.seed;
  s["mode"] = c.mode == fgs::SampleMode::exact ? "exact" : "sampled";
  if (c.mode == fgs::SampleMode::sampled) s["sample_count"] = c.sample_count;
  s["tolerances"] = {{"ks_max", c.ks_max},
                     {"ratio_band", {c.ratio_lo, c.ratio_hi}},
                     {"derivative_tol", c.derivative_tol}};
  return s;
}

int run_count(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::ConjugacyClass cls = class_from(c);
  timer.run("count", [&] {
    std::ostringstream csv;
    csv << "m,n,size_formula,size_enumerated\n";
    for (int m : m_grid_from(c)) {
      const std::uint64_t formula = fgs::class_sphere_size(cls, c.p, m);
      csv << m << ',' << cls.k() + 2 * m << ',' << formula << ',';
      if (formula <= c.enumeration_cap) {
        std::uint64_t n = 0;
        fgs::for_each_class_sphere(cls, c.p, m, [&](const fgs::Word&) { ++n; });
        csv << n;
      }
      csv << '\n';
    }
    out.add("count.csv", csv.str());
    json s = base_summary(c);
    s["class"] = fgs::to_string(cls.representative());
    s["k"] = cls.k();
    s["orbit_size"] = cls.orbit().size();
    out.add("summary.json", s.dump(2) + "\n");
  });
  return 0;
}

int run_pressure(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  std::vector<double> ts = c.t_grid;
  if (ts.empty())
    for (int i = -4; i <= 4; ++i) ts.push_back(0.25 * i);
  timer.run("pressure", [&] {
    std::ostringstream csv;
    csv << "t,pressure,beta\n";
    for (double t : ts) {
      const double P = fgs::pressure(f, t);
      csv << fmt(t) << ',' << fmt(P) << ',' << fmt(std::exp(P)) << '\n';
    }
    out.add("pressure.csv", csv.str());
    json s = base_summary(c);
    s["entropy"] = fgs::entropy(c.p);
    out.add("summary.json", s.dump(2) + "\n");
  });
  return 0;
}

int run_derivatives(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  timer.run("derivatives", [&] {
    const double l_cyl = fgs::lambda_exact(f);
    const double l_fd = fgs::lambda_fd(f);
    const double s2_gk = fgs::sigma2_green_kubo(f);
    const double s2_fd = fgs::sigma2_fd(f);
    std::ostringstream csv;
    csv << "lambda_cylinder,lambda_fd,lambda_discrepancy,"
           "sigma2_green_kubo,sigma2_fd,sigma2_discrepancy\n";
    csv << fmt(l_cyl) << ',' << fmt(l_fd) << ',' << fmt(std::abs(l_cyl - l_fd)) << ','
        << fmt(s2_gk) << ',' << fmt(s2_fd) << ',' << fmt(std::abs(s2_gk - s2_fd)) << '\n';
    out.add("derivatives.csv", csv.str());
    json s = base_summary(c);
    s["lambda"] = l_cyl;
    s["sigma2"] = s2_gk;
    s["within_tolerance"] =
        std::abs(l_cyl - l_fd) <= c.derivative_tol && std::abs(s2_gk - s2_fd) <= c.derivative_tol;
    out.add("summary.json", s.dump(2) + "\n");
  });
  return 0;
}

int run_mean(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  fgs::ConjugacyClass cls = class_from(c);
  timer.run("mean", [&] {
    fgs::MeanConvergence mc = fgs::mean_convergence(cls, c.p, f, m_grid_from(c), c.mode,
                                                    c.sample_count, c.seed, c.enumeration_cap);
    std::ostringstream csv;
    csv << "m,mean_normalized,lambda,deviation\n";
    for (const auto& row : mc.rows)
      csv << row.m << ',' << fmt(row.normalized_mean) << ',' << fmt(mc.lambda) << ','
          << fmt(row.deviation) << '\n';
    out.add("mean.csv", csv.str());
    json s = base_summary(c);
    s["lambda"] = mc.lambda;
    s["final_deviation"] = mc.rows.back().deviation;
    out.add("summary.json", s.dump(2) + "\n");
  });
  return 0;
}

int run_clt(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  fgs::ConjugacyClass cls = class_from(c);
  std::vector<double> grid = c.cdf_grid;
  if (grid.empty())
    for (int i = -12; i <= 12; ++i) grid.push_back(0.25 * i);
  json s = base_summary(c);
  s["ks"] = json::array();
  for (int m : m_grid_from(c)) {
    timer.run("clt_m" + std::to_string(m), [&] {
      fgs::CltResult r = fgs::clt_experiment(cls, c.p, f, m, c.mode, c.sample_count, c.seed + m,
                                             grid, c.enumeration_cap);
      std::ostringstream csv;
      csv << "y,empirical,reference\n";
      for (const auto& row : r.cdf)
        csv << fmt(row.y) << ',' << fmt(row.empirical) << ',' << fmt(row.reference) << '\n';
      out.add("clt_m" + std::to_string(m) + ".csv", csv.str());
      s["ks"].push_back({{"m", m}, {"ks", r.ks}, {"pass", r.ks <= c.ks_max}});
      s["sigma2"] = r.sigma2;
      s["lambda"] = r.lambda;
    });
  }
  out.add("summary.json", s.dump(2) + "\n");
  return 0;
}

int run_ratio(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  fgs::ConjugacyClass cls = class_from(c);
  std::ostringstream csv;
  csv << "m,var_class,var_sphere,ratio\n";
  json s = base_summary(c);
  s["ratio"] = json::array();
  for (int m : m_grid_from(c)) {
    timer.run("ratio_m" + std::to_string(m), [&] {
      fgs::VarianceRatio r = fgs::variance_ratio(cls, c.p, f, m, c.mode, c.sample_count,
                                                 c.seed + m, c.enumeration_cap);
      csv << m << ',' << fmt(r.var_class) << ',' << fmt(r.var_sphere) << ',' << fmt(r.ratio)
          << '\n';
      s["ratio"].push_back(
          {{"m", m}, {"ratio", r.ratio}, {"pass", r.ratio >= c.ratio_lo && r.ratio <= c.ratio_hi}});
    });
  }
  out.add("ratio.csv", csv.str());
  out.add("summary.json", s.dump(2) + "\n");
  return 0;
}

int run_charfn(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  fgs::ConjugacyClass cls = class_from(c);
  std::vector<double> ts = c.t_grid;
  if (ts.empty()) ts = {0.5, 1.0, 2.0};
  json s = base_summary(c);
  s["deviations"] = json::array();
  for (int m : m_grid_from(c)) {
    timer.run("charfn_m" + std::to_string(m), [&] {
      std::vector<fgs::CharFnRow> rows = fgs::characteristic_function(
          cls, c.p, f, m, ts, c.mode, c.sample_count, c.seed + m, c.enumeration_cap);
      std::ostringstream csv;
      csv << "t,re_phi,im_phi,deviation\n";
      double max_dev = 0.0;
      for (const auto& row : rows) {
        csv << fmt(row.t) << ',' << fmt(row.phi.real()) << ',' << fmt(row.phi.imag()) << ','
            << fmt(row.deviation) << '\n';
        max_dev = std::max(max_dev, row.deviation);
      }
      out.add("charfn_m" + std::to_string(m) + ".csv", csv.str());
      s["deviations"].push_back({{"m", m}, {"max_deviation", max_dev}});
    });
  }
  out.add("summary.json", s.dump(2) + "\n");
  return 0;
}

int run_sample(const Config& c, OutputSet& out, StageTimer& timer) {
  fgs::WeightFunction f = fgs::parse_weight_spec(c.weight_spec.dump(), c.p);
  fgs::ConjugacyClass cls = class_from(c);
  for (int m : m_grid_from(c)) {
    timer.run("sample_m" + std::to_string(m), [&] {
      std::ostringstream csv;
      csv << "word,F\n";
      if (c.mode == fgs::SampleMode::exact) {
        if (fgs::class_sphere_size(cls, c.p, m) > c.enumeration_cap)
          throw fgs::EnumerationCapError("enumeration cap exceeded");
        fgs::for_each_class_sphere(cls, c.p, m, [&](const fgs::Word& x) {
          csv << fgs::to_string(x) << ',' << fmt(fgs::birkhoff(f, x)) << '\n';
        });
      } else {
        std::mt19937_64 rng(c.seed + m);
        for (std::uint64_t i = 0; i < c.sample_count; ++i) {
          fgs::Word x = fgs::sample_uniform_class_sphere(cls, c.p, m, rng);
          csv << fgs::to_string(x) << ',' << fmt(fgs::birkhoff(f, x)) << '\n';
        }
      }
      out.add("sample_m" + std::to_string(m) + ".csv", csv.str());
    });
  }
  out.add("summary.json", base_summary(c).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-group conjugacy-class statistics"};
  app.require_subcommand(1);
  std::string config_path, output_dir;
  const std::vector<std::string> names = {"count", "pressure", "derivatives", "mean",
                                          "clt",   "ratio",    "charfn",      "sample"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--output-dir", output_dir, "override the config's output_dir");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    Config c = parse_config(config_path);
    if (!output_dir.empty()) c.output_dir = output_dir;
    OutputSet out;
    out.dir = c.output_dir;
    StageTimer timer;
    int rc = 1;
    if (cmd == "count") rc = run_count(c, out, timer);
    else if (cmd == "pressure") rc = run_pressure(c, out, timer);
    else if (cmd == "derivatives") rc = run_derivatives(c, out, timer);
    else if (cmd == "mean") rc = run_mean(c, out, timer);
    else if (cmd == "clt") rc = run_clt(c, out, timer);
    else if (cmd == "ratio") rc = run_ratio(c, out, timer);
    else if (cmd == "charfn") rc = run_charfn(c, out, timer);
    else if (cmd == "sample") rc = run_sample(c, out, timer);
    out.flush(c, timer.stages);
    return rc;
  } catch (const fgs::DegenerateWeightError& e) {
    std::fprintf(stderr, "error: degenerate-weight: %s\n", e.what());
    return 3;
  } catch (const fgs::EnumerationCapError& e) {
    std::fprintf(stderr, "error: cap-exceeded: %s\n", e.what());
    return 4;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

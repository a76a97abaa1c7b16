// anosov-lab: batch front end for the growth-invariant laboratory.
//
//   anosov-lab <command> --config <file> [--threads N] [--out DIR] [--list]
//
// commands: spectrum, exponent, intersect, pressure, dimension, limitset,
// verify. configs are strict JSON: unknown keys are rejected, numeric fields
// are range-checked. every command is a pure function of (config, input
// files); thread count only changes wall time, never output bytes.
//
// exit codes: 0 success, 2 config/parse error, 3 numeric failure,
// 4 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anosov/bowen.hpp"
#include "anosov/calculus.hpp"
#include "anosov/fixtures.hpp"
#include "anosov/io.hpp"
#include "anosov/spectrum.hpp"
#include "anosov/verify.hpp"
#include "anosov/words.hpp"

namespace {

using json = nlohmann::json;
using namespace anosov;

// ------------------------------------------------------------ config access

json load_config(const std::string& path) {
  if (path.empty()) throw ConfigError("missing --config <file> (or use --list)");
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config parse failed: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  return cfg;
}

void check_keys(const json& cfg, std::initializer_list<const char*> allowed) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown config key: \"" + it.key() + "\"");
  }
}

const json& need(const json& cfg, const char* key) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) throw ConfigError(std::string("missing config key: \"") + key + "\"");
  return *it;
}

std::string get_str(const json& cfg, const char* key) {
  const json& v = need(cfg, key);
  if (!v.is_string()) throw ConfigError(std::string("config key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

int get_int(const json& cfg, const char* key, int lo, int hi, int def, bool required) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) {
    if (required) throw ConfigError(std::string("missing config key: \"") + key + "\"");
    return def;
  }
  if (!it->is_number_integer())
    throw ConfigError(std::string("config key \"") + key + "\" must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < lo || v > hi)
    throw ConfigError(std::string("config key \"") + key + "\" must lie in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double get_num(const json& cfg, const char* key, double lo, double hi, double def,
               bool required) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) {
    if (required) throw ConfigError(std::string("missing config key: \"") + key + "\"");
    return def;
  }
  if (!it->is_number())
    throw ConfigError(std::string("config key \"") + key + "\" must be a number");
  const double v = it->get<double>();
  if (!(v >= lo && v <= hi))
    throw ConfigError(std::string("config key \"") + key + "\" must lie in [" + fmt_g17(lo) +
                      ", " + fmt_g17(hi) + "]");
  return v;
}

bool get_bool(const json& cfg, const char* key, bool def) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return def;
  if (!it->is_boolean())
    throw ConfigError(std::string("config key \"") + key + "\" must be a boolean");
  return it->get<bool>();
}

std::string get_name(const json& cfg, const char* key, const std::string& def) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return def;
  if (!it->is_string() || it->get<std::string>().empty())
    throw ConfigError(std::string("config key \"") + key + "\" must be a non-empty string");
  return it->get<std::string>();
}

// "a<k>" simple root, "w<k>" fundamental weight, for the given dimension
WeightFunctional parse_functional(const std::string& name, int dim) {
  if (name.size() >= 2 && (name[0] == 'a' || name[0] == 'w')) {
    int k = 0;
    bool digits = true;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') {
        digits = false;
        break;
      }
      k = k * 10 + (name[i] - '0');
    }
    if (digits && k >= 1 && k <= dim - 1)
      return name[0] == 'a' ? WeightFunctional::simple_root(dim, k)
                            : WeightFunctional::fundamental_weight(dim, k);
  }
  throw ConfigError("unknown functional \"" + name + "\" for dimension " + std::to_string(dim) +
                    " (expected a1..a" + std::to_string(dim - 1) + " or w1..w" +
                    std::to_string(dim - 1) + ")");
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

// rows where both columns are finite, sorted by the first column ascending
void paired_sorted(const std::vector<double>& f, const std::vector<double>& g,
                   std::vector<double>& fs, std::vector<double>& gs) {
  std::vector<std::uint32_t> idx;
  idx.reserve(f.size());
  for (std::uint32_t i = 0; i < f.size(); ++i)
    if (std::isfinite(f[i]) && std::isfinite(g[i])) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (f[a] != f[b]) return f[a] < f[b];
    return a < b;
  });
  fs.resize(idx.size());
  gs.resize(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    fs[r] = f[idx[r]];
    gs[r] = g[idx[r]];
  }
}

json estimate_json(const Estimate& e) {
  json j;
  j["value"] = e.value;
  j["spread"] = e.spread;
  j["window_values"] = e.window_values;
  j["window_anchors"] = e.window_anchors;
  j["method"] = e.method;
  return j;
}

void print_fixtures() {
  for (const FixtureInfo& f : fixture_catalog())
    std::cout << f.name << "  [" << f.kind << ", rank " << f.rank << ", dim " << f.dim << "]  "
              << f.description << "\n";
}

// ----------------------------------------------------------------- commands

int cmd_spectrum(const json& cfg, const std::string& out_dir, int threads) {
  check_keys(cfg, {"reps", "functionals", "max_len", "primitive_only", "output"});
  const json& rep_names = need(cfg, "reps");
  if (!rep_names.is_array() || rep_names.empty())
    throw ConfigError("config key \"reps\" must be a non-empty array of fixture names");
  std::vector<RepPoint> reps;
  for (const json& r : rep_names) {
    if (!r.is_string()) throw ConfigError("config key \"reps\" must contain fixture names");
    reps.push_back(fixture_rep(r.get<std::string>()));
  }
  const int rank = reps.front().rank();
  const int dim = reps.front().dim();
  for (const RepPoint& r : reps)
    if (r.rank() != rank || r.dim() != dim)
      throw ConfigError("spectrum reps must share one rank and one dimension");

  const json& fn_names = need(cfg, "functionals");
  if (!fn_names.is_array() || fn_names.empty())
    throw ConfigError("config key \"functionals\" must be a non-empty array of names");
  std::vector<WeightFunctional> fns;
  for (const json& f : fn_names) {
    if (!f.is_string()) throw ConfigError("config key \"functionals\" must contain names");
    fns.push_back(parse_functional(f.get<std::string>(), dim));
  }

  const int max_len = get_int(cfg, "max_len", 1, 18, 0, true);
  const bool primitive_only = get_bool(cfg, "primitive_only", true);
  ClassList classes = ClassList::enumerate(rank, max_len, primitive_only, 1ull << 27);
  const SpectrumTable table = build_spectrum(std::move(classes), reps, fns, 0, threads);

  const std::string path = out_path(out_dir, get_name(cfg, "output", "spectrum.csv"));
  write_spectrum_csv(table, path);
  std::cout << "wrote " << path << " (" << table.rows() << " rows, " << table.column_names.size()
            << " columns, " << table.skipped << " classes dropped)\n";
  return 0;
}

int cmd_exponent(const json& cfg, const std::string& out_dir, int /*threads*/) {
  check_keys(cfg, {"fixture", "functional", "max_len", "scale", "output"});
  const RepPoint rep = fixture_rep(get_str(cfg, "fixture"));
  WeightFunctional fn = parse_functional(get_str(cfg, "functional"), rep.dim());
  const double scale = get_num(cfg, "scale", -1e6, 1e6, 1.0, false);
  if (scale == 0.0) throw ConfigError("config key \"scale\" must be nonzero");
  if (scale != 1.0) fn = WeightFunctional::scaled(fn, scale);
  const int max_len = get_int(cfg, "max_len", 6, 18, 0, true);

  const Estimate est = exponent_dirichlet(rep, fn, max_len);
  json report;
  report["command"] = "exponent";
  report["settings"] = cfg;
  report["functional"] = fn.name();
  report["estimate"] = estimate_json(est);
  const std::string path = out_path(out_dir, get_name(cfg, "output", "exponent.json"));
  write_file(path, report.dump(1) + "\n");
  std::cout << "exponent " << rep.id << ":" << fn.name() << " = " << fmt_g17(est.value)
            << " (spread " << fmt_g17(est.spread) << ")\nwrote " << path << "\n";
  return 0;
}

int cmd_intersect(const json& cfg, const std::string& out_dir, int threads) {
  check_keys(cfg, {"fixture_f", "fixture_g", "functional", "max_len", "output"});
  const RepPoint rep_f = fixture_rep(get_str(cfg, "fixture_f"));
  const RepPoint rep_g = fixture_rep(get_str(cfg, "fixture_g"));
  if (rep_f.rank() != rep_g.rank())
    throw ConfigError("intersection needs representations of the same free group");
  const std::string fn_name = get_str(cfg, "functional");
  const WeightFunctional fn_f = parse_functional(fn_name, rep_f.dim());
  const WeightFunctional fn_g = parse_functional(fn_name, rep_g.dim());
  const int max_len = get_int(cfg, "max_len", 6, 18, 0, true);

  const ClassList classes = ClassList::enumerate(rep_f.rank(), max_len, true, 1ull << 27);
  const std::vector<double> col_f = period_column(classes, rep_f, fn_f, threads);
  const std::vector<double> col_g = period_column(classes, rep_g, fn_g, threads);
  std::vector<double> fs, gs;
  paired_sorted(col_f, col_g, fs, gs);
  // entropies from the dirichlet exponent: robust for heterogeneous pairs
  // whose spectra resolve very differently under one shared class table
  const Estimate hf = exponent_dirichlet(rep_f, fn_f, max_len);
  const Estimate hg = exponent_dirichlet(rep_g, fn_g, max_len);
  const Estimate i_est = intersection(fs, gs, completeness_horizon(classes, col_f), hf.value);
  const double j = (hg.value / hf.value) * i_est.value;

  json report;
  report["command"] = "intersect";
  report["settings"] = cfg;
  report["intersection"] = estimate_json(i_est);
  report["entropy_f"] = estimate_json(hf);
  report["entropy_g"] = estimate_json(hg);
  report["renormalized"] = j;
  report["rows"] = fs.size();
  const std::string path = out_path(out_dir, get_name(cfg, "output", "intersect.json"));
  write_file(path, report.dump(1) + "\n");
  std::cout << "intersection " << rep_f.id << " -> " << rep_g.id << " [" << fn_name
            << "] i = " << fmt_g17(i_est.value) << ", renormalized = " << fmt_g17(j)
            << "\nwrote " << path << "\n";
  return 0;
}

int cmd_pressure(const json& cfg, const std::string& out_dir, int threads) {
  check_keys(cfg, {"family", "grid", "functional", "max_len", "geometry", "output", "field_csv"});
  const bool has_family = cfg.contains("family");
  const bool has_grid = cfg.contains("grid");
  if (has_family == has_grid)
    throw ConfigError("pressure needs exactly one of \"family\" (fixture) or \"grid\" (file)");

  ParamGrid grid;
  if (has_family) {
    const std::string fam_name = get_str(cfg, "family");
    const Family fam = fixture_family(fam_name);
    GridGeometry geo = fixture_geometry(fam_name);
    if (cfg.contains("geometry")) {
      const json& g = cfg["geometry"];
      if (!g.is_object()) throw ConfigError("config key \"geometry\" must be an object");
      check_keys(g, {"ds", "dt", "ns", "nt"});
      geo.ds = get_num(g, "ds", 1e-4, 0.5, geo.ds, false);
      geo.dt = get_num(g, "dt", 1e-4, 0.5, geo.dt, false);
      geo.ns = get_int(g, "ns", 1, 8, geo.ns, false);
      geo.nt = get_int(g, "nt", 1, 8, geo.nt, false);
    }
    grid = build_grid(fam, geo);
  } else {
    grid = load_grid(get_str(cfg, "grid"));
  }

  const WeightFunctional fn = parse_functional(get_str(cfg, "functional"), grid.dim);
  const int max_len = get_int(cfg, "max_len", 6, 16, 0, true);
  const GridSummaries sums = grid_summaries(grid, fn, max_len, 1ull << 27, threads);
  const ScalarField h_field = field_of(sums, SummaryKind::Entropy);
  const ScalarField i_field = field_of(sums, SummaryKind::Intersection);
  const ScalarField j_field = field_of(sums, SummaryKind::Renormalized);

  const PressureForm p = pressure_form(j_field);
  const double pluri = pluriharmonicity_residual(i_field);
  const MasterIdentity master = master_identity_check(h_field, i_field, j_field);
  const DegenerateDirectionReport degen = degenerate_direction_check(grid, sums, fn);
  double j_min = j_field.v.front();
  for (double v : j_field.v) j_min = std::min(j_min, v);

  json report;
  report["command"] = "pressure";
  report["settings"] = cfg;
  report["family"] = grid.family_name;
  report["functional"] = fn.name();
  report["geometry"] = {{"s0", grid.geo.s0}, {"t0", grid.geo.t0}, {"ds", grid.geo.ds},
                        {"dt", grid.geo.dt}, {"ns", grid.geo.ns}, {"nt", grid.geo.nt}};
  report["flags"] = {{"holomorphic", grid.holomorphic}, {"conj_symmetric", grid.conj_symmetric}};
  report["classes_used"] = sums.classes_used;
  report["rows_dropped"] = sums.dropped;
  report["entropy_center"] = sums.at(0, 0).h;
  report["pressure_form"] = {{"ss", p.ss}, {"st", p.st}, {"tt", p.tt}};
  report["pluriharmonic_residual"] = pluri;
  report["master_identity"] = {{"lhs", master.lhs},         {"rhs", master.rhs},
                               {"residual", master.residual}, {"sign_match", master.sign_match},
                               {"trusted", master.trusted},   {"h0", master.h0},
                               {"h_s", master.h_s},           {"h_ss", master.h_ss},
                               {"h_tt", master.h_tt},         {"j_ss", master.j_ss},
                               {"i_ss", master.i_ss},         {"i_tt", master.i_tt}};
  report["degenerate_direction"] = {{"max_t", degen.max_t},
                                    {"max_s", degen.max_s},
                                    {"classes", degen.classes}};
  report["renormalized_min"] = j_min;
  const std::string path = out_path(out_dir, get_name(cfg, "output", "pressure.json"));
  write_file(path, report.dump(1) + "\n");

  std::string csv = "is,it,s,t,h,i,j\n";
  for (int it = -grid.geo.nt; it <= grid.geo.nt; ++it)
    for (int is = -grid.geo.ns; is <= grid.geo.ns; ++is) {
      const NodeSummary& nsum = sums.at(is, it);
      const cx z = grid.z(is, it);
      csv += std::to_string(is) + "," + std::to_string(it) + "," + fmt_g17(z.real()) + "," +
             fmt_g17(z.imag()) + "," + fmt_g17(nsum.h) + "," + fmt_g17(nsum.i) + "," +
             fmt_g17(nsum.j) + "\n";
    }
  const std::string csv_path = out_path(out_dir, get_name(cfg, "field_csv", "hfield.csv"));
  write_file(csv_path, csv);

  std::cout << "pressure form on " << grid.family_name << " [" << fn.name()
            << "]: ss = " << fmt_g17(p.ss) << ", st = " << fmt_g17(p.st)
            << ", tt = " << fmt_g17(p.tt) << "\nmaster identity residual = "
            << fmt_g17(master.residual) << (master.sign_match ? " (signs agree)" : " (SIGNS DISAGREE)")
            << "\nwrote " << path << " and " << csv_path << "\n";
  return 0;
}

int cmd_dimension(const json& cfg, const std::string& out_dir, int /*threads*/) {
  check_keys(cfg, {"fixture", "max_len", "samples_per_circle", "output"});
  const std::string name = get_str(cfg, "fixture");
  const SchottkyData sch = fixture_schottky(name);
  const int samples = get_int(cfg, "samples_per_circle", 16, 2048, 192, false);
  const int max_len = get_int(cfg, "max_len", 6, 18, 0, true);

  const BowenResult bowen = bowen_dimension(sch, samples);
  const RepPoint rep = fixture_rep(name);
  const Estimate exponent =
      exponent_dirichlet(rep, WeightFunctional::simple_root(rep.dim(), 1), max_len);

  json report;
  report["command"] = "dimension";
  report["settings"] = cfg;
  report["bowen"] = {{"dimension", bowen.dimension},
                     {"rho_at_zero", bowen.rho_at_zero},
                     {"samples_per_circle", bowen.samples_per_circle}};
  report["exponent"] = estimate_json(exponent);
  report["delta_bowen_exponent"] = std::fabs(bowen.dimension - exponent.value);

  const LimitCloud cloud = sample_limit_set(rep, max_len);
  std::size_t planar = 0;
  for (int c : cloud.chart) planar += c == 0;
  if (planar >= 500) {
    const BoxDimension box = box_dimension(cloud);
    report["box"] = {{"value", box.value},
                     {"spread", box.spread},
                     {"scales", box.log_inv_eps.size()}};
    report["delta_box_exponent"] = std::fabs(box.value - exponent.value);
  } else {
    // finite / tiny limit sets carry no usable box scaling
    report["box"] = nullptr;
    report["delta_box_exponent"] = nullptr;
  }

  const std::string path = out_path(out_dir, get_name(cfg, "output", "dimension.json"));
  write_file(path, report.dump(1) + "\n");
  std::cout << "dimension of " << name << ": spectral = " << fmt_g17(bowen.dimension)
            << ", exponent = " << fmt_g17(exponent.value) << "\nwrote " << path << "\n";
  return 0;
}

int cmd_limitset(const json& cfg, const std::string& out_dir, int /*threads*/) {
  check_keys(cfg, {"fixture", "max_len", "image", "output", "output_image"});
  const RepPoint rep = fixture_rep(get_str(cfg, "fixture"));
  const int max_len = get_int(cfg, "max_len", 1, 18, 0, true);
  const LimitCloud cloud = sample_limit_set(rep, max_len);

  const std::string path = out_path(out_dir, get_name(cfg, "output", "cloud.csv"));
  write_cloud_csv(cloud, path);
  std::cout << "wrote " << path << " (" << cloud.size() << " points)\n";

  if (cfg.contains("image")) {
    const json& img = cfg["image"];
    if (!img.is_object()) throw ConfigError("config key \"image\" must be an object");
    check_keys(img, {"width", "height"});
    const int w = get_int(img, "width", 16, 4096, 0, true);
    const int h = get_int(img, "height", 16, 4096, 0, true);
    const std::string img_path = out_path(out_dir, get_name(cfg, "output_image", "cloud.pgm"));
    render_cloud_pgm(cloud, w, h, img_path);
    std::cout << "wrote " << img_path << " (" << w << "x" << h << ")\n";
  }
  return 0;
}

int cmd_verify(const json& cfg, const std::string& out_dir, int threads) {
  check_keys(cfg, {"suite", "output"});
  const std::string suite = get_str(cfg, "suite");
  const std::vector<CheckResult> checks = run_suite(suite, threads);
  for (const CheckResult& c : checks) {
    std::cerr << (c.pass ? "   ok  " : " FAIL  ") << c.id << "  value " << fmt_g17(c.value)
              << " vs tolerance " << fmt_g17(c.tolerance) << "  (" << fmt_g17(c.seconds)
              << " s)\n        " << c.detail << "\n";
  }
  const std::string report = report_json(suite, checks);
  const std::string path = out_path(out_dir, get_name(cfg, "output", "verify-" + suite + ".json"));
  write_file(path, report);
  std::cout << report;
  if (!all_pass(checks)) return 4;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for growth invariants of matrix groups"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  int threads = 0;
  bool list = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "period spectrum table over conjugacy classes -> CSV"},
      {"exponent", "critical exponent of the group's weighted series -> JSON"},
      {"intersect", "intersection / renormalized intersection of two fixtures -> JSON"},
      {"pressure", "grid hessians: pressure form, harmonicity, master identity -> JSON + CSV"},
      {"dimension", "limit-set dimension three ways (spectral, exponent, boxes) -> JSON"},
      {"limitset", "limit-set point cloud -> CSV (+ optional PGM image)"},
      {"verify", "run a verification suite (identities | certificates | oracles) -> JSON"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--threads", threads, "worker threads (0 = ANOSOV_LAB_THREADS or hardware)")
        ->check(CLI::Range(0, 64));
    sub->add_option("--out", out_dir, "output directory (default: current)");
    sub->add_flag("--list", list, "list available fixtures (or suites for verify) and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (list) {
      if (command == "verify")
        for (const std::string& s : verify_suites()) std::cout << s << "\n";
      else
        print_fixtures();
      return 0;
    }
    const json cfg = load_config(config);
    if (command == "spectrum") return cmd_spectrum(cfg, out_dir, threads);
    if (command == "exponent") return cmd_exponent(cfg, out_dir, threads);
    if (command == "intersect") return cmd_intersect(cfg, out_dir, threads);
    if (command == "pressure") return cmd_pressure(cfg, out_dir, threads);
    if (command == "dimension") return cmd_dimension(cfg, out_dir, threads);
    if (command == "limitset") return cmd_limitset(cfg, out_dir, threads);
    if (command == "verify") return cmd_verify(cfg, out_dir, threads);
    throw ConfigError("unknown command: " + command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 4;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

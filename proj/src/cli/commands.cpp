#include "riclab/cli.hpp"

#include "riclab/born.hpp"
#include "riclab/catalog.hpp"
#include "riclab/device_io.hpp"
#include "riclab/ledger.hpp"
#include "riclab/optimize.hpp"
#include "riclab/parametric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace riclab::cli {

using Json = nlohmann::ordered_json;

ExitCode exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotInvertible:
    case ErrorKind::NotInformationallyComplete:
    case ErrorKind::Singularity:
    case ErrorKind::Degenerate:
    case ErrorKind::SingularBasis:
    case ErrorKind::Infeasible:
    case ErrorKind::FitError:
      return kNumericalFailure;
    default:
      return kInputError;
  }
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Matrix read_csv_matrix(const std::string& text, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw Error(ErrorKind::Parse, what + ": line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Parse, what + ": line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, what + ": no data");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

namespace {

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<double> parse_doubles(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, what + ": not a number: '" + cell + "'");
    }
  }
  return out;
}

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    write_file_atomic(*path, text);
  } else {
    out << text;
  }
}

std::string csv_number(double v) { return format_double(v); }

// ------------------------------------------------------------------ verify

VerifyRow make_row(std::string name, double value, double expected, double tol, std::string exact,
                   bool upper_bound = false) {
  VerifyRow r{std::move(name), value, expected, tol, upper_bound, std::move(exact), false};
  r.pass = std::isfinite(value) && (upper_bound ? value <= expected + tol : std::abs(value - expected) <= tol);
  return r;
}

}  // namespace

std::vector<VerifyRow> verify_rows(int restarts, std::uint64_t seed) {
  const NormOrder two(2.0);
  std::vector<VerifyRow> rows;
  rows.push_back(make_row("petersen", quantumness(entry_device(petersen_ric()), two), 6.0 * std::sqrt(161.0 / 5.0),
                          1e-6, "6*sqrt(161/5)"));
  rows.push_back(make_row("a4", quantumness(entry_device(a_d_ric(4)), two), 2.0 * std::sqrt(21.0), 1e-6, "2*sqrt(21)"));
  rows.push_back(make_row("unbiased-2ric", quantumness(entry_device(unbiased_2ric()), two),
                          3.0 * std::sqrt(2991907.0) / 784.0, 1e-9, "3*sqrt(2991907)/784"));
  rows.push_back(make_row("biased-2ric", parametric::minimize_over_f(two).value, 6.6154448, 1e-5, ""));
  OptConfig config;
  config.constraints.unbiased = false;
  config.constraints.post_states = PostStateModel::FreeIndependent;
  config.restarts = restarts;
  config.seed = seed;
  double nonparallel = std::numeric_limits<double>::quiet_NaN();
  try {
    nonparallel = minimize_quantumness(config).best_value;
  } catch (const Error&) {
  }
  rows.push_back(make_row("non-parallel", nonparallel, 6.6079822, 6.6085 - 6.6079822, "", true));
  rows.push_back(make_row("hypothetical-sic", quantumness(make_born_matrix(hypothetical_sic_phi(4, Field::Real)), two),
                          6.0, 1e-12, "6"));
  return rows;
}

namespace {

Json record(const std::string& command, const std::string& inputs) {
  Json j;
  j["command"] = command;
  j["inputs_digest"] = digest(inputs);
  return j;
}

std::string joined_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    s += argv[i];
    s += '\x1f';
  }
  return s;
}

OptConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config file: ") + e.what());
  }
  OptConfig c;
  try {
    if (j.contains("p")) c.p = j["p"].is_string() ? NormOrder::parse(j["p"].get<std::string>()) : NormOrder(j["p"].get<double>());
    if (j.contains("dim")) c.dim = j["dim"].get<int>();
    if (j.contains("unbiased")) c.constraints.unbiased = j["unbiased"].get<bool>();
    if (j.contains("rank")) c.constraints.rank = parse_rank_model(j["rank"].get<std::string>());
    if (j.contains("post_states")) c.constraints.post_states = parse_post_state_model(j["post_states"].get<std::string>());
    c.restarts = j.contains("restarts") ? j["restarts"].get<int>() : OptConfig::default_restarts(c.constraints.post_states);
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
    if (j.contains("max_outer")) c.max_outer = j["max_outer"].get<int>();
    if (j.contains("tol_constraint")) c.tol_constraint = j["tol_constraint"].get<double>();
    if (j.contains("tol_objective")) c.tol_objective = j["tol_objective"].get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("config file: ") + e.what());
  }
  return c;
}

Json optrun_json(const OptRun& run, const OptConfig& config) {
  Json j;
  j["best_value"] = run.best_value;
  j["converged"] = run.converged;
  j["seed"] = run.seed;
  j["iterations"] = run.iterations;
  j["constraint_residuals"] = {{"completeness", run.constraint_residuals.completeness},
                               {"bias", run.constraint_residuals.bias},
                               {"post_completeness", run.constraint_residuals.post_completeness}};
  j["config"] = Json::parse(config_to_json(config));
  Json restarts = Json::array();
  for (const RestartSummary& r : run.restarts) {
    restarts.push_back({{"seed", r.seed}, {"value", r.value}, {"residual", r.residual}, {"feasible", r.feasible}});
  }
  j["restarts"] = restarts;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference-device quantumness toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

  std::uint64_t seed = 1;
  int restarts = -1;
  std::optional<std::string> out_path;
  std::string device_path;
  std::vector<std::string> p_list;

  auto add_out = [&](CLI::App* sub) {
    sub->add_option_function<std::string>("--out", [&](const std::string& s) { out_path = s; }, "Output file");
  };

  CLI::App* verify = app.add_subcommand("verify", "Recompute the reference quantumness table");
  verify->add_option("--seed", seed, "Seed for the non-parallel search");
  verify->add_option("--restarts", restarts, "Restarts for the non-parallel search (default 32)");

  CLI::App* qcmd = app.add_subcommand("quantumness", "Quantumness of a device file");
  qcmd->add_option("--device", device_path, "Device JSON file")->required();
  qcmd->add_option("--p", p_list, "Norm orders (comma separated, 'inf' allowed)")->delimiter(',');

  double radius = 1.0;
  std::string normal_text = "0,1,-1,-1";
  int samples = 100;
  int grid_lat = 91;
  int grid_lon = 180;
  CLI::App* sphere = app.add_subcommand("project-sphere", "Great circles and psi grid on a slice of the 3-sphere");
  sphere->add_option("--device", device_path, "Device JSON file (rank-1, d=4)")->required();
  sphere->add_option("--radius", radius, "Sphere radius R");
  sphere->add_option("--normal", normal_text, "Slice normal, 4 comma-separated numbers");
  sphere->add_option("--samples", samples, "Points per circle");
  sphere->add_option("--grid-lat", grid_lat, "Latitude samples of the psi grid");
  sphere->add_option("--grid-lon", grid_lon, "Longitude samples of the psi grid");
  add_out(sphere);

  std::string pr_path, per_path;
  bool ltp = false;
  std::optional<double> explicit_f;
  CLI::App* born = app.add_subcommand("born", "Evaluate the generalized Born rule");
  born->add_option("--device", device_path, "Device JSON file");
  born->add_option("--pr", pr_path, "P(R) CSV, one entry per line")->required();
  born->add_option("--per", per_path, "P(E|R) CSV matrix, columns indexed by reference outcome")->required();
  born->add_flag("--ltp", ltp, "Use Phi = I (law of total probability)");
  born->add_option_function<double>("--explicit-f", [&](double f) { explicit_f = f; },
                                    "Use the explicit formula of the biased family at this f");
  add_out(born);

  std::string config_path;
  std::string p_text = "2";
  int dim = 4;
  bool biased = false;
  std::string rank_text = "one";
  std::string post_text = "parallel";
  std::optional<double> tol;
  int max_iters = 3000;
  int threads = 0;
  bool no_ledger = false;
  CLI::App* opt = app.add_subcommand("optimize", "Minimize the p-quantumness over devices");
  opt->add_option("--config", config_path, "JSON config file (flags override nothing when given)");
  opt->add_option("--p", p_text, "Norm order");
  opt->add_option("--dim", dim, "Dimension");
  opt->add_flag("--biased", biased, "Drop the unbiasedness constraint");
  opt->add_option("--rank", rank_text, "Element rank: one|any");
  opt->add_option("--post", post_text, "Post-states: parallel|free_povm_rescalable|free_independent");
  opt->add_option("--restarts", restarts, "Restarts (default 32 parallel, 128 otherwise)");
  opt->add_option("--seed", seed, "Seed");
  opt->add_option("--max-iters", max_iters, "Inner iterations per round");
  opt->add_option_function<double>("--tol", [&](double t) { tol = t; }, "Constraint tolerance");
  opt->add_option("--threads", threads, "Worker threads (0: all cores)");
  opt->add_flag("--no-ledger", no_ledger, "Do not append to the results ledger");
  add_out(opt);

  std::string scan_text;
  std::optional<double> point_f;
  CLI::App* par = app.add_subcommand("parametric", "The one-parameter biased family");
  par->add_option("--p", p_text, "Norm order");
  par->add_option("--scan", scan_text, "f0:f1:steps");
  par->add_option_function<double>("--point", [&](double f) { point_f = f; }, "Solve the family at f");
  add_out(par);

  int count = 10000;
  std::string method_text = "altproj";
  CLI::App* sample = app.add_subcommand("sample", "Quantumness of random devices, histogram and Levy fit");
  sample->add_option("--count", count, "Number of samples");
  sample->add_option("--seed", seed, "Seed");
  sample->add_option("--method", method_text, "altproj|random");
  sample->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_out(sample);

  CLI::App* cat = app.add_subcommand("catalog", "Named devices");
  cat->require_subcommand(1);
  CLI::App* cat_list = cat->add_subcommand("list", "List catalog entries");
  std::string label;
  CLI::App* cat_export = cat->add_subcommand("export", "Write a catalog device file");
  cat_export->add_option("label", label, "Catalog label")->required();
  add_out(cat_export);

  CLI::App* table2 = app.add_subcommand("table2", "Distinct little-Gram entries against decimal cutoff");
  table2->add_option("--restarts", restarts, "Restarts for the optimized devices (default 32)");
  table2->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kSuccess : kInputError;
  }

  const std::string args = joined_args(argc, argv);
  try {
    if (verify->parsed()) {
      const auto rows = verify_rows(restarts > 0 ? restarts : 32, seed);
      bool all = true;
      Json j = record("verify", args);
      Json outputs = Json::array();
      for (const VerifyRow& r : rows) {
        all = all && r.pass;
        Json o;
        o["name"] = r.name;
        o["value"] = r.value;
        o["expected"] = r.expected;
        o["tolerance"] = r.tolerance;
        o["bound"] = r.upper_bound ? "upper" : "two-sided";
        if (!r.exact_form.empty()) o["exact_form"] = r.exact_form;
        o["tolerance_check"] = r.pass ? "pass" : "fail";
        outputs.push_back(o);
      }
      j["outputs"] = outputs;
      j["tolerance_check"] = all ? "pass" : "fail";
      if (format == "json") {
        out << j.dump(2) << '\n';
      } else {
        for (const VerifyRow& r : rows) {
          char line[160];
          std::snprintf(line, sizeof line, "%-18s %.10f  expected %.10f  tol %.1e  %s\n", r.name.c_str(), r.value,
                        r.expected, r.tolerance, r.pass ? "pass" : "FAIL");
          out << line;
        }
      }
      return all ? kSuccess : kVerificationFailure;
    }

    if (qcmd->parsed()) {
      const std::string text = read_file(device_path);
      const ReferenceDevice device = device_from_json(text);
      if (!is_informationally_complete(device)) {
        throw Error(ErrorKind::NotInformationallyComplete, "device '" + device.label() + "' is not informationally complete");
      }
      const BornMatrix bm = born_matrix(device);
      if (p_list.empty()) p_list.push_back("2");
      for (const std::string& w : bm.warnings) err << "warning: " << w << '\n';
      if (format == "csv") {
        out << "p,value\n";
        for (const std::string& p : p_list) out << p << ',' << csv_number(quantumness(bm, NormOrder::parse(p))) << '\n';
        return kSuccess;
      }
      Json j = record("quantumness", args + text);
      j["device"] = device.label();
      Json values = Json::array();
      for (const std::string& p : p_list) {
        const NormOrder order = NormOrder::parse(p);
        values.push_back({{"p", order.str()}, {"value", quantumness(bm, order)}});
      }
      j["outputs"] = values;
      j["singular_values"] = bm.defect_spectrum.values;
      j["inverse_condition"] = bm.inverse_condition;
      out << j.dump(2) << '\n';
      return kSuccess;
    }

    if (sphere->parsed()) {
      const ReferenceDevice device = load_device(device_path);
      if (!device.frame()) throw Error(ErrorKind::InvalidInput, "project-sphere needs a rank-1 device with a frame");
      const std::vector<double> nv = parse_doubles(normal_text, ',', "--normal");
      if (nv.size() != 4) throw Error(ErrorKind::InvalidInput, "--normal needs 4 components");
      const Vector normal = Eigen::Map<const Vector>(nv.data(), 4);
      const Matrix rows = device.frame()->rows();
      const auto circles = great_circles(rows, radius, normal, samples);
      std::ostringstream cs;
      cs << "circle,point,x,y,z,z1,z2,z3,z4\n";
      for (const GreatCircle& c : circles) {
        if (c.degenerate) {
          cs << c.index << ",degenerate,,,,,,,\n";
          continue;
        }
        for (Eigen::Index t = 0; t < c.sphere_points.rows(); ++t) {
          cs << c.index << ',' << t;
          for (int k = 0; k < 3; ++k) cs << ',' << csv_number(c.sphere_points(t, k));
          for (int k = 0; k < 4; ++k) cs << ',' << csv_number(c.points(t, k));
          cs << '\n';
        }
      }
      const PsiGrid grid = psi_grid(rows, radius, normal, grid_lat, grid_lon);
      std::ostringstream gs;
      gs << "latitude,longitude,psi\n";
      for (std::size_t i = 0; i < grid.latitude.size(); ++i) {
        for (std::size_t k = 0; k < grid.longitude.size(); ++k) {
          gs << csv_number(grid.latitude[i]) << ',' << csv_number(grid.longitude[k]) << ','
             << csv_number(grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) << '\n';
        }
      }
      if (out_path) {
        write_file_atomic(*out_path + "_circles.csv", cs.str());
        write_file_atomic(*out_path + "_psi.csv", gs.str());
        Json j = record("project-sphere", args);
        j["outputs"] = {{"circles", *out_path + "_circles.csv"}, {"psi_grid", *out_path + "_psi.csv"}};
        out << j.dump(2) << '\n';
      } else {
        out << cs.str();
      }
      return kSuccess;
    }

    if (born->parsed()) {
      const Vector pr_raw = read_csv_matrix(read_file(pr_path), pr_path).reshaped();
      const ProbabilityVector pr(pr_raw);
      const ConditionalMatrix per(read_csv_matrix(read_file(per_path), per_path));
      Vector q;
      std::vector<int> flagged;
      if (ltp) {
        q = ltp_evaluate(pr, per);
      } else if (explicit_f) {
        q = parametric::born_explicit(*explicit_f, pr, per);
      } else {
        if (device_path.empty()) throw Error(ErrorKind::InvalidInput, "born needs --device unless --ltp or --explicit-f");
        const ReferenceDevice device = load_device(device_path);
        if (!is_informationally_complete(device)) {
          throw Error(ErrorKind::NotInformationallyComplete, "device '" + device.label() + "' is not informationally complete");
        }
        const BornEvaluation ev = born_evaluate(born_matrix(device).phi, pr, per);
        q = ev.q;
      }
      for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (q(i) < -1e-9 || q(i) > 1.0 + 1e-9) flagged.push_back(static_cast<int>(i));
      }
      if (!flagged.empty()) err << "warning: " << flagged.size() << " entries of Q(E) lie outside [0, 1]\n";
      std::string text;
      if (format == "csv") {
        for (Eigen::Index i = 0; i < q.size(); ++i) text += csv_number(q(i)) + "\n";
      } else {
        Json j = record("born", args + read_file(pr_path) + read_file(per_path));
        j["mode"] = ltp ? "ltp" : explicit_f ? "explicit-f" : "device";
        j["q"] = vector_json(q);
        j["out_of_range"] = flagged;
        text = j.dump(2) + "\n";
      }
      emit(out, out_path, text);
      return kSuccess;
    }

    if (opt->parsed()) {
      OptConfig config;
      if (!config_path.empty()) {
        config = config_from_json(read_file(config_path));
      } else {
        config.p = NormOrder::parse(p_text);
        config.dim = dim;
        config.constraints.unbiased = !biased;
        config.constraints.rank = parse_rank_model(rank_text);
        config.constraints.post_states = parse_post_state_model(post_text);
        config.restarts = restarts > 0 ? restarts : OptConfig::default_restarts(config.constraints.post_states);
        config.seed = seed;
        config.max_iters = max_iters;
        if (tol) config.tol_constraint = *tol;
      }
      config.threads = threads;
      const OptRun run = minimize_quantumness(config);
      const std::string config_json = config_to_json(config);
      const std::string run_id = make_run_id(config_json, config.seed);
      const std::filesystem::path device_file =
          out_path ? std::filesystem::path(*out_path) : results_dir() / ("run_" + run_id + ".json");
      if (!out_path) std::filesystem::create_directories(device_file.parent_path());
      ReferenceDevice best = run.best_device;
      best.set_label("optimized-" + run_id);
      save_device(device_file, best);
      if (!no_ledger) {
        append_ledger({run_id, utc_timestamp(), config_json, run.best_value, run.converged, run.seed, device_file.string()});
      }
      Json j = record("optimize", args);
      j["run_id"] = run_id;
      j["outputs"] = optrun_json(run, config);
      j["device_file"] = device_file.string();
      out << j.dump(2) << '\n';
      return kSuccess;
    }

    if (par->parsed()) {
      const NormOrder p = NormOrder::parse(p_text);
      std::string text;
      if (point_f) {
        const parametric::ParametricPoint pt = parametric::solve_family(*point_f);
        Json j = record("parametric", args);
        j["f"] = pt.f;
        j["entries"] = {{"b", pt.entries.b}, {"dg", pt.entries.dg}, {"e", pt.entries.e},
                        {"a", pt.entries.a}, {"c", pt.entries.c}};
        j["projector_residual"] = pt.projector_residual;
        j["quantumness"] = parametric::family_quantumness(*point_f, p);
        text = j.dump(2) + "\n";
      } else if (!scan_text.empty()) {
        const std::vector<double> parts = parse_doubles(scan_text, ':', "--scan");
        if (parts.size() != 3 || parts[2] < 2 || parts[2] != std::floor(parts[2])) {
          throw Error(ErrorKind::InvalidInput, "--scan expects f0:f1:steps with integer steps >= 2");
        }
        const auto points = parametric::scan(p, parts[0], parts[1], static_cast<int>(parts[2]));
        if (format == "json") {
          Json j = record("parametric", args);
          Json a = Json::array();
          for (const auto& s : points) a.push_back({{"f", s.f}, {"value", s.value}});
          j["scan"] = a;
          text = j.dump(2) + "\n";
        } else {
          text = "f,value\n";
          for (const auto& s : points) text += csv_number(s.f) + "," + csv_number(s.value) + "\n";
        }
      } else {
        const parametric::FamilyMinimum m = parametric::minimize_over_f(p);
        Json j = record("parametric", args);
        j["p"] = p.str();
        j["f"] = m.f;
        j["value"] = m.value;
        j["grid_local_minima"] = m.grid_local_minima;
        text = j.dump(2) + "\n";
      }
      emit(out, out_path, text);
      return kSuccess;
    }

    if (sample->parsed()) {
      const SampleBatch batch = sample_quantumness(count, seed, parse_sample_method(method_text), threads);
      std::string hist = "bin_left,bin_right,count\n";
      for (const HistogramBin& b : batch.histogram) {
        hist += csv_number(b.left) + "," + csv_number(b.right) + "," + std::to_string(b.count) + "\n";
      }
      if (format == "csv" && !out_path) {
        out << hist;
        return kSuccess;
      }
      Json j = record("sample", args);
      j["measure"] = batch.measure;
      j["count"] = batch.values.size();
      j["excluded"] = batch.excluded;
      if (!batch.values.empty()) {
        j["min"] = batch.min();
        j["mode"] = batch.mode();
      }
      if (batch.values.size() >= 4) {
        try {
          const LevyFit fit = fit_levy(batch.values);
          j["levy"] = {{"a", fit.a}, {"b", fit.b}, {"log_likelihood", fit.log_likelihood}};
        } catch (const Error& e) {
          err << "warning: " << e.what() << '\n';
        }
      }
      if (out_path) {
        std::string values = "seed,value\n";
        for (std::size_t i = 0; i < batch.values.size(); ++i) {
          values += std::to_string(batch.seeds[i]) + "," + csv_number(batch.values[i]) + "\n";
        }
        write_file_atomic(*out_path + "_hist.csv", hist);
        write_file_atomic(*out_path + "_values.csv", values);
        j["files"] = {{"histogram", *out_path + "_hist.csv"}, {"values", *out_path + "_values.csv"}};
      }
      out << j.dump(2) << '\n';
      return kSuccess;
    }

    if (cat_list->parsed()) {
      Json a = Json::array();
      for (const std::string& l : catalog_labels()) {
        const CatalogEntry e = catalog_entry(l);
        Json o{{"label", e.label}, {"dim", e.dim}, {"n", e.count()}, {"provenance", e.provenance}};
        o["quantumness_2"] = quantumness(entry_device(e), NormOrder(2.0));
        if (e.quantumness_2) o["exact_form"] = e.quantumness_2->expression;
        a.push_back(o);
      }
      if (format == "csv") {
        out << "label,dim,n,quantumness_2\n";
        for (const Json& o : a) {
          out << o["label"].get<std::string>() << ',' << o["dim"].get<int>() << ',' << o["n"].get<int>() << ','
              << csv_number(o["quantumness_2"].get<double>()) << '\n';
        }
      } else {
        out << a.dump(2) << '\n';
      }
      return kSuccess;
    }

    if (cat_export->parsed()) {
      emit(out, out_path, device_to_json(entry_device(catalog_entry(label))));
      return kSuccess;
    }

    if (table2->parsed()) {
      OptConfig two;
      two.restarts = restarts > 0 ? restarts : 32;
      two.seed = seed;
      OptConfig inf = two;
      inf.p = NormOrder::infinity();
      const Matrix exact = unbiased_2ric().gram;
      const Matrix opt2 = little_gram(*minimize_quantumness(two).best_device.frame());
      const Matrix optinf = little_gram(*minimize_quantumness(inf).best_device.frame());
      Json j = record("table2", args);
      Json rows = Json::array();
      std::string csv = "decimals,exact_2ric,optimized_2ric,optimized_inf_ric\n";
      for (int dec : {6, 11, 18, 26}) {
        const int a = count_unique_entries(exact, dec);
        const int b = count_unique_entries(opt2, dec);
        const int c = count_unique_entries(optinf, dec);
        rows.push_back({{"decimals", dec}, {"exact_2ric", a}, {"optimized_2ric", b}, {"optimized_inf_ric", c}});
        csv += std::to_string(dec) + "," + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "\n";
      }
      j["outputs"] = rows;
      if (format == "csv") {
        out << csv;
      } else {
        out << j.dump(2) << '\n';
      }
      return kSuccess;
    }
  } catch (const NotAPovmError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace riclab::cli

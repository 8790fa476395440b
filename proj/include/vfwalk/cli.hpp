#pragma once

// Command-line front end.  Kept out of the umbrella header because it pulls
// in CLI11 and nlohmann::json.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vfwalk/vfwalk.hpp"

namespace vfwalk::cli {

enum Exit : int { ok = 0, validation = 1, io = 2 };

/// Fixed 12 decimals; values that round to zero print without a sign.
inline std::string num(double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  std::ostringstream s;
  s << std::fixed << std::setprecision(12) << x;
  return s.str();
}

/// Residual-style quantities keep their magnitude.
inline std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

/// Rounds to 12 decimals so JSON shows the same digits as text output.
inline double round12(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

inline Embedding builtin(const std::string& name) {
  if (name == "k4-planar") return generate_k4_planar();
  const std::string prefix = "torus-grid:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string arg = name.substr(prefix.size());
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw Error(Errc::parameter, "builtin torus-grid needs an integer size, got '" + arg + "'");
    }
    return generate_torus_grid(n);
  }
  throw Error(Errc::parameter, "unknown builtin '" + name + "' (expected k4-planar or torus-grid:<n>)");
}

struct Globals {
  std::string out;
  std::string builtin;
  double tol = kDefaultTol;
};

inline Embedding load_embedding(const Globals& g, const std::string& file) {
  if (!g.builtin.empty() && !file.empty()) throw Error(Errc::parameter, "give either a file or --builtin, not both");
  if (!g.builtin.empty()) return builtin(g.builtin);
  if (file.empty()) throw Error(Errc::parameter, "no embedding given (file argument or --builtin)");
  return trace_faces(read_embedding_file(file));
}

/// Writes to path, or to out when path is empty.
inline void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(Errc::io, "write to '" + path + "' failed");
}

inline std::string info_text(const Embedding& e) {
  std::ostringstream s;
  s << "n=" << e.vertex_count() << "\n"
    << "l=" << e.edge_count() << "\n"
    << "s=" << e.face_count() << "\n"
    << "g=" << genus(e) << "\n";
  if (const auto t = embedding_type(e)) {
    s << "type=(" << t->k << "," << t->d << ")\n";
  } else {
    s << "type=none\n";
  }
  const bool circ = is_circular(e);
  s << "circular=" << (circ ? "true" : "false") << "\n";
  if (circ) {
    const TraceReport tr = trace_U(build_walk(e), e);
    s << "trace=" << num(tr.direct) << "\n";
    s << "trace_formula=" << (tr.formula ? num(*tr.formula) : std::string("unavailable")) << "\n";
  }
  return s.str();
}

inline nlohmann::ordered_json spectrum_json(const Embedding& e, double tol) {
  const IncidenceBundle b = build_incidence(e);
  const WalkOperator w = build_walk(b);
  const SpectralData sd = full_decomposition(w, b, tol);
  nlohmann::ordered_json j;
  j["n"] = e.vertex_count();
  j["arcs"] = e.arc_count();
  j["rank_C"] = sd.rank_C;
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  classes.push_back({{"eigenvalue", "1"}, {"theta", 0.0}, {"cos_theta", 1.0}, {"multiplicity", sd.plus_one.multiplicity}});
  if (sd.minus_one.multiplicity > 0) {
    classes.push_back({{"eigenvalue", "-1"},
                       {"theta", round12(std::numbers::pi)},
                       {"cos_theta", -1.0},
                       {"multiplicity", sd.minus_one.multiplicity}});
  }
  for (const auto& c : sd.nonreal) {
    for (int sign : {+1, -1}) {
      classes.push_back({{"eigenvalue", sign > 0 ? "exp(+i theta)" : "exp(-i theta)"},
                         {"theta", round12(sign * c.theta)},
                         {"cos_theta", round12(std::cos(c.theta))},
                         {"mu", round12(c.mu)},
                         {"multiplicity", c.multiplicity}});
    }
  }
  j["total_multiplicity"] = sd.total_multiplicity();
  j["reconstruction_residual"] = sd.reconstruction_residual;
  j["completeness_residual"] = sd.completeness_residual;
  return j;
}

inline std::string hamiltonian_text(const Embedding& e, double tol) {
  const IncidenceBundle b = build_incidence(e);
  const WalkOperator w = build_walk(b);
  const Hamiltonian h = principal_hamiltonian(w, b, tol);
  const OrientedResult o = oriented_test(w, b, tol);
  const SkewReport s = skew_S(b, w);
  const RatioReport rr = ratio_condition(incidence_graph(b, tol), tol);
  std::ostringstream out;
  out << "exp_residual=" << sci(h.exp_residual) << "\n"
      << "imag_leak=" << sci(h.imag_leak) << "\n"
      << "incidence_eigenvalues=" << o.distinct_eigenvalues << "\n";
  if (o.gamma) {
    out << "gamma=" << num(*o.gamma) << "\n"
        << "theta=" << num(o.theta) << "\n"
        << "oriented_residual=" << sci(o.residual) << "\n";
  } else {
    out << "gamma=none\n";
  }
  out << "S_entries_in_range=" << (s.entries_in_range ? "true" : "false") << "\n"
      << "S_scaled_residual=" << sci(s.scaled_residual) << "\n"
      << "degrees_match=" << (s.degrees_match ? "true" : "false") << "\n"
      << "ratio_condition=" << (rr.vacuous() ? "vacuous" : rr.all_rational() ? "true" : "false") << "\n";
  return out.str();
}

inline nlohmann::ordered_json design_json(const DesignClassification& c) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(c.kind));
  if (c.two_design) {
    j["two_design"] = {{"v", c.two_design->v}, {"k", c.two_design->k}, {"lambda", c.two_design->lambda}};
  }
  if (c.pgd) {
    j["partial_geometric"] = {{"d", c.pgd->d}, {"k", c.pgd->k}, {"t", c.pgd->t}, {"c", c.pgd->c}, {"mu", round12(c.pgd->mu)}};
  }
  auto& sv = j["singular_values"] = nlohmann::ordered_json::array();
  for (double x : c.singular_values) sv.push_back(round12(x));
  j["brute_force_confirmed"] = c.brute_force_confirmed;
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  return j;
}

inline std::string cover_checks(const CoverMap& c, const VoltageAssignment& volt, const std::set<std::string>& checks) {
  std::ostringstream s;
  if (checks.count("quotient")) {
    const QuotientReport q = quotient_check(c);
    s << "# quotient residual=" << sci(q.residual) << " holds=" << (q.holds() ? "true" : "false") << "\n";
  }
  if (checks.count("pgd")) {
    const PgdLiftReport p = pgd_lift_check(c, volt);
    s << "# pgd base=" << (p.base_pgd ? "true" : "false") << " hypothesis=" << (p.hypothesis() ? "true" : "false")
      << " cover=" << to_string(p.cover_design.kind) << " holds=" << (p.holds() ? "true" : "false") << "\n";
  }
  if (checks.count("cycles")) {
    for (int f = 0; f < c.base.face_count(); ++f) {
      const CycleLift l = cycle_lift_check(c.base.rotation(), c.base.face(f).vertices(), volt);
      s << "# face " << f << " order=" << l.order << " lifts=" << l.observed_count << " length="
        << l.predicted_length << " holds=" << (l.holds() ? "true" : "false") << "\n";
    }
  }
  return s.str();
}

inline std::string search_csv(const Embedding& e, int mark, long steps, bool baseline) {
  const SearchRun run = search(build_walk(e), e, mark, steps);
  std::optional<SearchRun> base;
  if (baseline) base = search(arc_reversal_walk(e), e, mark, steps);
  std::ostringstream s;
  s << "t,p_vertexface" << (base ? ",p_arcreversal" : "") << "\n";
  for (long t = 0; t <= steps; ++t) {
    s << t << "," << num(run.probability[static_cast<std::size_t>(t)]);
    if (base) s << "," << num(base->probability[static_cast<std::size_t>(t)]);
    s << "\n";
  }
  return s.str();
}

inline std::string mix_csv(const Embedding& e, long steps, double tol) {
  const IncidenceBundle b = build_incidence(e);
  const WalkOperator w = build_walk(b);
  std::ostringstream s;
  s << "t,min_diagonal\n";
  for (long t = 1; t <= steps; ++t) s << t << "," << num(sedentariness(w, b, t, tol).min_diagonal) << "\n";
  return s.str();
}

inline std::string trace_check_csv(const Embedding& e, long steps) {
  const IncidenceBundle b = build_incidence(e);
  const WalkOperator w = build_walk(b);
  std::ostringstream s;
  s << "t,direct,formula,abs_diff\n";
  for (long t = 1; t <= steps; ++t) {
    const TracePower p = trace_power_check(w, b, t);
    s << t << "," << num(p.direct) << ",";
    if (p.formula) {
      s << num(*p.formula) << "," << sci(std::abs(p.direct - *p.formula));
    } else {
      s << "unavailable,unavailable";
    }
    s << "\n";
  }
  return s.str();
}

inline std::set<std::string> parse_checks(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item != "quotient" && item != "pgd" && item != "cycles") {
      throw Error(Errc::parameter, "unknown check '" + item + "' (expected quotient, pgd or cycles)");
    }
    out.insert(item);
  }
  return out;
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"info",   "spectrum", "hamiltonian", "hdigraph",   "classify",
                                                 "cover",  "search",   "mix",         "trace-check"};
  return names;
}

/// Runs one command line.  args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // A bare file argument is shorthand for `info <file>`.
  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      std::find(subcommands().begin(), subcommands().end(), args[0]) == subcommands().end()) {
    args.insert(args.begin(), "info");
  }

  CLI::App app{"Vertex-face quantum walks on circular embeddings", "vfwalk"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Write the primary output here instead of standard output");
  app.add_option("--builtin", g.builtin, "Use a built-in embedding: k4-planar or torus-grid:<n>");
  app.add_option("--tol", g.tol, "Numerical tolerance")->check(CLI::PositiveNumber);

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "Embedding file (emb 1 format)"); };

  auto* info = app.add_subcommand("info", "Counts, genus, type, circularity and tr(U)");
  add_file(info);
  bool dump_incidence = false;
  info->add_flag("--dump-incidence", dump_incidence, "Emit M, N and C as CSV instead");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalue classes of U as JSON");
  add_file(spectrum);

  auto* ham = app.add_subcommand("hamiltonian", "Principal Hamiltonian and H-digraph checks");
  add_file(ham);

  auto* hdig = app.add_subcommand("hdigraph", "H-digraph in DOT format");
  add_file(hdig);
  std::string dot_path;
  hdig->add_option("--dot", dot_path, "DOT output path (standard output if omitted)")->expected(0, 1);

  auto* classify = app.add_subcommand("classify", "Design classification of the vertex-face incidence as JSON");
  add_file(classify);
  std::string matrix_path;
  classify->add_option("--matrix", matrix_path, "0/1 incidence matrix as CSV");

  auto* cover = app.add_subcommand("cover", "Lift an embedding along a permutation voltage assignment");
  std::string volt_path, checks;
  cover->add_option("file", file, "Base embedding file")->required();
  cover->add_option("voltage", volt_path, "Voltage file (vlt 1 format)")->required();
  cover->add_option("--check", checks, "Comma-separated checks: quotient, pgd, cycles");

  auto* srch = app.add_subcommand("search", "Marked-vertex search success probabilities as CSV");
  add_file(srch);
  int mark = 0;
  long steps = 0;
  std::string baseline, csv_path;
  srch->add_option("--mark", mark, "Marked vertex")->required();
  srch->add_option("--steps", steps, "Number of steps")->required()->check(CLI::PositiveNumber);
  srch->add_option("--baseline", baseline, "Also run a baseline walk")->check(CLI::IsMember({"arc-reversal"}));
  srch->add_option("--csv", csv_path, "CSV output path (standard output if omitted)")->expected(0, 1);

  auto* mix = app.add_subcommand("mix", "Minimum return probability per step as CSV");
  add_file(mix);
  mix->add_option("--steps", steps, "Number of steps")->required()->check(CLI::PositiveNumber);
  mix->add_option("--csv", csv_path, "CSV output path (standard output if omitted)")->expected(0, 1);

  auto* trace = app.add_subcommand("trace-check", "tr(U^t) against the 2-design formula");
  add_file(trace);
  long trace_steps = 10;
  trace->add_option("--steps", trace_steps, "Largest power")->check(CLI::PositiveNumber);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "vfwalk: " << e.what() << "\n";
    return validation;
  }

  try {
    if (info->parsed()) {
      const Embedding e = load_embedding(g, file);
      emit(g.out, out, dump_incidence ? incidence_csv(build_incidence(e)) : info_text(e));
    } else if (spectrum->parsed()) {
      emit(g.out, out, spectrum_json(load_embedding(g, file), g.tol).dump(2) + "\n");
    } else if (ham->parsed()) {
      emit(g.out, out, hamiltonian_text(load_embedding(g, file), g.tol));
    } else if (hdig->parsed()) {
      const Embedding e = load_embedding(g, file);
      const IncidenceBundle b = build_incidence(e);
      const Hamiltonian h = principal_hamiltonian(build_walk(b), b, g.tol);
      emit(dot_path.empty() ? g.out : dot_path, out, to_dot(h_digraph(h), e));
    } else if (classify->parsed()) {
      IntMatrix C;
      if (!matrix_path.empty()) {
        if (!file.empty() || !g.builtin.empty()) throw Error(Errc::parameter, "--matrix excludes an embedding argument");
        C = parse_matrix_csv(detail::read_file(matrix_path));
      } else {
        C = build_incidence(load_embedding(g, file)).C;
      }
      emit(g.out, out, design_json(classify_design(C, g.tol)).dump(2) + "\n");
    } else if (cover->parsed()) {
      const std::set<std::string> wanted = parse_checks(checks);
      if (!g.builtin.empty()) throw Error(Errc::parameter, "cover takes a base embedding file, not --builtin");
      const Embedding base = load_embedding(g, file);
      const VoltageAssignment volt = read_voltage_file(volt_path, base.rotation());
      const CoverMap c = build_cover(base, volt);
      emit(g.out, out, format_embedding(c.cover.rotation()));
      out << cover_checks(c, volt, wanted);
    } else if (srch->parsed()) {
      const Embedding e = load_embedding(g, file);
      emit(csv_path.empty() ? g.out : csv_path, out, search_csv(e, mark, steps, !baseline.empty()));
    } else if (mix->parsed()) {
      emit(csv_path.empty() ? g.out : csv_path, out, mix_csv(load_embedding(g, file), steps, g.tol));
    } else if (trace->parsed()) {
      emit(g.out, out, trace_check_csv(load_embedding(g, file), trace_steps));
    }
  } catch (const Error& e) {
    err << "vfwalk: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == Errc::io ? io : validation;
  }
  return ok;
}

}  // namespace vfwalk::cli

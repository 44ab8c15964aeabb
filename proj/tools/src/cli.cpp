#include "thetatools/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "thetamirror/errors.hpp"
#include "thetatools/io.hpp"

namespace theta::cli {

namespace {

using io::json;

struct VerificationFailure : Error {
  using Error::Error;
};

struct Options {
  std::string target = "p2-toric";
  std::int64_t order = 3;
  bool json = false;
  int threads = 1;
  std::string out;
  std::string diagram;
};

void add_common(CLI::App* sub, Options& o, bool with_target = true) {
  if (with_target) {
    sub->add_option("--target", o.target, "builtin target name or target JSON file");
    sub->add_option("--order", o.order, "truncation order (degree < order is kept)")->check(CLI::PositiveNumber);
    sub->add_option("--diagram", o.diagram, "scattering diagram JSON (default: the target's builtin diagram)");
    sub->add_option("--threads", o.threads, "worker threads for structure constants")->check(CLI::PositiveNumber);
  }
  sub->add_flag("--json", o.json, "JSON output");
  sub->add_option("--out", o.out, "write output to this file");
}

ScatteringDiagram load_diagram(const AffineSurface& s, const Options& o) {
  if (o.diagram.empty()) return builtin_diagram(s, o.order);
  ScatteringDiagram d = io::diagram_from_json(s, io::read_json_file(o.diagram));
  if (d.order != o.order) d.order = o.order;
  return d;
}

std::vector<BDirection> parse_dirs(const AffineSurface& s, const std::vector<std::string>& in) {
  std::vector<BDirection> out;
  for (const auto& x : in) out.push_back(io::parse_direction(s, x));
  return out;
}

json endpoints_json(const AffineSurface& s, const ThetaAlgebra& alg) {
  json e = json::array();
  for (const auto& [r, z] : alg.endpoints()) {
    std::ostringstream x, y;
    x << z.x[0];
    y << z.x[1];
    e.push_back({{"output", format_direction(s, r)}, {"cone", z.cone + 1}, {"point", {x.str(), y.str()}}});
  }
  return e;
}

std::string wall_str(const AffineSurface& s, const Wall& w) {
  std::ostringstream os;
  os << "cone " << w.cone + 1 << " dir (" << w.dir[0] << "," << w.dir[1] << "): 1";
  for (const auto& t : w.terms) {
    os << (t.coeff < 0 ? " - " : " + ");
    Int c = t.coeff < 0 ? Int(-t.coeff) : t.coeff;
    if (c != 1) os << c << "·";
    os << "t^" << s.monoid().format(t.A) << "·z^" << (t.k < 0 ? "-" : "") << "(" << std::abs(t.k) * w.dir[0] << ","
       << std::abs(t.k) * w.dir[1] << ")";
  }
  return os.str();
}

CurveClass parse_class(const AffineSurface& s, const std::string& text) {
  CurveClass a;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      a.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw InvalidInput("bad curve class '" + text + "'");
    }
  }
  if (a.size() != s.monoid().L.size()) throw InvalidInput("curve class '" + text + "' has the wrong rank");
  return a;
}

IntMatrix load_matrix(const std::string& file, const std::string& inline_rows) {
  if (!inline_rows.empty()) {
    json rows;
    try {
      rows = json::parse(inline_rows);
    } catch (const json::parse_error&) {
      throw InvalidInput("--matrix is not a JSON array of rows");
    }
    if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw InvalidInput("--matrix expects [[...],...]");
    return io::matrix_from_json({{"rows", rows.size()}, {"cols", rows[0].size()}, {"entries", rows}});
  }
  if (file.empty()) throw InvalidInput("give a matrix file or --matrix");
  return io::matrix_from_json(io::read_json_file(file));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out_stream, std::ostream& err) {
  CLI::App app{"Theta functions of log Calabi-Yau surfaces", "theta"};
  app.require_subcommand(1);
  Options o;
  std::vector<std::string> dirs;
  std::string name, file, matrix, cls;
  bool compare = false;

  auto* target = app.add_subcommand("target", "builtin targets")->require_subcommand(1);
  auto* t_list = target->add_subcommand("list", "list builtin targets");
  add_common(t_list, o, false);
  auto* t_show = target->add_subcommand("show", "show a target");
  t_show->add_option("name", o.target, "builtin name or JSON file")->required();
  add_common(t_show, o, false);

  auto* scatter = app.add_subcommand("scatter", "scattering diagrams")->require_subcommand(1);
  auto* s_complete = scatter->add_subcommand("complete", "complete the diagram to the given order");
  add_common(s_complete, o);
  auto* s_check = scatter->add_subcommand("check", "check consistency to the given order");
  add_common(s_check, o);

  auto* product = app.add_subcommand("product", "product of two theta functions");
  add_common(product, o);
  product->add_option("dirs", dirs, "two directions: 0, v<i> or cone:a,b")->required()->expected(2);

  auto* trace_cmd = app.add_subcommand("trace", "theta_0 coefficient of a product");
  add_common(trace_cmd, o);
  trace_cmd->add_option("dirs", dirs, "directions")->required();

  auto* counts = app.add_subcommand("counts", "naive curve counts");
  add_common(counts, o);
  counts->add_option("--class", cls, "curve class, comma separated");
  counts->add_option("dirs", dirs, "directions")->required();

  auto* period = app.add_subcommand("period", "classical period of the superpotential");
  add_common(period, o);
  period->add_flag("--compare-quantum", compare, "compare with the quantum period oracle");

  auto* type = app.add_subcommand("type", "tropical types")->require_subcommand(1);
  auto* ty_check = type->add_subcommand("check", "validate, balance and realize a type");
  auto* ty_classify = type->add_subcommand("classify", "classify a type");
  auto* ty_cut = type->add_subcommand("cut", "cut a k-trace type at its output vertex");
  for (auto* sub : {ty_check, ty_classify, ty_cut}) {
    add_common(sub, o);
    sub->add_option("file", file, "type JSON")->required();
  }

  auto* lattice = app.add_subcommand("lattice", "integer lattice utilities")->require_subcommand(1);
  auto* l_snf = lattice->add_subcommand("snf", "Smith normal form");
  auto* l_coker = lattice->add_subcommand("coker", "cokernel order");
  for (auto* sub : {l_snf, l_coker}) {
    add_common(sub, o, false);
    sub->add_option("file", file, "matrix JSON");
    sub->add_option("--matrix", matrix, "inline rows, e.g. [[2,1],[0,2]]");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out_stream << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out_stream << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  std::ostringstream out;
  int status = 0;
  try {
    if (t_list->parsed()) {
      if (o.json)
        out << json(builtin_target_names()).dump(2) << "\n";
      else
        for (const auto& n : builtin_target_names()) out << n << "\n";
    } else if (t_show->parsed()) {
      AffineSurface s = io::load_target(o.target);
      if (o.json) {
        out << io::to_json(s).dump(2) << "\n";
      } else {
        out << "target " << s.name() << "\n";
        if (!s.provenance().empty()) out << "  " << s.provenance() << "\n";
        out << "  curve classes: " << s.monoid().labels.size() << " generator(s)";
        for (std::size_t i = 0; i < s.monoid().labels.size(); ++i)
          out << " " << s.monoid().labels[i] << " (L=" << s.monoid().L[i] << ")";
        out << "\n";
        for (int r = 0; r < s.num_rays(); ++r) {
          const Ray& ray = s.ray(r);
          out << "  ray " << r + 1 << " " << ray.label << ": D^2 = " << ray.selfint
              << ", kink " << s.monoid().format(ray.kink) << (ray.boundary ? ", boundary" : "") << "\n";
        }
        Mat2 m = s.monodromy();
        out << "  monodromy [[" << m[0][0] << "," << m[0][1] << "],[" << m[1][0] << "," << m[1][1] << "]]\n";
      }
    } else if (s_complete->parsed() || s_check->parsed()) {
      AffineSurface s = io::load_target(o.target);
      ScatteringDiagram d = load_diagram(s, o);
      if (s_complete->parsed()) d = complete_to_order(s, d, o.order);
      ConsistencyReport rep = check_consistency(s, d, o.order);
      if (o.json) {
        json j = io::to_json(s, d);
        j["consistent"] = rep.ok;
        if (rep.first_failing_degree) j["first_failing_degree"] = *rep.first_failing_degree;
        out << j.dump(2) << "\n";
      } else {
        if (s_complete->parsed())
          for (const auto& w : d.walls) out << wall_str(s, w) << "\n";
        if (rep.ok)
          out << "consistent to order " << o.order << " (" << d.walls.size() << " walls)\n";
        else
          out << "inconsistent: first discrepancy at degree " << *rep.first_failing_degree << "\n";
      }
      if (!rep.ok) status = 2;
    } else if (product->parsed() || trace_cmd->parsed() || counts->parsed()) {
      AffineSurface s = io::load_target(o.target);
      ThetaAlgebra alg(s, load_diagram(s, o), o.threads);
      auto in = parse_dirs(s, dirs);
      if (product->parsed()) {
        const ThetaElem& e = alg.basis_product(in[0], in[1]);
        if (o.json)
          out << json{{"product", io::to_json(s, e)}, {"endpoints", endpoints_json(s, alg)}}.dump(2) << "\n";
        else
          out << e.str(s) << "\n";
      } else if (trace_cmd->parsed()) {
        Series tr = alg.trace(in);
        if (o.json)
          out << json{{"trace", io::to_json(tr)}, {"endpoints", endpoints_json(s, alg)}}.dump(2) << "\n";
        else
          out << tr.str() << "\n";
      } else {
        Series tr = alg.trace(in);
        if (!cls.empty()) {
          CurveClass A = parse_class(s, cls);
          Int n = alg.naive_count(in, A);
          if (o.json)
            out << json{{"class", A}, {"count", io::to_json(n)}}.dump(2) << "\n";
          else
            out << n << "\n";
        } else if (o.json) {
          json rows = json::array();
          for (const auto& [A, c] : tr.terms()) rows.push_back({{"class", A}, {"count", io::to_json(c)}});
          out << json{{"counts", rows}}.dump(2) << "\n";
        } else {
          for (const auto& [A, c] : tr.terms()) out << s.monoid().format(A) << "\t" << c << "\n";
        }
      }
    } else if (period->parsed()) {
      AffineSurface s = io::load_target(o.target);
      ScatteringDiagram d = load_diagram(s, o);
      if (compare) {
        PeriodReport r = compare_periods(s, d, o.order, o.threads);
        if (o.json) {
          out << io::to_json(r).dump(2) << "\n";
        } else {
          out << "degree\tpi_W\tG\tequal\n";
          for (std::int64_t k = 0; k < o.order; ++k)
            out << k << "\t" << r.classical[k] << "\t" << r.quantum[k] << "\t"
                << (r.classical[k] == r.quantum[k] ? "yes" : "no") << "\n";
          if (!r.binomial.empty())
            out << "binomial decomposition " << (r.binomial_holds ? "holds" : "fails") << "\n";
          out << (r.equal() ? "equal" : "not equal") << "\n";
        }
        if (!r.equal()) status = 2;
      } else {
        ThetaAlgebra alg(s, d, o.threads);
        PeriodSeries p = classical_period(alg, superpotential(s, alg.order()), o.order);
        if (o.json) {
          json c = json::array();
          for (const auto& x : p.coeffs) c.push_back(io::to_json(x));
          out << json{{"target", s.name()}, {"order", o.order}, {"classical", c}}.dump(2) << "\n";
        } else {
          out << "degree\tpi_W\n";
          for (std::int64_t k = 0; k < o.order; ++k) out << k << "\t" << p[k] << "\n";
        }
      }
    } else if (ty_check->parsed() || ty_classify->parsed() || ty_cut->parsed()) {
      AffineSurface s = io::load_target(o.target);
      TropicalType t = io::type_from_json(io::read_json_file(file));
      if (ty_check->parsed()) {
        auto bad = validate(s, t);
        json j = {{"violations", bad}};
        if (bad.empty()) {
          bool bal = is_balanced(s, t);
          UniversalCone c = realizability_cone(s, t);
          j["balanced"] = bal;
          j["realizable"] = c.realizable();
          j["dimension"] = c.dimension;
          if (!bal || !c.realizable()) status = 2;
        } else {
          status = 2;
        }
        if (o.json) {
          out << j.dump(2) << "\n";
        } else if (!bad.empty()) {
          for (const auto& b : bad) out << "violation: " << b << "\n";
        } else {
          out << "well formed, " << (j["balanced"].get<bool>() ? "balanced" : "not balanced") << ", "
              << (j["realizable"].get<bool>() ? "realizable" : "not realizable") << ", dim tau = "
              << j["dimension"].get<std::size_t>() << "\n";
        }
      } else if (ty_classify->parsed()) {
        TypeClassification c = classify(s, t);
        json j = {{"kind", c.str().substr(0, c.str().find(' '))}, {"dim_tau", c.dim_tau}, {"dim_out", c.dim_out},
                  {"automorphisms", automorphism_count(t)}};
        if (c.kind == TypeClassification::None) j["kind"] = "none";
        if (c.kind == TypeClassification::KTrace) j["k"] = c.k;
        if (c.kind == TypeClassification::None) j["reason"] = c.reason;
        if (c.kind == TypeClassification::BrokenLine) j["k_tau"] = io::to_json(k_tau(s, t));
        if (o.json) {
          out << j.dump(2) << "\n";
        } else {
          out << c.str() << "\n";
          if (j.contains("k_tau")) out << "k_tau = " << k_tau(s, t) << "\n";
          out << "|Aut| = " << automorphism_count(t) << "\n";
        }
      } else {
        CutResult cut = cut_at_vout(s, t);
        SplittingReport rep = splitting_multiplicity(cut.gluing);
        if (o.json) {
          json pieces = json::array();
          for (const auto& p : cut.pieces)
            pieces.push_back({{"trivial", p.trivial}, {"classification", p.classification.str()}, {"type", io::to_json(p.type)}});
          json ks = json::array();
          for (const auto& k : rep.piece_k) ks.push_back(io::to_json(k));
          out << json{{"pieces", pieces},
                      {"star", io::to_json(cut.star)},
                      {"epsilon", io::to_json(cut.gluing.epsilon())},
                      {"piece_k", ks},
                      {"k_tau", io::to_json(rep.k_tau)},
                      {"coker_epsilon", io::to_json(rep.coker_epsilon)},
                      {"identity_holds", rep.identity_holds}}
                     .dump(2)
              << "\n";
        } else {
          for (std::size_t i = 0; i < cut.pieces.size(); ++i)
            out << "piece " << i + 1 << ": " << (cut.pieces[i].trivial ? "trivial" : cut.pieces[i].classification.str())
                << ", k = " << rep.piece_k[i] << "\n";
          out << "k_tau = " << rep.k_tau << ", |coker eps| = " << rep.coker_epsilon << ", product of piece k = "
              << rep.product_of_pieces << " (identity holds)\n";
        }
      }
    } else if (l_snf->parsed() || l_coker->parsed()) {
      IntMatrix m = load_matrix(file, matrix);
      if (l_snf->parsed()) {
        SmithDecomposition d = smith_normal_form(m);
        json diag = json::array();
        for (const auto& x : d.diagonal()) diag.push_back(io::to_json(x));
        if (o.json) {
          out << json{{"diagonal", diag}, {"rank", d.rank}, {"U", io::to_json(d.U)}, {"D", io::to_json(d.D)}, {"V", io::to_json(d.V)}}
                     .dump(2)
              << "\n";
        } else {
          out << "diagonal";
          for (const auto& x : d.diagonal()) out << " " << x;
          out << "\nrank " << d.rank << "\n";
        }
      } else {
        CokernelOrder c = cokernel_order(m);
        if (o.json) {
          json j = {{"finite", c.finite}, {"torsion", io::to_json(c.torsion)}, {"free_rank", c.free_rank}};
          if (c.finite) j["order"] = io::to_json(c.order);
          out << j.dump(2) << "\n";
        } else if (c.finite) {
          out << c.order << "\n";
        } else {
          out << "infinite (free rank " << c.free_rank << ", torsion " << c.torsion << ")\n";
        }
      }
    }
  } catch (const Mismatch& e) {
    err << "verification failed: " << e.what() << "\n";
    status = 2;
  } catch (const IdentityViolation& e) {
    err << "verification failed: " << e.what() << "\n";
    status = 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (o.out.empty()) {
    out_stream << out.str();
  } else {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write '" << o.out << "'\n";
      return 1;
    }
    f << out.str();
  }
  return status;
}

}  // namespace theta::cli

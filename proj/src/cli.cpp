#include "permeq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "permeq/demo.hpp"
#include "permeq/equivariant.hpp"
#include "permeq/invariant.hpp"
#include "permeq/matrix_io.hpp"
#include "permeq/optimize.hpp"
#include "permeq/oracle.hpp"
#include "permeq/spectral.hpp"

namespace permeq::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupArgs {
  std::vector<std::string> perms;
  std::string perm_file;
  int n = 0;
  std::string cycle_type;
};

void add_group_options(CLI::App* app, GroupArgs& g) {
  app->add_option("--perm", g.perms, "generator in cycle notation or one-line image (repeatable)");
  app->add_option("--perm-file", g.perm_file, "file holding one generator per line");
  app->add_option("--n", g.n, "number of labels")->check(CLI::PositiveNumber);
  app->add_option("--cycle-type", g.cycle_type, "AxB: A cycles of length B on consecutive labels");
}

int infer_n(const std::string& text) {
  if (text.find('(') != std::string::npos) {
    int mx = 0;
    std::string num;
    for (char c : text + " ") {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        num += c;
      } else if (!num.empty()) {
        mx = std::max(mx, std::stoi(num));
        num.clear();
      }
    }
    return mx;
  }
  int count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool sep = c == ',' || std::isspace(static_cast<unsigned char>(c));
    if (!sep && !in_token) ++count;
    in_token = !sep;
  }
  return count;
}

std::vector<Permutation> generators(const GroupArgs& g) {
  std::vector<std::string> texts = g.perms;
  if (!g.perm_file.empty()) {
    std::ifstream in(g.perm_file);
    if (!in) throw UsageError("cannot read " + g.perm_file);
    for (std::string line; std::getline(in, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos) texts.push_back(line);
  }
  std::vector<Permutation> out;
  if (!g.cycle_type.empty()) {
    if (!texts.empty()) throw UsageError("--cycle-type cannot be combined with --perm");
    const auto x = g.cycle_type.find_first_of("xX");
    if (x == std::string::npos) throw UsageError("--cycle-type expects AxB, e.g. 28x28");
    int count = 0, length = 0;
    try {
      count = std::stoi(g.cycle_type.substr(0, x));
      length = std::stoi(g.cycle_type.substr(x + 1));
    } catch (const std::exception&) {
      throw UsageError("--cycle-type expects AxB, e.g. 28x28");
    }
    if (count < 1 || length < 1) throw UsageError("--cycle-type needs positive A and B");
    if (g.n && g.n != count * length) throw UsageError("--n disagrees with --cycle-type");
    out.push_back(cycle_type_permutation(count, length));
    return out;
  }
  if (texts.empty()) throw UsageError("give at least one --perm, --perm-file or --cycle-type");
  int n = g.n;
  if (!n)
    for (const auto& t : texts) n = std::max(n, infer_n(t));
  if (!n) throw UsageError("cannot infer n from an empty permutation; pass --n");
  for (const auto& t : texts) out.push_back(parse_permutation(t, n));
  return out;
}

const Permutation& single(const std::vector<Permutation>& gens) {
  if (gens.size() != 1) throw CyclicOnlyError();
  return gens.front();
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

Matrix read_matrix(const std::string& path) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    return matrix_from_json(json::parse(in));
  }
  std::ifstream probe(path);
  if (!probe) throw UsageError("cannot read " + path);
  return read_csv_file(path);
}

std::string label(int l, int m) { return "(" + std::to_string(l) + "," + std::to_string(m) + ")"; }

json big(const BigInt& b) { return b.str(); }

json rank_vector_json(const RankVector& v) {
  json labels = json::array();
  for (const auto& e : v.entries) labels.push_back(label(e.l, e.m));
  return {{"field", to_string(v.field)}, {"values", v.values()}, {"labels", labels}, {"total_rank", v.total_rank}};
}

json descriptor_json(const ComponentDescriptor& d) {
  json blocks = json::array();
  for (const auto& b : d.block_shapes)
    blocks.push_back({{"kind", b.kind}, {"l", b.l}, {"m", b.m}, {"size", b.size}, {"rank", b.rank}});
  json j = {{"rank_vector", rank_vector_json(d.rank_vector)}, {"dimension", d.dimension}, {"blocks", blocks}};
  if (d.degree) {
    j["degree"] = big(*d.degree);
  } else {
    j["degree"] = nullptr;
    j["degree_note"] = "real degree not computed (conjectured: square of the complex degree)";
  }
  return j;
}

json spectrum_json(const BlockSpectrum& s) {
  json d = json::object();
  for (const auto& [l, c] : s.multiplicities) d[std::to_string(l)] = c;
  json cb = json::array(), rb = json::array();
  for (const auto& b : s.complex_blocks) {
    const cdouble ev = b.eigenvalue();
    cb.push_back({{"l", b.l}, {"m", b.m}, {"size", b.size}, {"offset", b.offset}, {"eigenvalue", {ev.real(), ev.imag()}}});
  }
  for (const auto& b : s.real_blocks)
    rb.push_back({{"kind", to_string(b.kind)}, {"l", b.l}, {"m", b.m}, {"size", b.size}, {"dim", b.dim()},
                  {"offset", b.offset}});
  return {{"cycle_lengths", s.cycle_lengths}, {"k", s.k}, {"d", d}, {"complex_blocks", cb}, {"real_blocks", rb}};
}

json partition_json(const Partition& p) { return {{"k", p.k()}, {"blocks", p.blocks}}; }

json groups_json(const std::vector<std::vector<TiedWeight>>& groups) {
  json out = json::array();
  for (const auto& g : groups) {
    json grp = json::array();
    for (const auto& w : g) grp.push_back({w.row, w.col, w.sign});
    out.push_back(grp);
  }
  return out;
}

json sharing_json(const WeightSharingReport& r) {
  return {{"encoder_groups", groups_json(r.encoder_groups)},
          {"decoder_groups", groups_json(r.decoder_groups)},
          {"inactive_inputs", r.inactive_inputs},
          {"bottleneck", r.bottleneck},
          {"free_parameters", r.free_parameters()}};
}

json fit_json(const FitResult& f) {
  json blocks = json::array();
  for (const auto& b : f.per_block)
    blocks.push_back({{"label", b.label},
                      {"kind", b.kind},
                      {"offset", b.offset},
                      {"dim", b.dim},
                      {"rank", b.rank},
                      {"kept", b.kept},
                      {"dropped", b.dropped},
                      {"boundary_tie", b.boundary_tie}});
  json cands = json::array();
  for (const auto& c : f.candidates) cands.push_back({{"values", c.component.values()}, {"loss", c.loss}});
  json j = {{"kind", f.kind},
            {"loss", f.loss},
            {"rank_bound", f.rank_bound},
            {"minimizer", matrix_to_json(f.minimizer)},
            {"per_block", blocks},
            {"non_unique", f.non_unique},
            {"search", f.search},
            {"heuristic", f.heuristic},
            {"candidates", cands},
            {"candidates_evaluated", f.candidates_evaluated}};
  j["component"] = f.component ? rank_vector_json(*f.component) : json(nullptr);
  j["ridge"] = f.ridge ? json(*f.ridge) : json(nullptr);
  if (f.compact.size()) j["compact"] = matrix_to_json(f.compact);
  return j;
}

json error_json(const std::string& type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant and equivariant linear maps under permutation actions", "permeq"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GroupArgs group;
  std::string out_path, field_text = "real";
  int rank = -1;
  std::uint64_t seed = 1;

  auto* analyze = app.add_subcommand("analyze", "cycle type, eigenvalue multiplicities, commutant dimension, layouts");
  add_group_options(analyze, group);
  analyze->add_option("--out", out_path);

  auto* count = app.add_subcommand("count", "number of irreducible components (plain integer)");
  add_group_options(count, group);
  count->add_option("--rank", rank)->required();
  count->add_option("--field", field_text)->check(CLI::IsMember({"real", "complex"}));

  bool count_only = false;
  std::string limit_text = "1000000";
  auto* components = app.add_subcommand("components", "enumerate irreducible components");
  add_group_options(components, group);
  components->add_option("--rank", rank)->required();
  components->add_option("--field", field_text)->check(CLI::IsMember({"real", "complex"}));
  components->add_flag("--count-only", count_only);
  components->add_option("--limit", limit_text);
  components->add_option("--out", out_path);

  std::string space = "equivariant", u_path, w_path, x_path, y_path, csv_path;
  auto* project = app.add_subcommand("project", "nearest point of the invariant or equivariant linear space");
  add_group_options(project, group);
  project->add_option("--space", space)->check(CLI::IsMember({"invariant", "equivariant"}));
  project->add_option("--u", u_path)->required();
  project->add_option("--weight", w_path, "symmetric PSD weight W for ||.||_W");
  project->add_option("--x", x_path, "data X; uses W = X X^T");
  project->add_option("--out", out_path);
  project->add_option("--csv", csv_path, "also write the projection as CSV");

  std::string mode = "equivariant", component_text, search_limit_text = "1000000", search_text = "exhaustive",
              heuristic_text;
  double ridge = 0;
  auto* fit = app.add_subcommand("fit", "closed-form squared-error fit");
  add_group_options(fit, group);
  fit->add_option("--mode", mode)->check(CLI::IsMember({"invariant", "equivariant", "unconstrained"}));
  fit->add_option("--rank", rank)->required();
  fit->add_option("--x", x_path)->required();
  fit->add_option("--y", y_path)->required();
  fit->add_option("--component", component_text, "real rank vector, e.g. 1,0,1");
  fit->add_option("--search-limit", search_limit_text);
  fit->add_option("--search", search_text)->check(CLI::IsMember({"exhaustive", "budget_dp", "dp"}));
  fit->add_option("--heuristic", heuristic_text)->check(CLI::IsMember({"energy"}));
  fit->add_option("--ridge", ridge)->check(CLI::NonNegativeNumber);
  fit->add_option("--out", out_path);
  fit->add_option("--csv", csv_path, "also write the minimizer as CSV");

  std::string matrix_path;
  auto* factorize = app.add_subcommand("factorize", "autoencoder factors and weight-sharing report");
  add_group_options(factorize, group);
  factorize->add_option("--space", space)->check(CLI::IsMember({"invariant", "equivariant"}));
  factorize->add_option("--matrix", matrix_path, "matrix to factor");
  factorize->add_option("--component", component_text, "sample a random point of this component instead");
  factorize->add_option("--rank", rank, "rank bound (invariant space)");
  factorize->add_option("--seed", seed);
  factorize->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "cross-check closed forms against the brute-force oracles");
  add_group_options(verify, group);
  verify->add_option("--rank", rank);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_path);

  DemoConfig demo;
  std::string save_x;
  auto* demo_cmd = app.add_subcommand("demo-shift", "synthetic shift-equivariant autoencoder comparison");
  demo_cmd->add_option("--height", demo.height)->check(CLI::PositiveNumber);
  demo_cmd->add_option("--width", demo.width)->check(CLI::PositiveNumber);
  demo_cmd->add_option("--samples", demo.samples)->check(CLI::PositiveNumber);
  demo_cmd->add_option("--seed", demo.seed);
  demo_cmd->add_option("--noise", demo.noise)->check(CLI::NonNegativeNumber);
  demo_cmd->add_option("--rank", demo.rank, "rank budget (default: pixels / 4)");
  demo_cmd->add_option("--high-pass-zero", demo.high_pass_zero_blocks);
  demo_cmd->add_option("--save-x", save_x, "write the generated data as CSV");
  demo_cmd->add_option("--out", out_path);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const Field field = parse_field(field_text);
    if (analyze->parsed()) {
      const auto gens = generators(group);
      json g = json::array();
      for (const auto& p : gens) {
        const auto c = cycle_decomposition(p);
        g.push_back({{"image", p.image()}, {"cycles", c.cycles}, {"cycle_lengths", c.lengths()}});
      }
      std::vector<Partition> parts;
      for (const auto& p : gens) parts.push_back(induced_partition(cycle_decomposition(p)));
      json j = {{"n", gens.front().n()},
                {"generators", g},
                {"commutant_dimension", commutant_basis(gens).size()},
                {"invariant_partition", partition_json(finest_common_coarsening(parts))}};
      if (gens.size() == 1) {
        const auto s = eigen_multiplicities(cycle_decomposition(gens.front()));
        j["commutant_dimension_formula"] = commutant_dimension(s);
        j["spectrum"] = spectrum_json(s);
      }
      emit(j, out_path, out);
    } else if (count->parsed()) {
      const auto s = eigen_multiplicities(cycle_decomposition(single(generators(group))));
      if (rank < 0 || rank > s.n) throw UsageError("--rank must lie in [0, n]");
      out << count_components(s, rank, field).str() << "\n";
    } else if (components->parsed()) {
      const auto s = eigen_multiplicities(cycle_decomposition(single(generators(group))));
      if (rank < 0 || rank > s.n) throw UsageError("--rank must lie in [0, n]");
      const BigInt c = count_components(s, rank, field);
      json j = {{"field", to_string(field)}, {"rank", rank}, {"count", big(c)}};
      if (!count_only) {
        json arr = json::array();
        for (const auto& d : enumerate_components(s, rank, field, BigInt(limit_text))) arr.push_back(descriptor_json(d));
        j["components"] = arr;
      }
      emit(j, out_path, out);
    } else if (project->parsed()) {
      const auto gens = generators(group);
      const Matrix u = read_matrix(u_path);
      Matrix w;
      if (!w_path.empty() && !x_path.empty()) throw UsageError("give --weight or --x, not both");
      if (!w_path.empty()) w = read_matrix(w_path);
      if (!x_path.empty()) {
        const Matrix x = read_matrix(x_path);
        w = x * x.transpose();
      }
      Matrix pr;
      if (space == "equivariant") {
        pr = project_commutant(u, gens, w);
      } else {
        std::vector<Partition> parts;
        for (const auto& p : gens) parts.push_back(induced_partition(cycle_decomposition(p)));
        pr = project_invariant(u, finest_common_coarsening(parts), w);
      }
      const Matrix diff = u - pr;
      const double dist = w.size() ? (diff * w).cwiseProduct(diff).sum() : diff.squaredNorm();
      emit({{"space", space}, {"weighted", w.size() > 0}, {"distance_sq", dist}, {"projection", matrix_to_json(pr)}},
           out_path, out);
      if (!csv_path.empty()) write_csv_file(csv_path, pr);
    } else if (fit->parsed()) {
      const Matrix x = read_matrix(x_path), y = read_matrix(y_path);
      FitResult f;
      if (mode == "unconstrained") {
        f = fit_rank_bounded(x, y, rank, ridge);
      } else if (mode == "invariant") {
        f = fit_invariant(x, y, invariant_space(generators(group), static_cast<int>(y.rows()),
                                                static_cast<int>(x.rows()), rank),
                          ridge);
      } else {
        const auto gens = generators(group);
        const Permutation& p = single(gens);
        FitOptions opt;
        opt.ridge = ridge;
        opt.search_limit = BigInt(search_limit_text);
        opt.mode = parse_search_mode(search_text);
        if (!heuristic_text.empty()) opt.mode = SearchMode::energy;
        if (!component_text.empty())
          opt.component = parse_rank_vector(real_base_change(p).layout, Field::real, component_text);
        f = fit_equivariant(x, y, p, rank, opt);
      }
      emit(fit_json(f), out_path, out);
      if (!csv_path.empty()) write_csv_file(csv_path, f.minimizer);
    } else if (factorize->parsed()) {
      const auto gens = generators(group);
      json j;
      if (space == "equivariant") {
        const Permutation& p = single(gens);
        ComponentFactors f;
        if (!matrix_path.empty() == !component_text.empty()) throw UsageError("give exactly one of --matrix, --component");
        if (!matrix_path.empty()) {
          f = factorize_component(read_matrix(matrix_path), p);
        } else {
          std::mt19937_64 rng(seed);
          f = parameterize_component(parse_rank_vector(real_base_change(p).layout, Field::real, component_text), p, rng);
        }
        const RankVector v = classify_component(f.decoder * f.encoder, p);
        j = {{"space", "equivariant"},
             {"component", rank_vector_json(v)},
             {"decoder", matrix_to_json(f.decoder)},
             {"encoder", matrix_to_json(f.encoder)},
             {"decoder_q", matrix_to_json(f.decoder_q)},
             {"encoder_q", matrix_to_json(f.encoder_q)},
             {"weight_sharing", sharing_json(f.pattern)}};
      } else {
        if (matrix_path.empty()) throw UsageError("invariant factorization needs --matrix");
        const Matrix m = read_matrix(matrix_path);
        const int r = rank >= 0 ? rank : static_cast<int>(std::min(m.rows(), m.cols()));
        const auto s = invariant_space(gens, static_cast<int>(m.rows()), static_cast<int>(m.cols()), r);
        const auto f = invariant_autoencoder(s, m);
        j = {{"space", "invariant"},
             {"partition", partition_json(s.partition)},
             {"effective_rank", s.effective_rank()},
             {"decoder", matrix_to_json(f.decoder)},
             {"encoder", matrix_to_json(f.encoder)}};
      }
      emit(j, out_path, out);
    } else if (verify->parsed()) {
      const auto gens = generators(group);
      const int n = gens.front().n();
      json checks = json::array();
      bool all = true;
      auto check = [&](const std::string& name, const json& expected, const json& got, bool pass) {
        checks.push_back({{"name", name}, {"expected", expected}, {"got", got}, {"pass", pass}});
        all = all && pass;
      };
      auto skip = [&](const std::string& name, const std::string& why) {
        checks.push_back({{"name", name}, {"skipped", why}, {"pass", true}});
      };
      const auto basis = static_cast<std::int64_t>(commutant_basis(gens).size());
      if (n <= 16) {
        const auto oracle = nullspace_commutant_dim(gens);
        check("commutant_dimension_vs_nullspace", oracle, basis, oracle == basis);
      } else {
        skip("commutant_dimension_vs_nullspace", "n > 16");
      }
      if (gens.size() == 1) {
        const auto s = eigen_multiplicities(cycle_decomposition(gens.front()));
        check("commutant_dimension_formula_vs_basis", basis, commutant_dimension(s), basis == commutant_dimension(s));
        const int r = rank >= 0 ? std::min(rank, n) : std::min(3, n);
        for (Field f : {Field::real, Field::complex}) {
          const std::string name = "component_count_" + to_string(f);
          try {
            const BigInt o = recursive_component_count(s, r, f), d = count_components(s, r, f);
            check(name, big(o), big(d), o == d);
          } catch (const OracleCapExceeded& e) {
            skip(name, e.what());
          }
        }
        if (n <= 10) {
          std::mt19937_64 rng(seed);
          std::normal_distribution<double> nd;
          Matrix x(n, 2 * n + 2), y(n, 2 * n + 2);
          for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
          for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = nd(rng);
          AlsOptions ao;
          ao.restarts = 20;
          ao.seed = seed;
          const double fl = fit_equivariant(x, y, gens.front(), r).loss;
          const double ol = als_equivariant_global(x, y, gens.front(), r, ao);
          check("equivariant_fit_vs_als", ol, fl, fl <= ol + 1e-6);
          const double dl = fit_rank_bounded(x, y, r).loss;
          const double da = als_fit(x, y, r, ao);
          check("dense_fit_vs_als", da, dl, dl <= da + 1e-6);
        } else {
          skip("equivariant_fit_vs_als", "n > 10");
        }
      }
      emit({{"checks", checks}, {"all_pass", all}}, out_path, out);
      if (!all) return 1;
    } else if (demo_cmd->parsed()) {
      const Matrix x = shift_dataset(demo);
      if (!save_x.empty()) write_csv_file(save_x, x);
      const DemoReport rep = run_shift_demo(demo, x);
      json rows = json::array();
      for (const auto& r : rep.rows)
        rows.push_back({{"name", r.name},
                        {"ranks", r.ranks},
                        {"total_rank", r.total_rank},
                        {"parameters", r.parameters},
                        {"loss", r.loss},
                        {"loss_per_pixel", r.loss_per_pixel}});
      emit({{"height", demo.height},
            {"width", demo.width},
            {"samples", demo.samples},
            {"seed", demo.seed},
            {"noise", demo.noise},
            {"rank", rep.rank},
            {"block_labels", rep.block_labels},
            {"block_energy", rep.block_energy},
            {"rows", rows},
            {"ordering_holds", rep.ordering_holds}},
           out_path, out);
    }
  } catch (const UsageError& e) {
    err << error_json("usage", e.what()).dump() << "\n";
    return 2;
  } catch (const ParseError& e) {
    json j = error_json("parse", e.what());
    j["error"]["token"] = e.token();
    err << j.dump() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    json j = error_json("structural", e.what());
    j["error"]["block"] = {e.block_row(), e.block_col()};
    j["error"]["deviation"] = e.deviation();
    err << j.dump() << "\n";
    return 1;
  } catch (const InvarianceViolation& e) {
    json j = error_json("invariance", e.what());
    j["error"]["block"] = e.block();
    j["error"]["deviation"] = e.deviation();
    err << j.dump() << "\n";
    return 1;
  } catch (const NotEquivariant& e) {
    json j = error_json("not_equivariant", e.what());
    j["error"]["deviation"] = e.deviation();
    err << j.dump() << "\n";
    return 1;
  } catch (const LimitExceeded& e) {
    json j = error_json("limit_exceeded", e.what());
    j["error"]["count"] = big(e.count());
    err << j.dump() << "\n";
    return 1;
  } catch (const CyclicOnlyError& e) {
    err << error_json("cyclic_only", e.what()).dump() << "\n";
    return 1;
  } catch (const RankDeficientData& e) {
    err << error_json("rank_deficient", e.what()).dump() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << error_json("numerical", e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << error_json("invalid", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace permeq::cli

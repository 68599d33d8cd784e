// Command-line front end for the linrel library.
//
// Exit codes: 0 success, 1 precondition or check failure, 2 malformed input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linrel/linrel.hpp"

using namespace linrel;
using io::json;

namespace {

struct Global {
  double tol_rank = 1e-10;
  double tol_eq = 1e-8;
  std::string format = "json";

  Tolerances tol() const {
    Tolerances t{tol_rank, tol_eq};
    t.check();
    return t;
  }
};

// Input problems are reported with exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

LinearRelation load_relation(const std::string& path, const Tolerances& tol) {
  try {
    return io::relation_from_json(load_json(path), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw InputError(path + ": " + e.what());
    throw;
  }
}

Subspace load_subspace(const std::string& path, const Tolerances& tol) {
  try {
    return io::subspace_from_json(load_json(path), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw InputError(path + ": " + e.what());
    throw;
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 1e-300 ? 0.0 : x);
  return buf;
}

// parts below `floor` print as 0
std::string num(Complex z, double floor) {
  const double re = std::abs(z.real()) <= floor ? 0.0 : z.real();
  if (std::abs(z.imag()) <= floor) return num(re);
  return num(re) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

// text output only; JSON keeps every digit
std::string matrix_text(const ComplexMatrix& m, const std::string& indent) {
  std::ostringstream out;
  const double floor = 1e-13 * std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  for (Index i = 0; i < m.rows(); ++i) {
    out << indent << "[";
    for (Index j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << num(m(i, j), floor);
    out << "]\n";
  }
  if (m.rows() == 0) out << indent << "(empty)\n";
  return out.str();
}

std::string relation_text(const std::string& name, const LinearRelation& t, const Tolerances& tol) {
  std::ostringstream out;
  out << name << ": " << t.dim_in() << " -> " << t.dim_out() << "  dom " << t.dom(tol).dim() << "  ran "
      << t.ran(tol).dim() << "  ker " << t.ker(tol).dim() << "  mul " << t.mul(tol).dim() << "\n";
  out << "  graph basis (columns are (x, y)):\n" << matrix_text(t.graph().basis().transpose(), "    ");
  return out.str();
}

std::string nonneg_text(const std::string& name, const NonnegSelfAdjointRelation& a, const Tolerances& tol) {
  return relation_text(name, a.relation(), tol) + "  operator part:\n" + matrix_text(a.op_matrix(), "    ");
}

std::string diagnostics_text(const std::map<std::string, double>& d) {
  std::string out = "diagnostics:\n";
  for (const auto& [k, v] : d) out += "  " + k + " " + num(v) + "\n";
  return out;
}

void emit(const Global& g, const json& j, const std::string& text) {
  if (g.format == "text") {
    std::cout << text;
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

int cmd_block(const Global& g, const std::string& rel_path, const std::string& sub_path) {
  const Tolerances tol = g.tol();
  const auto A = validate(load_relation(rel_path, tol), tol);
  const Subspace s = load_subspace(sub_path, tol);
  const BlockRepresentation r = analyze(A, s, tol);
  const BlockChecks c = block_checks(A, r, tol);
  const Factorization fz = factorize(r, tol);
  const std::map<std::string, double> diag{{"roundtrip_gap", c.roundtrip},
                                           {"b_reconstruction_gap", c.b_reconstruction},
                                           {"c_reconstruction_gap", c.c_reconstruction},
                                           {"f_norm", c.f_norm},
                                           {"g_norm", c.g_norm},
                                           {"factorization_gap", c.factorization},
                                           {"wz_residual", c.wz_matrix}};
  json j = io::to_json(r, tol);
  j["W"] = io::matrix_to_json(fz.w_ambient());
  j["Z"] = io::matrix_to_json(fz.z_ambient());
  j["diagnostics"] = io::to_json(diag);

  std::ostringstream t;
  t << "dims: D1 " << r.D1.dim() << "  D2 " << r.D2.dim() << "  M1 " << r.M1.dim() << "  M2 " << r.M2.dim() << "\n";
  t << "a0:\n" << matrix_text(r.a0, "  ") << "b0:\n" << matrix_text(r.b0, "  ");
  t << "c0:\n" << matrix_text(r.c0, "  ") << "d0:\n" << matrix_text(r.d0, "  ");
  t << "g (S-perp -> S):\n" << matrix_text(r.g_ambient(), "  ");
  t << "W:\n" << matrix_text(fz.w_ambient(), "  ") << "Z:\n" << matrix_text(fz.z_ambient(), "  ");
  t << diagnostics_text(diag);
  emit(g, j, t.str());
  return 0;
}

int cmd_schur(const Global& g, const std::string& rel_path, const std::string& sub_path, const std::string& method) {
  const Tolerances tol = g.tol();
  const auto A = validate(load_relation(rel_path, tol), tol);
  const Subspace s = load_subspace(sub_path, tol);
  SchurResult res = schur_analysis(A, s, tol);

  NonnegSelfAdjointRelation chosen = res.schur;
  try {
    const auto pk = pekarev(A, s, tol);
    res.diagnostics["pekarev_gap"] = graph_gap(pk.schur_p.relation(), res.schur.relation());
    if (method == "pekarev") chosen = pk.schur_p;
  } catch (const Error& e) {
    if (method == "pekarev") throw;
    std::cerr << "pekarev: " << e.what() << "\n";
  }
  if (A.mul().dim() == 0) {
    const ComplexMatrix at = anderson_trapp(A.op_matrix(), s, tol);
    res.diagnostics["anderson_trapp_residual"] = op_norm(res.schur.op_matrix() - at);
    if (method == "anderson-trapp") chosen = validate(LinearRelation::from_matrix(at, tol), tol);
  } else if (method == "anderson-trapp") {
    throw Error(ErrorKind::NotPSD, "anderson-trapp needs an everywhere defined operator (mul A = {0})");
  }

  json j = io::schur_to_json(res, tol);
  j["method"] = method;
  j["schur"] = io::to_json(chosen, tol);
  emit(g, j, nonneg_text("A_/S (" + method + ")", chosen, tol) + diagnostics_text(res.diagnostics));
  return 0;
}

int cmd_compress(const Global& g, const std::string& rel_path, const std::string& sub_path, const std::string& method) {
  const Tolerances tol = g.tol();
  const auto A = validate(load_relation(rel_path, tol), tol);
  const Subspace s = load_subspace(sub_path, tol);
  SchurResult res = schur_analysis(A, s, tol);
  NonnegSelfAdjointRelation chosen = res.compression;
  try {
    const auto pk = pekarev(A, s, tol);
    res.diagnostics["pekarev_gap"] = graph_gap(pk.compression_p.relation(), res.compression.relation());
    if (method == "pekarev") chosen = pk.compression_p;
  } catch (const Error& e) {
    if (method == "pekarev") throw;
    std::cerr << "pekarev: " << e.what() << "\n";
  }
  if (method == "anderson-trapp") throw Error(ErrorKind::ConditionViolated, "compress supports formula and pekarev");
  json j{{"method", method},
         {"compression", io::to_json(chosen, tol)},
         {"L", io::to_json(res.L)},
         {"diagnostics", io::to_json(res.diagnostics)}};
  emit(g, j, nonneg_text("A_S (" + method + ")", chosen, tol) + diagnostics_text(res.diagnostics));
  return 0;
}

int cmd_order(const Global& g, const std::string& a_path, const std::string& b_path) {
  const Tolerances tol = g.tol();
  const auto A = validate(load_relation(a_path, tol), tol);
  const auto B = validate(load_relation(b_path, tol), tol);
  const bool ab = leq(A, B, tol);
  const bool ba = leq(B, A, tol);
  const std::string verdict = ab && ba ? "both (equal)" : ab ? "A<=B" : ba ? "B<=A" : "incomparable";
  json j{{"order", verdict}, {"A_leq_B", ab}, {"B_leq_A", ba}};
  if (ab) j["contraction"] = io::matrix_to_json(order_contraction(A, B, tol));
  emit(g, j, verdict + "\n");
  return 0;
}

int cmd_gen(const Global& g, const InstanceSpec& spec, const std::string& out_rel, const std::string& out_sub) {
  const Tolerances tol = g.tol();
  const Instance inst = generate(spec, tol);
  const json rel = io::to_json(inst.A, tol);
  const json sub = io::to_json(inst.S);
  auto write = [](const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << "\n";
  };
  if (!out_rel.empty()) write(out_rel, rel);
  if (!out_sub.empty()) write(out_sub, sub);
  json j{{"spec",
          {{"n", spec.n}, {"k", spec.k}, {"d1", spec.d1}, {"d2", spec.d2}, {"seed", spec.seed},
           {"spectrum_scale", spec.spectrum_scale}}},
         {"relation", rel},
         {"subspace", sub}};
  emit(g, j, relation_text("A", inst.A.relation(), tol) + "S: dim " + std::to_string(inst.S.dim()) + "\n");
  return 0;
}

int cmd_verify(const Global& g, VerifyOptions opt) {
  opt.tol = g.tol();
  const VerificationReport rep = verify(opt);
  std::ostringstream t;
  t << "seed " << rep.seed << "  trials " << rep.trials << "  max_dim " << rep.max_dim << "\n";
  for (const auto& [name, tally] : rep.checks) {
    t << "  " << name << "  pass " << tally.pass << "  fail " << tally.fail << "  worst " << num(tally.worst_residual) << "\n";
  }
  t << (rep.ok() ? "all checks passed\n" : std::to_string(rep.failures.size()) + " failures\n");
  emit(g, to_json(rep), t.str());
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear relations, Schur complements and compressions of nonnegative selfadjoint relations"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--tol-rank", g.tol_rank, "relative singular value cutoff for numerical rank")->capture_default_str();
  app.add_option("--tol-eq", g.tol_eq, "absolute threshold for gaps and PSD tests")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::string rel_path, sub_path, method = "formula";
  auto* block = app.add_subcommand("block", "2x2 block representation, contractions f, g and the W, Z factorization");
  block->add_option("--relation", rel_path, "relation JSON file")->required();
  block->add_option("--subspace", sub_path, "subspace JSON file")->required();

  auto* schur = app.add_subcommand("schur", "Schur complement A_/S");
  schur->add_option("--relation", rel_path, "relation JSON file")->required();
  schur->add_option("--subspace", sub_path, "subspace JSON file")->required();
  schur->add_option("--method", method, "formula | pekarev | anderson-trapp")
      ->check(CLI::IsMember({"formula", "pekarev", "anderson-trapp"}))
      ->capture_default_str();

  auto* compress = app.add_subcommand("compress", "compression A_S");
  compress->add_option("--relation", rel_path, "relation JSON file")->required();
  compress->add_option("--subspace", sub_path, "subspace JSON file")->required();
  compress->add_option("--method", method, "formula | pekarev")
      ->check(CLI::IsMember({"formula", "pekarev"}))
      ->capture_default_str();

  std::string a_path, b_path;
  auto* order = app.add_subcommand("order", "compare two nonnegative selfadjoint relations in the forms ordering");
  order->add_option("--a", a_path, "relation JSON file for A")->required();
  order->add_option("--b", b_path, "relation JSON file for B")->required();

  InstanceSpec spec;
  std::string out_rel, out_sub;
  auto* gen = app.add_subcommand("gen", "generate a random instance (A, S)");
  gen->add_option("--n", spec.n, "ambient dimension")->capture_default_str();
  gen->add_option("--k", spec.k, "dim S")->capture_default_str();
  gen->add_option("--d1", spec.d1, "dim(S cap dom A)")->capture_default_str();
  gen->add_option("--d2", spec.d2, "dim(S-perp cap dom A)")->capture_default_str();
  gen->add_option("--seed", spec.seed, "64-bit seed")->capture_default_str();
  gen->add_option("--scale", spec.spectrum_scale, "largest possible eigenvalue of A0")->capture_default_str();
  gen->add_option("--out-relation", out_rel, "also write the relation to this file");
  gen->add_option("--out-subspace", out_sub, "also write the subspace to this file");

  VerifyOptions vopt;
  auto* ver = app.add_subcommand("verify", "run every check over generated instances");
  ver->add_option("--seed", vopt.seed, "seed")->capture_default_str();
  ver->add_option("--trials", vopt.trials, "number of instances")->capture_default_str()->check(CLI::NonNegativeNumber);
  ver->add_option("--max-dim", vopt.max_dim, "largest ambient dimension")->capture_default_str()->check(CLI::Range(1, 64));
  ver->add_option("--samples", vopt.maximality_samples, "maximality samples per instance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*block) return cmd_block(g, rel_path, sub_path);
    if (*schur) return cmd_schur(g, rel_path, sub_path, method);
    if (*compress) return cmd_compress(g, rel_path, sub_path, method);
    if (*order) return cmd_order(g, a_path, b_path);
    if (*gen) return cmd_gen(g, spec, out_rel, out_sub);
    if (*ver) return cmd_verify(g, vopt);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::InvalidTolerance ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

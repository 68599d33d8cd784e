#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linrel/generator.hpp"
#include "linrel/json_io.hpp"
#include "linrel/schur.hpp"

namespace linrel {

inline const std::array<const char*, 12>& check_names() {
  static const std::array<const char*, 12> names{
      "adjoint_involution",     "vonneumann_identities", "block_roundtrip",    "contraction_bound",
      "reconstruction_bc",      "factorize_wz",          "schur_membership",   "schur_maximality",
      "schur_lemma_equality",   "compression_domination", "additive_decomposition", "pekarev_equality"};
  return names;
}

struct CheckTally {
  std::int64_t pass = 0;
  std::int64_t fail = 0;
  double worst_residual = 0.0;
};

struct CheckFailure {
  std::int64_t trial = 0;
  std::string check;
  double residual = 0.0;
  std::string message;
  io::json instance;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  Index max_dim = 0;
  Tolerances tol;
  std::map<std::string, CheckTally> checks;
  std::vector<CheckFailure> failures;

  bool ok() const { return failures.empty(); }
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::int64_t trials = 100;
  Index max_dim = 8;
  std::int64_t maximality_samples = 20;
  Tolerances tol;
};

/// Dimensions of trial i, all derived from (seed, i).
inline InstanceSpec trial_spec(std::uint64_t seed, std::int64_t trial, Index max_dim) {
  Rng rng(seed, static_cast<std::uint64_t>(trial));
  InstanceSpec spec;
  spec.n = rng.integer(1, max_dim);
  spec.k = rng.integer(0, spec.n);
  spec.d1 = rng.integer(0, spec.k);
  spec.d2 = rng.integer(0, spec.n - spec.k);
  spec.seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 0x51ed270b27ULL));
  spec.spectrum_scale = std::exp(rng.uniform(-2.0, 2.0));
  return spec;
}

namespace detail {

struct TrialOutcome {
  double residual = 0.0;
  bool pass = true;
  std::string message;
};

// Residual-based check: pass iff residual < limit.
inline TrialOutcome by_residual(double residual, double limit, std::string message = {}) {
  return {residual, residual < limit, residual < limit ? std::string() : std::move(message)};
}

inline TrialOutcome fail(double residual, std::string message) { return {residual, false, std::move(message)}; }

}  // namespace detail

/// Runs every check on `trials` generated instances. Deterministic in the
/// options; trials are independent so the report does not depend on order.
inline VerificationReport verify(const VerifyOptions& opt) {
  opt.tol.check();
  const Tolerances& tol = opt.tol;
  const double eq = tol.eq_abs;
  VerificationReport rep;
  rep.seed = opt.seed;
  rep.trials = opt.trials;
  rep.max_dim = opt.max_dim;
  rep.tol = tol;
  for (const char* name : check_names()) rep.checks[name];

  for (std::int64_t trial = 0; trial < opt.trials; ++trial) {
    const InstanceSpec spec = trial_spec(opt.seed, trial, opt.max_dim);
    Instance inst;
    LinearRelation t;
    io::json instance_json;
    auto record = [&](const char* name, const std::function<detail::TrialOutcome()>& body) {
      detail::TrialOutcome out;
      try {
        out = body();
      } catch (const std::exception& e) {
        out = detail::fail(1.0, e.what());
      }
      CheckTally& tally = rep.checks[name];
      tally.worst_residual = std::max(tally.worst_residual, out.residual);
      if (out.pass) {
        ++tally.pass;
      } else {
        ++tally.fail;
        rep.failures.push_back({trial, name, out.residual, out.message, instance_json});
      }
    };

    bool generated = true;
    std::string gen_error;
    try {
      inst = generate(spec, tol);
      Rng rel_rng(opt.seed ^ 0xa5a5a5a5a5a5a5a5ULL, static_cast<std::uint64_t>(trial));
      const Index n_in = rel_rng.integer(1, opt.max_dim);
      const Index n_out = rel_rng.integer(1, opt.max_dim);
      t = random_relation(rel_rng, n_in, n_out, tol);
      instance_json = {{"spec",
                        {{"n", spec.n}, {"k", spec.k}, {"d1", spec.d1}, {"d2", spec.d2}, {"seed", spec.seed},
                         {"spectrum_scale", spec.spectrum_scale}}},
                       {"A", io::to_json(inst.A, tol)},
                       {"S", io::to_json(inst.S)},
                       {"T", io::to_json(t, tol)}};
    } catch (const std::exception& e) {
      generated = false;
      gen_error = std::string("instance generation failed: ") + e.what();
    }
    if (!generated) {
      for (const char* name : check_names()) record(name, [&] { return detail::fail(1.0, gen_error); });
      continue;
    }

    record("adjoint_involution", [&] {
      const LinearRelation ts = adjoint(t, tol);
      double r = graph_gap(adjoint(ts, tol), t);
      r = std::max(r, gap(ts.mul(tol), complement(t.dom(tol), tol)));
      r = std::max(r, gap(ts.ker(tol), complement(t.ran(tol), tol)));
      r = std::max(r, graph_gap(operator_part(t, tol).reassemble(tol), t));
      return detail::by_residual(r, eq, "adjoint/involution identities fail");
    });

    record("vonneumann_identities", [&] {
      const LinearRelation product = compose(adjoint(t, tol), t, tol);
      validate(product, tol);
      return detail::by_residual(gram_identities(t, product, tol).worst(), eq, "T*T identities fail");
    });

    BlockRepresentation br;
    BlockChecks bc;
    bool have_blocks = true;
    std::string block_error;
    try {
      br = analyze(inst.A, inst.S, tol);
      bc = block_checks(inst.A, br, tol);
    } catch (const std::exception& e) {
      have_blocks = false;
      block_error = e.what();
    }
    auto need_blocks = [&] {
      if (!have_blocks) raise(ErrorKind::InternalInconsistency, "block analysis failed: " + block_error);
    };

    record("block_roundtrip", [&] {
      need_blocks();
      const double r = std::max({bc.roundtrip, bc.adjoint_blocks, bc.dom_split, bc.mul_split});
      if (!bc.splitting.agree() || !bc.splitting.dom_invariant || !bc.mul_invariant) {
        return detail::fail(r, "splitting conditions disagree");
      }
      return detail::by_residual(r, eq, "assemble(analyze(A, S)) differs from A");
    });

    record("contraction_bound", [&] {
      need_blocks();
      const double excess = std::max({0.0, bc.f_norm - 1.0, bc.g_norm - 1.0});
      const double iso = std::max(bc.v1_isometry, bc.v2_isometry);
      if (!(iso < eq)) return detail::fail(std::max(excess, iso), "V1 or V2 is not a partial isometry");
      return detail::by_residual(excess, 1e-10, "f or g is not a contraction");
    });

    record("reconstruction_bc", [&] {
      need_blocks();
      if (bc.c_in_b_star != 0.0) return detail::fail(1.0, "c is not contained in b*");
      return detail::by_residual(std::max(bc.b_reconstruction, bc.c_reconstruction), eq,
                                 "b or c differs from its reconstruction through g");
    });

    record("factorize_wz", [&] {
      need_blocks();
      return detail::by_residual(std::max(bc.factorization, bc.wz_matrix), eq, "(WZ)*(WZ) differs from A0");
    });

    SchurResult sr;
    bool have_schur = true;
    std::string schur_error;
    try {
      need_blocks();
      sr.rep = br;
      detail::fill_schur(inst.A, sr, tol);
      detail::fill_compression(inst.A, sr, tol);
    } catch (const std::exception& e) {
      have_schur = false;
      schur_error = e.what();
    }
    auto need_schur = [&] {
      if (!have_schur) raise(ErrorKind::InternalInconsistency, "Schur complement failed: " + schur_error);
    };

    record("schur_membership", [&] {
      need_schur();
      if (!is_member(inst.A, inst.S, sr.schur, tol)) return detail::fail(1.0, "A_{/S} is not in M(A, S-perp)");
      if (sr.diagnostics.at("schur_range_in_s_perp") != 1.0) return detail::fail(1.0, "ran A_{/S} leaves S-perp");
      return detail::TrialOutcome{};
    });

    record("schur_maximality", [&] {
      need_schur();
      const auto probe = maximality_probe(inst.A, inst.S, sr, splitmix64(spec.seed), opt.maximality_samples, tol);
      if (probe.violations > 0) {
        return detail::fail(static_cast<double>(probe.violations),
                            std::to_string(probe.violations) + " sampled members exceed A_{/S}");
      }
      return detail::TrialOutcome{};
    });

    record("schur_lemma_equality", [&] {
      need_schur();
      double r = sr.diagnostics.at("schur_lemma_gap");
      if (inst.A.mul().dim() == 0) {
        r = std::max(r, op_norm(sr.schur.op_matrix() - anderson_trapp(inst.A.op_matrix(), inst.S, tol)));
      }
      return detail::by_residual(r, eq, "T*T expressions or bounded-case formula disagree");
    });

    record("compression_domination", [&] {
      need_schur();
      if (sr.diagnostics.at("compression_below_a") != 1.0) return detail::fail(1.0, "A_S <= A fails");
      return detail::by_residual(std::max(sr.diagnostics.at("compression_lemma_gap"), sr.diagnostics.at("compression_mul_gap")),
                                 eq, "compression differs from s*s (+) mul A");
    });

    record("additive_decomposition", [&] {
      need_schur();
      const double r = graph_gap(add(sr.compression.relation(), sr.schur.relation(), tol), inst.A.relation());
      const bool dom_ok = contains(sr.compression.dom(), inst.A.dom(), tol);
      const Subspace L = pekarev_subspace(inst.A, br.D1, tol);
      const Subspace img = image(sqrt(inst.A, tol).relation(), inst.A.dom(), tol);
      const bool proj_ok = contains(inst.A.dom(), Subspace::span(L.project(img.basis()), tol), tol);
      if (!dom_ok || !proj_ok) return detail::fail(std::max(r, 1.0), "decomposition conditions fail");
      return detail::by_residual(r, eq, "A_S + A_{/S} differs from A");
    });

    record("pekarev_equality", [&] {
      need_schur();
      const PekarevResult pk = pekarev(inst.A, inst.S, tol);
      const double rs = graph_gap(pk.schur_p.relation(), sr.schur.relation());
      const double rc = graph_gap(pk.compression_p.relation(), sr.compression.relation());
      return detail::by_residual(std::max(rs, rc), eq,
                                 "Pekarev formula differs from matrix formula (Schur gap " + std::to_string(rs) +
                                     ", compression gap " + std::to_string(rc) + ")");
    });
  }
  return rep;
}

inline io::json to_json(const VerificationReport& rep) {
  io::json checks = io::json::object();
  for (const auto& [name, t] : rep.checks) {
    checks[name] = {{"pass", t.pass}, {"fail", t.fail}, {"count", t.pass + t.fail}, {"worst_residual", t.worst_residual}};
  }
  io::json failures = io::json::array();
  for (const auto& f : rep.failures) {
    failures.push_back(
        {{"trial", f.trial}, {"check", f.check}, {"residual", f.residual}, {"message", f.message}, {"instance", f.instance}});
  }
  return {{"seed", rep.seed},
          {"trials", rep.trials},
          {"max_dim", rep.max_dim},
          {"tolerances", {{"rank_rel", rep.tol.rank_rel}, {"eq_abs", rep.tol.eq_abs}}},
          {"ok", rep.ok()},
          {"failure_count", rep.failures.size()},
          {"checks", checks},
          {"failures", failures}};
}

}  // namespace linrel

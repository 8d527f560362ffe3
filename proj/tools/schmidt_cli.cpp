// schmidt: command-line front end for the certificate pipelines.
// Exit codes: 0 certificate produced and audited, 2 honest failure, 1 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "schmidt/audit.hpp"
#include "schmidt/certify.hpp"
#include "schmidt/dimension.hpp"
#include "schmidt/strategies.hpp"

using namespace schmidt;

namespace {

constexpr int kOk = 0, kUsage = 1, kFailed = 2;

Rational R(const std::string& s) { return parse_rational(s); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

// Serialize, re-parse and audit in isolation, then write the file.
int emit(const Json& cert, const std::string& out, const std::string& label) {
  std::string text = pretty(cert);
  AuditReport rep = audit_certificate(Json::parse(text));
  if (!out.empty()) write_file(out, text);
  std::string status = cert.value("status", std::string{});
  std::cout << label << ": status " << status << ", audit " << (rep.ok ? "passed" : "FAILED") << " ("
            << rep.checks.size() << " checks)\n";
  for (auto& f : rep.failures) std::cerr << "  audit failure: " << f << "\n";
  if (cert.contains("diagnostic")) std::cerr << "  diagnostic: " << cert["diagnostic"].get<std::string>() << "\n";
  return rep.ok ? kOk : kFailed;
}

std::string decimal(const Enclosure& e, int digits = 6) {
  return "[" + e.decimal_lo(digits) + ", " + e.decimal_hi(digits) + "]";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Schmidt-game certificate pipelines"};
  app.require_subcommand(1);
  std::string out;

  // ap-meps
  auto* ap = app.add_subcommand("ap-meps", "3-term progression in the middle-eps Cantor set through a given endpoint");
  std::string ap_eps = "1/49", ap_a = "0/1";
  long ap_depth = 40;
  ap->add_option("--epsilon", ap_eps, "eps <= 1/49");
  ap->add_option("--a", ap_a, "construction endpoint a");
  ap->add_option("--depth", ap_depth, "game depth");
  ap->add_option("--out", out, "certificate path");

  // ap4-newhouse
  auto* nh = app.add_subcommand("ap4-newhouse", "4-term progression symmetric about 1/2");
  std::string nh_eps = "1/3";
  long nh_depth = 20, nh_cap = 400000;
  nh->add_option("--epsilon", nh_eps, "eps <= 1/3");
  nh->add_option("--depth", nh_depth, "stage depth in both trees");
  nh->add_option("--node-cap", nh_cap, "DFS node cap");
  nh->add_option("--out", out, "certificate path");

  // ap-search
  auto* as = app.add_subcommand("ap-search", "longest progression among construction endpoints");
  std::string as_eps = "1/3";
  std::size_t as_stage = 4, as_kmax = 16;
  as->add_option("--epsilon", as_eps, "eps");
  as->add_option("--stage", as_stage, "construction stage");
  as->add_option("--kmax", as_kmax, "length cap");

  // f19-cap-c
  auto* f19 = app.add_subcommand("f19-cap-c", "a point of F_19 in the ternary Cantor set");
  long f19_depth = 40;
  f19->add_option("--depth", f19_depth, "game depth");
  f19->add_option("--out", out, "certificate path");

  // sumset-f49
  auto* ss = app.add_subcommand("sumset-f49", "t = x + (t - x) with x, t - x in F_49");
  std::string ss_t;
  std::size_t ss_grid = 0;
  long ss_depth = 30;
  std::string ss_dir, ss_csv;
  auto* opt_t = ss->add_option("--t", ss_t, "t in [1/6, 11/6]");
  auto* opt_grid = ss->add_option("--t-grid", ss_grid, "number of evenly spaced t values")->expected(0, 1);
  opt_grid->default_str("21");
  opt_t->excludes(opt_grid);
  ss->add_option("--depth", ss_depth, "game depth");
  ss->add_option("--out", out, "certificate path (single t)");
  ss->add_option("--out-dir", ss_dir, "directory for grid certificates");
  ss->add_option("--csv", ss_csv, "grid summary CSV path (default stdout)");

  // folding-f9
  auto* fo = app.add_subcommand("folding-f9", "folding chain from 17/27 and the point y = 2 - 2x");
  long fo_it = 6;
  std::size_t fo_cf = 15;
  fo->add_option("--iterations", fo_it, "folding steps (<= 6)");
  fo->add_option("--cf-depth", fo_cf, "quotients that must be <= 9");
  fo->add_option("--out", out, "certificate path");

  // hd-fn-c
  auto* hd = app.add_subcommand("hd-fn-c", "cylinder cover estimate of dim(F_n ∩ C)");
  long hd_n = 2, hd_cap = 20000000;
  std::vector<std::string> hd_scales;
  hd->add_option("--n", hd_n, "quotient bound n >= 2");
  hd->add_option("--scale", hd_scales, "scale(s) in (0,1), e.g. 1e-8")->required();
  hd->add_option("--node-cap", hd_cap, "DFS node cap");
  hd->add_option("--out", out, "cover certificate path (single scale)");

  // ap-budget
  auto* bu = app.add_subcommand("ap-budget", "progression length budget k(alpha)");
  std::vector<std::string> bu_alpha{"1/100"};
  std::string bu_beta = "1/4", bu_K2 = "1";
  bu->add_option("--alpha", bu_alpha, "alpha value(s)");
  bu->add_option("--beta", bu_beta, "beta <= 1/4");
  bu->add_option("--K2", bu_K2, "constant K2");

  // ap-game
  auto* ag = app.add_subcommand("ap-game", "k-term progression in M_eps from the k-fold translated game");
  std::string ag_eps = "1/49", ag_t = "1/100";
  long ag_k = 3, ag_depth = 40;
  ag->add_option("--epsilon", ag_eps, "eps");
  ag->add_option("--k", ag_k, "progression length");
  ag->add_option("--t", ag_t, "gap");
  ag->add_option("--depth", ag_depth, "game depth");
  ag->add_option("--out", out, "certificate path");

  // survivor-tree
  auto* st = app.add_subcommand("survivor-tree", "branching of the survivor tree under an Alice strategy");
  std::string st_alice = "ba1", st_eps = "1/100", st_beta = "1/4", st_gamma = "1/4", st_c = "1/2", st_ep = "1/4";
  long st_N = 2, st_levels = 2, st_expand = 4;
  std::string st_sweep;
  st->add_option("--alice", st_alice, "trivial | ba1")->check(CLI::IsMember({"trivial", "ba1"}));
  st->add_option("--epsilon", st_eps, "BA_1 parameter for --alice ba1");
  st->add_option("--beta", st_beta, "beta <= 1/4");
  st->add_option("--N", st_N, "grid levels per tree level");
  st->add_option("--gamma", st_gamma, "survival threshold factor");
  st->add_option("--c", st_c, "potential exponent");
  st->add_option("--levels", st_levels, "tree levels");
  st->add_option("--max-expand", st_expand, "nodes expanded per level");
  st->add_option("--sweep-N", st_sweep, "N range a:b; alpha = eps'/N with alice ba1");
  st->add_option("--eps-prime", st_ep, "eps' in N = eps'/alpha");

  // bounds
  auto* bo = app.add_subcommand("bounds", "formula calculators");
  bo->require_subcommand(1);
  auto* b_hd = bo->add_subcommand("hd-lower", "log(N-k)/-log(beta)");
  long bN = 4, bk = 2;
  std::string bbeta = "1/4";
  b_hd->add_option("--N", bN)->required();
  b_hd->add_option("--k", bk)->required();
  b_hd->add_option("--beta", bbeta)->required();
  auto* b_ind = bo->add_subcommand("independence", "max(0, d1 + d2 - d)");
  std::string bd1, bd2;
  long bd = 1;
  b_ind->add_option("--d1", bd1)->required();
  b_ind->add_option("--d2", bd2)->required();
  b_ind->add_option("--d", bd);
  auto* b_pot = bo->add_subcommand("potential", "delta - K1 alpha^eta/|log beta| and its admissibility condition");
  std::string pd = "1", pe = "1", pa, pb = "1/4", pc = "1/2", pK1 = "1", pK2;
  b_pot->add_option("--delta", pd);
  b_pot->add_option("--eta", pe);
  b_pot->add_option("--alpha", pa)->required();
  b_pot->add_option("--beta", pb);
  b_pot->add_option("--c", pc);
  b_pot->add_option("--K1", pK1);
  b_pot->add_option("--K2", pK2, "default max(e^-2, 2 e^-1 log(1/e)) from --proof-eps");
  std::string ppe = "1/10";
  b_pot->add_option("--proof-eps", ppe);
  auto* b_cor = bo->add_subcommand("subdivision-gate", "k alpha + (k+1) beta <= 1");
  long ck = 2;
  std::string ca = "1/4", cb = "1/6";
  b_cor->add_option("--k", ck);
  b_cor->add_option("--alpha", ca);
  b_cor->add_option("--beta", cb);

  // game-replay, audit
  auto* gr = app.add_subcommand("game-replay", "re-validate a transcript JSON");
  std::string gr_file;
  bool gr_cleared = false;
  gr->add_option("file", gr_file)->required();
  gr->add_flag("--require-cleared", gr_cleared, "final ball must avoid the ledger");
  auto* au = app.add_subcommand("audit", "re-verify a certificate JSON");
  std::string au_file;
  au->add_option("file", au_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*ap) {
      auto c = certify_ap3_meps(R(ap_eps), R(ap_a), ap_depth);
      int rc = emit(to_json(c), out, "ap-meps");
      if (c.ok()) {
        std::cout << "declared " << c.transcript->params.str() << "\nprogression";
        for (auto& x : c.elements) std::cout << " " << x.str();
        std::cout << "\n";
      }
      return rc;
    }
    if (*nh) {
      auto c = certify_newhouse_ap4(R(nh_eps), nh_depth, nh_cap);
      int rc = emit(to_json(c), out, "ap4-newhouse");
      if (c.ok()) std::cout << "t = " << (c.elements[2] - Rational(1, 2)).str() << "\n";
      return rc;
    }
    if (*as) {
      CantorSpec spec(R(as_eps));
      auto r = search_ap_endpoints(spec, as_stage, as_kmax);
      Json j{{"epsilon", spec.epsilon.str()}, {"stage", as_stage}, {"endpoints", r.endpoints},
             {"length", r.ap.size()}, {"gap", r.gap.str()}, {"progression", to_json(r.ap)}};
      std::cout << pretty(j);
      return kOk;
    }
    if (*f19) {
      auto c = certify_f19_cap_c(f19_depth);
      int rc = emit(to_json(c), out, "f19-cap-c");
      if (c.ok()) std::cout << "cf prefix " << c.cf_prefix.str() << " (" << c.cf_prefix.size() << " quotients)\n";
      return rc;
    }
    if (*ss) {
      if (!ss_t.empty()) {
        auto c = certify_sumset_f49(R(ss_t), ss_depth);
        return emit(to_json(c), out, "sumset-f49 t=" + ss_t);
      }
      std::size_t count = ss_grid ? ss_grid : 21;
      std::ostringstream csv;
      csv << "t,status,audited,prefix_x_len,prefix_x_max,prefix_tx_len,prefix_tx_max\n";
      int rc = kOk;
      auto grid = sumset_grid(count);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        auto c = certify_sumset_f49(grid[i], ss_depth);
        std::string text = pretty(to_json(c));
        AuditReport rep = audit_certificate(Json::parse(text));
        if (!ss_dir.empty()) write_file(ss_dir + "/sumset_" + std::to_string(i) + ".json", text);
        if (!rep.ok) rc = kFailed;
        csv << grid[i].str() << "," << c.status << "," << (rep.ok ? 1 : 0) << "," << c.prefix_x.size() << ","
            << c.prefix_x.max_quotient().get_str() << "," << c.prefix_tx.size() << ","
            << c.prefix_tx.max_quotient().get_str() << "\n";
      }
      if (ss_csv.empty()) std::cout << csv.str();
      else write_file(ss_csv, csv.str());
      return rc;
    }
    if (*fo) {
      auto c = certify_folding_f9(fo_it, fo_cf);
      int rc = emit(to_json(c), out, "folding-f9");
      std::cout << "cf prefix of y: " << c.cf_prefix.size() << " quotients, max " << c.cf_prefix.max_quotient().get_str()
                << "\n";
      return rc;
    }
    if (*hd) {
      if (!out.empty() && hd_scales.size() != 1) throw ConfigError("--out needs exactly one --scale");
      std::cout << "n,scale,count,b_leaves,estimate_lo,estimate_hi\n";
      int rc = kOk;
      for (auto& s : hd_scales) {
        auto d = hd_estimate_fn_cap_cantor(hd_n, R(s), hd_cap, true);
        std::cout << hd_n << "," << d.scale.str() << "," << d.count << "," << d.b_count << ","
                  << d.estimate.decimal_lo(6) << "," << d.estimate.decimal_hi(6) << "\n";
        Json cert = cover_certificate_json(d);
        AuditReport rep = audit_certificate(Json::parse(cert.dump()));
        if (!rep.ok) {
          rc = kFailed;
          for (auto& f : rep.failures) std::cerr << "  audit failure: " << f << "\n";
        }
        if (!out.empty()) write_file(out, pretty(cert));
      }
      return rc;
    }
    if (*bu) {
      std::cout << "alpha,k,c_lo,c_hi,ratio_lo,ratio_hi\n";
      for (auto& a : bu_alpha) {
        auto b = ap_length_budget(R(a), R(bu_beta), R(bu_K2));
        std::cout << R(a).str() << "," << b.k << "," << b.c.decimal_lo(6) << "," << b.c.decimal_hi(6) << ","
                  << b.ratio.decimal_lo(6) << "," << b.ratio.decimal_hi(6) << (b.empty() ? ",budget empty" : "")
                  << "\n";
      }
      return kOk;
    }
    if (*ag) {
      auto c = find_ap_via_game(R(ag_eps), ag_k, R(ag_t), ag_depth);
      return emit(to_json(c), out, "ap-game");
    }
    if (*st) {
      SurvivorConfig cfg;
      cfg.beta = R(st_beta);
      cfg.gamma = R(st_gamma);
      cfg.c = R(st_c);
      cfg.levels = st_levels;
      cfg.max_expand = st_expand;
      std::cout << "N,alpha,min_branch,min_ratio,raw_dim_lo,raw_dim_hi,dim_lo,dim_hi\n";
      auto row = [&](const AliceStrategy& A, long N) {
        cfg.N = N;
        auto s = survivor_tree(A, cfg);
        long mb = std::numeric_limits<long>::max();
        Rational mr = 1;
        for (auto& L : s.levels) {
          mb = std::min(mb, L.min_branch);
          mr = min(mr, L.min_ratio);
        }
        std::cout << N << "," << A.declared.alpha.str() << "," << mb << "," << mr.str() << ",";
        if (s.raw_dimension)
          std::cout << s.raw_dimension->decimal_lo(6) << "," << s.raw_dimension->decimal_hi(6) << ","
                    << s.dimension->decimal_lo(6) << "," << s.dimension->decimal_hi(6) << "\n";
        else
          std::cout << ",,,\n";
        return s.min_branching_positive;
      };
      bool ok = true;
      if (!st_sweep.empty()) {
        auto colon = st_sweep.find(':');
        if (colon == std::string::npos) throw ConfigError("--sweep-N expects a:b");
        long a = std::stol(st_sweep.substr(0, colon)), b = std::stol(st_sweep.substr(colon + 1));
        for (long N = a; N <= b; ++N) {
          Rational alpha = R(st_ep) / Rational(N);
          // alpha = 2e/((1-2e) beta)  <=>  e = alpha beta / (2 + 2 alpha beta)
          Rational e = alpha * cfg.beta / (Rational(2) + Rational(2) * alpha * cfg.beta);
          ok = row(alice_ba1(e, cfg.beta), N) && ok;
        }
      } else {
        AliceStrategy A = st_alice == "trivial" ? alice_trivial(cfg.beta) : alice_ba1(R(st_eps), cfg.beta);
        ok = row(A, st_N);
      }
      return ok ? kOk : kFailed;
    }
    if (*bo) {
      if (*b_hd) {
        auto e = hd_lower_formula(bN, bk, R(bbeta));
        std::cout << "hd_lower " << decimal(e) << (e.exact() ? " exact " + e.lo.str() : "") << "\n";
      } else if (*b_ind) {
        std::cout << "independence " << independence_heuristic(R(bd1), R(bd2), bd).str() << "\n";
      } else if (*b_pot) {
        Rational K2 = pK2.empty() ? default_K2(R(ppe)) : R(pK2);
        auto r = potential_hd_bound(R(pd), R(pe), R(pa), R(pb), R(pc), R(pK1), K2);
        std::cout << "bound " << decimal(r.bound) << "\ncondition "
                  << (r.condition ? (*r.condition ? "holds" : "fails") : "undecided") << "  lhs " << decimal(r.lhs)
                  << " rhs " << decimal(r.rhs) << "\nK2 " << K2.str()
                  << (r.positivity_checked ? "\npositivity asserted" : "") << "\n";
      } else if (*b_cor) {
        Rational lhs = Rational(ck) * R(ca) + Rational(ck + 1) * R(cb);
        std::cout << "k alpha + (k+1) beta = " << lhs.str() << (lhs <= Rational(1) ? " <= 1" : " > 1") << "\n";
        return lhs <= Rational(1) ? kOk : kFailed;
      }
      return kOk;
    }
    if (*gr) {
      AuditReport rep = audit_transcript_json(read_json(gr_file), gr_cleared);
      std::cout << pretty(rep.to_json());
      return rep.ok ? kOk : kFailed;
    }
    if (*au) {
      AuditReport rep = audit_certificate(read_json(au_file));
      std::cout << pretty(rep.to_json());
      return rep.ok ? kOk : kFailed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

int main(int argc, char** argv) { return run_cli(argc, argv); }

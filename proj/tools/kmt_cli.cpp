#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kmt/fields.hpp"

using namespace kmt;
using nlohmann::json;

namespace {

// exit codes
constexpr int kPass = 0, kFail = 1, kConfig = 2, kInternal = 3;

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string type = "A2";
  int case_id = 1;
  bool untwisted = false;
  std::vector<int> s, inner_h;
  int inner_order = 0;
  int k = 0;
  std::vector<std::string> weight;
  int D = 4;
  int H = -1;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string out;
  int m = 8;
  int bound = 2;
  int power = 0;
  int order = 4;
  int max_t = 4;
  int nmin = -4, nmax = 0;
  bool verma_only = false;
  std::string check;
};

std::string frac(int n, int T) { return std::to_string(n) + "/" + std::to_string(T); }

struct Setup {
  std::shared_ptr<const AffineAlgebra> A;
  WeightLambda lambda;
  int k = 0;  // 0 when the level is not a positive integer
};

Setup setup(const Config& c, bool need_weight) {
  Setup st;
  RealizationSpec spec{c.type, c.untwisted ? 0 : c.case_id, c.s, c.inner_h, c.inner_order};
  st.A = affine_algebra(make_realization(spec));
  if (!need_weight) return st;
  const auto& R = st.A->real();
  if (!c.weight.empty()) {
    if (c.weight.size() != static_cast<std::size_t>(R.l + 1))
      throw std::invalid_argument("--weight needs " + std::to_string(R.l + 1) + " labels");
    for (const auto& x : c.weight) st.lambda.labels.push_back(Rational::parse(x));
  } else {
    if (c.k <= 0) throw std::invalid_argument("give --weight or a positive --level");
    int j = 0;
    while (j <= R.l && R.comarks[j] != 1) ++j;
    if (j > R.l) throw std::invalid_argument("no node of comark 1; give --weight");
    st.lambda = WeightLambda::fundamental(R, j, c.k);
  }
  Rational lev = st.lambda.level(R);
  if (c.k > 0 && lev != Rational(c.k)) throw std::invalid_argument("--level disagrees with the level of --weight (" + lev.str() + ")");
  if (lev.is_integer() && lev.sign() > 0) st.k = static_cast<int>(lev.floor());
  return st;
}

// Verma windows need a height bound whenever some s_j vanishes.
Window window(const Config& c, const AffineAlgebra& A) {
  if (c.D < 0) throw std::invalid_argument("--depth must be >= 0");
  Window w{c.D, c.H};
  if (w.H < 0) {
    const auto& s = A.real().s;
    if (std::any_of(s.begin(), s.end(), [](int x) { return x == 0; })) w.H = c.D + 2;
  }
  return w;
}

json config_json(const Config& c, const Setup& st) {
  json j;
  j["type"] = c.type;
  j["case"] = c.untwisted ? 0 : c.case_id;
  j["s"] = st.A->real().s;
  if (!c.inner_h.empty()) j["inner_h"] = c.inner_h;
  if (!st.lambda.labels.empty()) j["weight"] = st.lambda.str();
  j["k"] = st.k;
  j["D"] = frac(c.D, st.A->T());
  j["seed"] = c.seed;
  return j;
}

json envelope(const std::string& cmd, const Config& c, const Setup& st) {
  json j;
  j["schema"] = 1;
  j["command"] = cmd;
  j["realization"] = st.A->real().name();
  j["fingerprint"] = st.A->real().fingerprint();
  j["config"] = config_json(c, st);
  return j;
}

int need_level(const Setup& st) {
  if (st.k <= 0) throw std::invalid_argument("this check needs a positive integral level");
  return st.k;
}

// ---- commands ----

json cmd_construct(const Config& c) {
  Setup st = setup(c, false);
  json j = envelope("construct", c, st);
  j["data"] = st.A->real().to_json();
  j["validation"] = validate_realization(st.A->real());
  if (!j["validation"]["pass"].get<bool>()) throw InternalError("realization failed validation");
  j["status"] = "pass";
  return j;
}

json cmd_characters(const Config& c) {
  Setup st = setup(c, true);
  const auto& R = st.A->real();
  Window w = window(c, *st.A);
  json j = envelope("characters", c, st);
  j["H"] = w.H;
  json rows = json::array();
  if (c.verma_only) {
    PBWModule M(st.A, PBWModule::Kind::Verma, st.lambda);
    std::map<int, std::size_t> by;
    for (const auto& b : window_weights(R, w)) by[depth_num(R, b)] += M.dim(b);
    for (const auto& [d, n] : by) rows.push_back({{"depth", frac(d, R.T)}, {"verma", n}});
    j["rows"] = rows;
    j["status"] = "pass";
    return j;
  }
  if (!st.lambda.dominant()) throw NonDominant("characters need a dominant weight (use --verma-only)");
  if (c.H < 0 && w.H >= 0) {
    // tall enough for every weight of L(Lambda) up to depth D
    StandardModule L(st.A, st.lambda);
    w.H = 0;
    for (const auto& b : L.support(Window{c.D, -1})) w.H = std::max(w.H, height(b));
    j["H"] = w.H;
  }
  CharacterTable t = character_table(st.A, st.lambda, w);
  for (const auto& r : t.rows)
    rows.push_back({{"depth", frac(r.depth_num, R.T)},
                    {"verma", r.verma},
                    {"maximal_gram", r.gram_nullity},
                    {"maximal_closure", r.closure},
                    {"standard_gram", r.gram_rank},
                    {"standard_model", r.standard},
                    {"agree", r.agree()}});
  j["rows"] = rows;
  j["status"] = t.agree() ? "pass" : "fail";
  return j;
}

std::vector<CheckResult> run_check(const Config& c, Setup& st, const Window& w) {
  const std::string& name = c.check;
  std::vector<CheckResult> out;
  if (name == "heisenberg") {
    if (c.m < 1) throw std::invalid_argument("-m must be >= 1");
    for (int m = 1; m <= c.m; ++m) {
      HeisenbergResult h = heisenberg_membership(m, std::max(10, c.m));
      CheckResult r;
      r.name = "heisenberg";
      r.pass = h.member;
      r.detail = {{"m", m}};
      json wit = json::array();
      for (const auto& [lab, co] : h.witness) wit.push_back({{"term", lab}, {"coefficient", co.str()}});
      r.witness = wit;
      out.push_back(r);
    }
    return out;
  }
  if (name == "f-power") {
    RSpace R(st.A, need_level(st));
    for (int i = 0; i <= st.A->l(); ++i) {
      FPowerResult f = F_power_membership(R, i, c.max_t);
      std::size_t support = 0;
      for (const auto& x : st.A->real().F[static_cast<std::size_t>(i)]) support += x.is_zero() ? 0 : 1;
      CheckResult r;
      r.name = "f-power";
      r.pass = f.t > 0 && f.verified;
      r.detail = {{"i", i}, {"t", f.t}, {"verified", f.verified}, {"support", support}};
      r.witness = f.witness;
      out.push_back(r);
    }
    return out;
  }
  if (name == "standard-iff") {
    json rep = verify_standard_iff(st.A, st.lambda, w);
    for (const auto& cj : rep["checks"]) {
      CheckResult r;
      r.name = cj["name"];
      r.pass = cj["status"] == "pass";
      r.detail = cj["detail"];
      if (cj.contains("witness")) r.witness = cj["witness"];
      out.push_back(r);
    }
    return out;
  }
  int k = need_level(st);
  RSpace R(st.A, k);
  if (name == "commutator26" || name == "maximal" || name == "irreducible-loop") {
    PBWModule M(st.A, PBWModule::Kind::Verma, st.lambda);
    LoopOperators ops(R, M);
    if (name == "commutator26") {
      out.push_back(verify_commutator_26(ops, w, c.bound));
    } else if (name == "irreducible-loop") {
      out.push_back(irreducibility_probe(ops, w, c.nmin, c.nmax));
    } else {
      if (!st.lambda.dominant()) throw NonDominant("maximal needs a dominant weight");
      CheckResult r;
      r.name = "maximal";
      r.pass = true;
      json rows = json::array();
      for (const auto& row : image_dims(ops, M, w)) {
        r.pass = r.pass && row.image == row.gram_nullity && row.closure == row.gram_nullity;
        rows.push_back({{"depth", frac(row.depth_num, st.A->T())}, {"image", row.image}, {"closure", row.closure}, {"gram_nullity", row.gram_nullity}});
      }
      r.detail = {{"rows", rows}};
      out.push_back(r);
    }
    return out;
  }
  // dominant L(Lambda) has finitely many weights per depth: no height bound
  Window wl = st.lambda.dominant() ? Window{w.D, c.H} : w;
  StandardModule L(st.A, st.lambda);
  LoopOperators ops(R, L);
  if (name == "annihilate") {
    out.push_back(annihilation_check(ops, wl));
  } else if (name == "delta") {
    out.push_back(verify_delta(ops, wl, c.order));
  } else if (name == "nilpotent-field") {
    const RootVec& theta = st.A->real().alg->roots().highest;
    int p = c.power > 0 ? c.power : k + 1;
    out.push_back(verify_nilpotent_field(ops, theta, p, wl));
    if (p == k + 1 && k >= 1) {
      CheckResult sharp = verify_nilpotent_field(ops, theta, k, wl);
      sharp.name = "nilpotent-field-sharp";
      sharp.pass = !sharp.witness.is_null();
      out.push_back(sharp);
    }
  } else {
    throw std::invalid_argument("unknown check " + name);
  }
  return out;
}

json cmd_verify(const Config& c) {
  bool needs_weight = c.check != "heisenberg";
  Setup st = c.check == "heisenberg" ? Setup{nullptr, {}, 0} : setup(c, needs_weight);
  if (!st.A) st.A = affine_algebra(make_realization({c.type, c.untwisted ? 0 : c.case_id, c.s, c.inner_h, c.inner_order}));
  Window w = window(c, *st.A);
  json j = envelope("verify", c, st);
  j["check"] = c.check;
  j["H"] = w.H;
  json res = json::array();
  bool all = true;
  for (const auto& r : run_check(c, st, w)) {
    res.push_back(r.to_json());
    all = all && r.pass;
  }
  j["results"] = res;
  j["status"] = all ? "pass" : "fail";
  return j;
}

// ---- output ----

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string to_tsv(const json& rep) {
  std::ostringstream os;
  os << "# " << rep["command"].get<std::string>() << "\t" << rep["realization"].get<std::string>() << "\tfingerprint=" << rep["fingerprint"].get<std::string>()
     << "\tstatus=" << rep["status"].get<std::string>() << "\n";
  if (rep["command"] == "characters") {
    const json& rows = rep["rows"];
    if (rows.empty()) return os.str();
    std::vector<std::string> keys;
    for (const auto& [k, v] : rows[0].items()) keys.push_back(k);
    std::stable_partition(keys.begin(), keys.end(), [](const std::string& k) { return k == "depth"; });
    os << "#";
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "\t" : "") << keys[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "\t" : "") << cell(r[keys[i]]);
      os << "\n";
    }
  } else if (rep["command"] == "verify") {
    os << "#check\tstatus\tdetail\twitness\n";
    for (const auto& r : rep["results"])
      os << r["name"].get<std::string>() << "\t" << r["status"].get<std::string>() << "\t" << r["detail"].dump() << "\t"
         << (r.contains("witness") ? r["witness"].dump() : "-") << "\n";
  } else {
    os << "#key\tvalue\n";
    for (const auto& [k, v] : rep["validation"].items()) os << k << "\t" << cell(v) << "\n";
    for (const char* k : {"T", "A", "marks", "comarks"})
      if (rep["data"].contains(k)) os << k << "\t" << rep["data"][k].dump() << "\n";
  }
  return os.str();
}

void emit(const Config& c, const json& rep) {
  std::string text = c.format == "tsv" ? to_tsv(rep) : rep.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::invalid_argument("cannot write " + c.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Twisted affine Kac-Moody algebras and annihilating fields"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file of key=value settings (flags win)");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());

  app.add_option("--type", c.type, "finite type, e.g. A2, D4, E6");
  app.add_option("--case", c.case_id, "diagram automorphism case 1..5")->check(CLI::Range(1, 5));
  app.add_flag("--untwisted", c.untwisted, "untwisted affinization");
  app.add_option("--s", c.s, "s-vector s_0..s_l")->delimiter(',');
  app.add_option("--inner-h", c.inner_h, "alpha_i(h) of an inner twist")->delimiter(',');
  app.add_option("--inner-order", c.inner_order, "order paired with --inner-h");
  app.add_option("-k,--level", c.k, "level k");
  app.add_option("--weight", c.weight, "labels Lambda(h_0..h_l), rationals")->delimiter(',');
  app.add_option("-D,--depth", c.D, "depth bound, numerator over T");
  app.add_option("-H,--height", c.H, "principal height bound for Verma windows (default: D+2 when needed)");
  app.add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--seed", c.seed, "seed recorded in the report");
  app.add_option("--out", c.out, "write the report to this file");
  app.add_option("-m", c.m, "heisenberg: largest m");
  app.add_option("--bound", c.bound, "commutator26: |m|, |n| bound");
  app.add_option("--power", c.power, "nilpotent-field: power (default k+1)");
  app.add_option("--order", c.order, "delta: truncation order");
  app.add_option("--max-t", c.max_t, "f-power: largest t");
  app.add_option("--nmin", c.nmin, "irreducible-loop: smallest mode numerator");
  app.add_option("--nmax", c.nmax, "irreducible-loop: largest mode numerator");
  app.add_flag("--verma-only", c.verma_only, "characters: Verma dims only");

  auto* construct = app.add_subcommand("construct", "dump a realization with its validation summary");
  auto* characters = app.add_subcommand("characters", "per-depth dims of M, M^1 and L");
  auto* verify = app.add_subcommand("verify", "run a verification");
  verify->add_option("check", c.check)
      ->required()
      ->check(CLI::IsMember({"commutator26", "annihilate", "maximal", "standard-iff", "nilpotent-field", "f-power", "heisenberg", "delta",
                             "irreducible-loop"}));
  for (auto* sub : {construct, characters, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    json rep;
    if (*construct) rep = cmd_construct(c);
    else if (*characters) rep = cmd_characters(c);
    else rep = cmd_verify(c);
    emit(c, rep);
    return rep["status"] == "pass" ? kPass : kFail;
  } catch (const InternalError& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kInternal;
  }
}

// buyk: command-line front end for buy-k mechanism analysis.
//
// Exit status: 0 = success and every checked bound holds, 1 = a checked bound
// failed, 2 = usage, parse or limit error.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "buyk/buyk.hpp"

namespace fs = std::filesystem;
using namespace buyk;

namespace {

constexpr int kOk = 0;
constexpr int kBoundFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

InstanceFile load(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.location(), e.what());
  }
}

std::string num(const Rational& r) {
  if (r.is_integer()) return r.str();
  return r.str() + " (~" + r.approx() + ")";
}

std::string vec(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

std::string options(const EntryMultiset& m) {
  std::string s = "{";
  for (std::size_t i = 0; i < m.indices.size(); ++i) s += (i ? "," : "") + std::to_string(m.indices[i]);
  return s + "}";
}

struct Settings {
  Limits limits;
  std::string c;
  std::string delta;

  std::optional<Rational> c_value() const {
    if (c.empty()) return std::nullopt;
    return Rational::parse(c);
  }
  std::optional<Rational> delta_value() const {
    if (delta.empty()) return std::nullopt;
    return Rational::parse(delta);
  }
};

void add_limit_flags(CLI::App& app, Settings& s) {
  app.add_option("--max-nodes", s.limits.max_search_nodes, "Best-response and gap enumeration cap")
      ->capture_default_str();
  app.add_option("--adaptive-cap", s.limits.adaptive_max_items, "Largest n for the adaptive DP")
      ->capture_default_str();
  app.add_option("--lp-cells", s.limits.lp_max_cells, "Simplex tableau size cap")->capture_default_str();
  app.add_option("--coverfree-budget", s.limits.coverfree_budget, "Cover-free brute-force tuple budget")
      ->capture_default_str();
}

// --- analyze ------------------------------------------------------------------

int analyze(const std::string& path, std::size_t k, const Settings& s, std::ostream& out) {
  const InstanceFile f = load(path);
  const auto& d = f.distribution;
  int status = kOk;

  out << "instance: " << path << "\n";
  out << "n: " << f.n << ", support: " << d.support.size() << " types, residual mass " << d.residual_mass().str()
      << "\n";
  const auto b = brev(d);
  out << "BRev: " << num(b.value) << " at bundle price " << b.certificate.str() << "\n";
  const auto sr = srev(d);
  out << "SRev: " << num(sr.value) << " at item prices " << vec(sr.certificate) << "\n";
  const auto opt = optimal_buy_one(d, s.limits);
  out << "OptBuy1: " << num(opt.value) << " (" << opt.certificate.size() << " menu entries)\n";

  if (f.sequences.has_value()) out << "menugap_" << k << ": " << num(menugap(*f.sequences, k, s.limits).menugap) << "\n";

  const auto types = d.types();
  for (std::size_t m = 0; m < f.menus.size(); ++m) {
    const Menu& menu = f.menus[m];
    out << "menu " << m << ": " << menu.size() << " entries\n";
    const Rational rev = revenue_under_buyk(d, menu, k, s.limits);
    out << "  buy-" << k << " revenue: " << num(rev) << "\n";

    const ICVerdict ic = verify_buyk_ic(menu, types, k, s.limits);
    out << "  buy-" << k << " IC: " << (ic.ic ? "true" : "false") << "\n";
    for (const auto& w : ic.witnesses)
      out << "    witness type " << vec(w.type.values) << ": options " << options(w.deviation) << " payment "
          << total_price(menu, w.deviation).str() << ", utility " << w.deviation_utility.str() << " > single "
          << w.single_utility.str() << "\n";

    if (f.n <= s.limits.adaptive_max_items) {
      const ICVerdict aic = verify_adaptive_buyk_ic(menu, types, k, s.limits);
      out << "  adaptive buy-" << k << " IC: " << (aic.ic ? "true" : "false") << "\n";
      for (const auto& w : aic.witnesses)
        out << "    witness type " << vec(w.type.values) << ": adaptive value " << w.deviation_utility.str()
            << " > single " << w.single_utility.str() << "\n";
    } else {
      out << "  adaptive buy-" << k << " IC: skipped (n above --adaptive-cap)\n";
    }

    const Rational bound = Rational(menu.size()) * b.value;
    const bool size_ok = bound >= rev;
    out << "  menu-size bound |M|*BRev = " << num(bound) << " >= revenue: " << (size_ok ? "holds" : "FAILS") << "\n";
    if (!size_ok) status = kBoundFailed;

    if (ic.ic) {
      const auto p = run_upper_bound_pipeline(d, menu, k, s.c_value(), s.delta_value(), s.limits);
      out << "  pipeline (c = " << p.c.str() << ", delta = " << p.delta.str() << "): menugap " << num(p.menugap)
          << " >= " << num(p.bound) << ": " << (p.holds ? "holds" : "FAILS") << "\n";
      if (!p.holds) status = kBoundFailed;
    }
  }
  return status;
}

// --- menugap ------------------------------------------------------------------

int menugap_cmd(const std::string& path, std::size_t k, bool prune, const Settings& s, std::ostream& out) {
  const InstanceFile f = load(path);
  if (!f.sequences.has_value()) throw UsageError(path + ": no sequences in instance");
  SequencePair seq = *f.sequences;
  if (prune) {
    const std::size_t before = seq.length();
    seq = prune_nonpositive(std::move(seq), k, s.limits);
    out << "pruned " << before - seq.length() << " of " << before << " points\n";
  }
  const GapReport r = menugap(seq, k, s.limits);
  for (std::size_t i = 0; i < r.gaps.size(); ++i) {
    EntryMultiset w{r.witnesses[i]};
    out << "i=" << i + 1 << " gap=" << r.gaps[i].str() << " normalized=" << r.normalized[i].str()
        << " witness=" << options(w) << "\n";
  }
  out << "menugap_" << k << ": " << num(r.menugap) << "\n";
  const Rational cert = telescoping_certificate(seq.Q);
  out << "telescoping certificate: " << num(cert) << "\n";
  if (k >= seq.n && r.menugap > cert) {
    out << "bound FAILS: menugap exceeds telescoping certificate\n";
    return kBoundFailed;
  }
  return kOk;
}

// --- gen-lowerbound -----------------------------------------------------------

int gen_lowerbound(std::size_t n, std::size_t k, const std::string& method, std::size_t q, std::size_t m,
                   const std::string& dir, const Settings& s, std::ostream& out) {
  LowerBoundOptions opts;
  if (method == "greedy") {
    opts.method = CoverFreeMethod::greedy;
  } else if (method == "ks") {
    opts.method = CoverFreeMethod::kautz_singleton;
    if (q != 0) opts.q = q;
    opts.m = m;
  } else {
    throw UsageError("unknown method " + method);
  }
  const LowerBoundInstance inst = lowerbound_instance(n, k, opts, s.limits);

  InstanceFile instance{n, inst.distribution, {}, inst.sequences};
  InstanceFile menu{n, inst.distribution, {inst.menu}, std::nullopt};
  const fs::path root(dir);
  write_file(root / "instance.json", serialize_instance(instance));
  write_file(root / "menu.json", serialize_instance(menu));

  const auto types = inst.distribution.types();
  const bool ic = verify_buyk_ic(inst.menu, types, k, s.limits).ic;
  const bool ratio_ok = inst.report.ratio >= inst.ratio_bound;
  const bool gap_ok = inst.report.menugap >= inst.menugap_bound;
  const bool brev_ok = inst.report.brev <= Rational(2 * n);

  std::ostringstream rep;
  rep << "n: " << n << "\n";
  rep << "k: " << k << "\n";
  rep << "family: " << method << ", " << inst.family->size() << " sets, certified k = " << inst.family->k << "\n";
  rep << "buy-" << k << " IC: " << (ic ? "true" : "false") << "\n";
  rep << "BRev: " << num(inst.report.brev) << (brev_ok ? " <= " : " > ") << 2 * n << "\n";
  rep << "BuyKRev: " << num(inst.report.buyk_revenue) << "\n";
  rep << "menugap: " << num(inst.report.menugap) << (gap_ok ? " >= " : " < ") << inst.menugap_bound.str()
      << " (|F|/n)\n";
  rep << "ratio: " << num(inst.report.ratio) << (ratio_ok ? " >= " : " < ") << inst.ratio_bound.str()
      << " (|F|/(2n^2))\n";
  const bool all = ic && ratio_ok && gap_ok && brev_ok;
  rep << "verdict: " << (all ? "all bounds hold" : "BOUND FAILED") << "\n";
  write_file(root / "report.txt", rep.str());
  out << rep.str();
  return all ? kOk : kBoundFailed;
}

// --- gen-example --------------------------------------------------------------

int gen_example(const std::string& name, std::size_t n, const std::string& file, std::ostream& out) {
  InstanceFile f;
  if (name == "coffee") {
    auto [d, menu] = coffee_shop_instance();
    f = {2, std::move(d), {std::move(menu)}, std::nullopt};
  } else if (name == "srev-gap") {
    DiscreteDistribution d = srev_gap_instance(n);
    Menu menu = item_pricing_menu(n, srev(d).certificate);
    f = {n, std::move(d), {std::move(menu)}, std::nullopt};
  } else if (name == "basis") {
    SequencePair s = SequencePair::standard_basis(n);
    DiscreteDistribution d{n, {}};
    for (const auto& x : s.X) d.support.push_back({x, Rational(1, static_cast<long>(n))});
    f = {n, std::move(d), {}, std::move(s)};
  } else {
    throw UsageError("unknown example " + name);
  }
  const std::string text = serialize_instance(f);
  if (file.empty() || file == "-")
    out << text;
  else
    write_file(file, text);
  return kOk;
}

// --- report -------------------------------------------------------------------

int report(const std::vector<std::string>& paths, std::size_t k, const std::string& csv, const Settings& s,
           std::ostream& out) {
  std::vector<std::future<std::vector<ReportRow>>> jobs;
  jobs.reserve(paths.size());
  for (const auto& p : paths)
    jobs.push_back(std::async(std::launch::async, [&s, p, k] { return build_report_rows(p, load(p), k, s.limits); }));

  std::vector<ReportRow> rows;
  for (auto& j : jobs)
    for (auto& r : j.get()) rows.push_back(std::move(r));

  int status = kOk;
  for (const auto& r : rows)
    if (r.size_bound.has_value() && !*r.size_bound) status = kBoundFailed;

  const std::string text = report_csv(rows);
  if (csv.empty() || csv == "-")
    out << text;
  else
    write_file(csv, text);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of buy-k mechanisms"};
  app.require_subcommand(1);
  Settings settings;

  std::size_t k = 1;
  std::string instance;

  auto* a = app.add_subcommand("analyze", "Benchmarks, IC verdicts and bound checks for an instance");
  a->add_option("instance", instance, "Instance file")->required();
  a->add_option("--k", k, "Purchase bound")->capture_default_str()->check(CLI::PositiveNumber);
  a->add_option("--c", settings.c, "Pipeline price threshold (default revenue/100)");
  a->add_option("--delta", settings.delta, "Pipeline norm slack (default 0)");
  add_limit_flags(*a, settings);

  bool prune = false;
  auto* g = app.add_subcommand("menugap", "Per-index gaps and MenuGap of embedded sequences");
  g->add_option("instance", instance, "Instance file")->required();
  g->add_option("--k", k, "Purchase bound")->required()->check(CLI::PositiveNumber);
  g->add_flag("--prune", prune, "Drop points with non-positive gap first");
  add_limit_flags(*g, settings);

  std::size_t n = 0, q = 0, m = 2;
  std::string method = "greedy", outdir;
  auto* lb = app.add_subcommand("gen-lowerbound", "Build and verify a cover-free lower-bound instance");
  lb->add_option("--n", n, "Number of items")->required()->check(CLI::PositiveNumber);
  lb->add_option("--k", k, "Purchase bound")->required()->check(CLI::PositiveNumber);
  lb->add_option("--method", method, "greedy or ks")->check(CLI::IsMember({"greedy", "ks"}))->capture_default_str();
  lb->add_option("--q", q, "Kautz-Singleton field size (default sqrt(n))");
  lb->add_option("--m", m, "Kautz-Singleton polynomial degree bound")->capture_default_str();
  lb->add_option("-o,--output", outdir, "Output directory")->required();
  add_limit_flags(*lb, settings);

  std::string example, outfile;
  auto* ex = app.add_subcommand("gen-example", "Write a built-in instance");
  ex->add_option("name", example, "coffee, srev-gap or basis")
      ->required()
      ->check(CLI::IsMember({"coffee", "srev-gap", "basis"}));
  ex->add_option("--n", n, "Number of items (srev-gap, basis)")->check(CLI::PositiveNumber);
  ex->add_option("-o,--output", outfile, "Output file (default stdout)");

  std::vector<std::string> paths;
  std::string csv;
  auto* r = app.add_subcommand("report", "CSV summary over several instances");
  r->add_option("instances", paths, "Instance files")->required();
  r->add_option("--k", k, "Purchase bound")->capture_default_str()->check(CLI::PositiveNumber);
  r->add_option("--csv", csv, "Output CSV (default stdout)");
  add_limit_flags(*r, settings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*a) return analyze(instance, k, settings, std::cout);
    if (*g) return menugap_cmd(instance, k, prune, settings, std::cout);
    if (*lb) return gen_lowerbound(n, k, method, q, m, outdir, settings, std::cout);
    if (*ex) {
      if (example != "coffee" && n == 0) throw UsageError("--n is required for " + example);
      return gen_example(example, n, outfile, std::cout);
    }
    if (*r) return report(paths, k, csv, settings, std::cout);
  } catch (const PostconditionFailure& e) {
    std::cerr << "bound failed: " << e.what() << "\n";
    return kBoundFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "buyk/benchmarks.hpp"
#include "buyk/buyer.hpp"
#include "buyk/io.hpp"
#include "buyk/menugap.hpp"

namespace buyk {

/// One CSV row per (instance, menu) pair; instances without menus get a
/// single row with the menu columns empty.
struct ReportRow {
  std::string instance;
  std::optional<std::size_t> menu;  // 0-based index into the instance's menus
  std::size_t n = 0;
  std::size_t k = 1;
  Rational brev;
  Rational srev;
  Rational opt_buy1;
  std::optional<Rational> revenue;
  std::optional<bool> ic;
  std::optional<bool> adaptive_ic;  // unset when n exceeds the DP cap
  std::optional<bool> size_bound;
  std::optional<Rational> menugap;  // of the embedded sequences, if any
  std::optional<Rational> ratio;    // revenue / BRev
};

inline std::vector<ReportRow> build_report_rows(const std::string& id, const InstanceFile& f, std::size_t k,
                                                const Limits& limits = default_limits()) {
  ReportRow base;
  base.instance = id;
  base.n = f.n;
  base.k = k;
  base.brev = brev(f.distribution).value;
  base.srev = srev(f.distribution).value;
  base.opt_buy1 = optimal_buy_one(f.distribution, limits).value;
  if (f.sequences.has_value()) base.menugap = menugap(*f.sequences, k, limits).menugap;
  if (f.menus.empty()) return {base};

  const auto types = f.distribution.types();
  std::vector<ReportRow> rows;
  for (std::size_t m = 0; m < f.menus.size(); ++m) {
    ReportRow row = base;
    const Menu& menu = f.menus[m];
    row.menu = m;
    row.revenue = revenue_under_buyk(f.distribution, menu, k, limits);
    row.ic = verify_buyk_ic(menu, types, k, limits).ic;
    if (f.n <= limits.adaptive_max_items) row.adaptive_ic = verify_adaptive_buyk_ic(menu, types, k, limits).ic;
    row.size_bound = Rational(menu.size()) * row.brev >= *row.revenue;
    if (!row.brev.is_zero()) row.ratio = *row.revenue / row.brev;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void exact_and_approx(std::ostream& os, const std::optional<Rational>& r) {
  if (r.has_value())
    os << ',' << r->str() << ',' << r->approx();
  else
    os << ",,";
}

inline void flag(std::ostream& os, const std::optional<bool>& b) {
  os << ',';
  if (b.has_value()) os << (*b ? "true" : "false");
}

}  // namespace detail

/// Columns ending in _approx are 6-significant-digit decimal approximations;
/// every other numeric column is exact.
inline std::string report_csv_header() {
  return "instance,menu,n,k,brev,brev_approx,srev,srev_approx,opt_buy1,opt_buy1_approx,"
         "revenue,revenue_approx,ic,adaptive_ic,size_bound_holds,menugap,menugap_approx,ratio,ratio_approx";
}

inline std::string report_csv_line(const ReportRow& r) {
  std::ostringstream os;
  os << detail::csv_field(r.instance) << ',';
  if (r.menu.has_value()) os << *r.menu;
  os << ',' << r.n << ',' << r.k;
  detail::exact_and_approx(os, r.brev);
  detail::exact_and_approx(os, r.srev);
  detail::exact_and_approx(os, r.opt_buy1);
  detail::exact_and_approx(os, r.revenue);
  detail::flag(os, r.ic);
  detail::flag(os, r.adaptive_ic);
  detail::flag(os, r.size_bound);
  detail::exact_and_approx(os, r.menugap);
  detail::exact_and_approx(os, r.ratio);
  return os.str();
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = report_csv_header() + "\n";
  for (const auto& r : rows) out += report_csv_line(r) + "\n";
  return out;
}

}  // namespace buyk

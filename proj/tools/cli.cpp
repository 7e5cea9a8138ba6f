#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <sstream>

#include "ffba/badtarget.hpp"
#include "ffba/cantor.hpp"
#include "ffba/error.hpp"
#include "ffba/hankel.hpp"
#include "ffba/indices.hpp"
#include "ffba/verify.hpp"
#include "ffba/weights.hpp"

namespace ffba::cli {

namespace {

using json = nlohmann::json;

struct Options {
  unsigned q = 0;
  unsigned p = 0;
  unsigned k = 1;
  std::string modulus;
  std::size_t d = 0;
  std::string weight;
  std::vector<std::string> theta;
  std::vector<std::string> gamma;
  std::string ell = "1";
  std::optional<std::size_t> ell_prime;
  std::size_t stages = 8;
  std::size_t j_cutoff = 4096;
  std::size_t max_deg = 8;
  std::optional<std::size_t> prec;
  std::optional<std::size_t> depth;
  std::size_t alternations = 3;
  std::string policy = "lexmin";
  std::uint64_t seed = 0;
  std::string format = "text";
  unsigned threads = 1;
  std::size_t i = 4;
  std::size_t j = 4;
  std::size_t digits = 16;
  std::size_t h_max = 100;
  std::optional<std::int64_t> min_exponent;
  std::string input;
};

// A failed check whose report is already on the output stream.
struct VerificationFailure {};

json qval_json(QVal v) { return v.is_zero() ? json(nullptr) : json(v.exponent()); }

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

json codes_json(std::span<const Elem> v) {
  json out = json::array();
  for (auto e : v) out.push_back(e.code);
  return out;
}

std::string rational_text(const BigRational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

void render_text(const json& j, std::ostream& out, const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix + key;
    if (value.is_object()) {
      render_text(value, out, name + ".");
    } else if (value.is_array() && !value.empty() && (value.front().is_array() || value.front().is_object())) {
      out << name << ":\n";
      for (const auto& row : value) out << "  " << row.dump() << "\n";
    } else if (value.is_string()) {
      out << name << ": " << value.get<std::string>() << "\n";
    } else {
      out << name << ": " << value.dump() << "\n";
    }
  }
}

void emit(const Options& o, const json& report, std::ostream& out) {
  if (o.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    render_text(report, out, "");
  }
}

Field make_field(const Options& o) {
  if (o.p != 0) {
    std::optional<std::vector<unsigned>> mod;
    if (!o.modulus.empty()) mod = parse_code_list(o.modulus);
    const auto f = Field::make(o.p, o.k, mod);
    if (o.q != 0 && o.q != f.q()) {
      throw Error(Errc::InvalidArgument, "--q " + std::to_string(o.q) + " does not match --p/--k (order " +
                                             std::to_string(f.q()) + ")");
    }
    return f;
  }
  return Field::of_order(o.q == 0 ? 2 : o.q);
}

std::size_t dimension(const Options& o) {
  const std::size_t d = o.d != 0 ? o.d : std::max<std::size_t>(1, o.theta.size());
  if (!o.theta.empty() && o.theta.size() != d) {
    throw Error(Errc::InvalidArgument, "--d " + std::to_string(d) + " needs " + std::to_string(d) +
                                           " --theta values, got " + std::to_string(o.theta.size()));
  }
  return d;
}

GeneralizedWeight make_weight(const Options& o, std::size_t d) {
  if (o.weight.empty()) return d == 1 ? GeneralizedWeight::trivial() : GeneralizedWeight::parse(d, "equal");
  const auto g = GeneralizedWeight::parse(d, o.weight);
  if (g.dim() != d) {
    throw Error(Errc::InvalidArgument, "weight '" + o.weight + "' has dimension " + std::to_string(g.dim()) +
                                           " but d = " + std::to_string(d));
  }
  return g;
}

SeriesVector make_series(const Field& f, const std::vector<std::string>& texts, const char* flag, std::size_t d) {
  if (texts.empty()) throw Error(Errc::InvalidArgument, std::string("missing ") + flag);
  if (texts.size() != d) {
    throw Error(Errc::InvalidArgument, std::to_string(d) + " " + flag + " values needed, got " +
                                           std::to_string(texts.size()));
  }
  SeriesVector out;
  for (const auto& t : texts) out.push_back(parse_series(f, t));
  return out;
}

std::size_t parse_ell(const Options& o) {
  const auto v = parse_code_list(o.ell);
  if (v.size() != 1) throw Error(Errc::InvalidArgument, "--ell takes a single value here");
  return v[0];
}

json read_json_input(const std::string& path) {
  if (path.empty()) throw Error(Errc::InvalidArgument, "missing --input (a file path, or - for stdin)");
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
  return json::parse(in);
}

const char* kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::Finite:
      return "finite";
    case SourceKind::Rational:
      return "rational";
    case SourceKind::Periodic:
      return "periodic";
    case SourceKind::Rule:
      return "rule";
  }
  return "finite";
}

// --- Subcommands -------------------------------------------------------------

json cmd_expand(const Options& o) {
  const auto f = make_field(o);
  const auto theta = make_series(f, o.theta, "--theta", dimension(o));
  json series = json::array();
  for (const auto& s : theta) {
    const auto& src = s.frac();
    const auto g = src.guarantee();
    const std::size_t n = g ? std::min(*g, o.digits) : o.digits;
    json entry{{"text", format_series(s)},
               {"kind", kind_name(src.kind())},
               {"poly", s.poly_part().codes()},
               {"guarantee", opt_json(g)},
               {"digits", codes_json(src.prefix(n))}};
    if (const auto per = src.periodicity()) {
      entry["periodicity"] = {{"preperiod", per->preperiod}, {"period", per->period}};
    } else {
      entry["periodicity"] = nullptr;
    }
    series.push_back(entry);
  }
  return {{"q", f.q()}, {"series", series}};
}

json cmd_hankel(const Options& o) {
  const auto f = make_field(o);
  const std::size_t d = dimension(o);
  const auto theta = make_series(f, o.theta, "--theta", d);
  const auto g = make_weight(o, d);
  const HankelView view(theta, g);
  const auto m = view.matrix(o.i, o.j);
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) rows.push_back(codes_json(m.row(r)));
  const auto nv = left_null_vector(theta, g, o.i, o.j);
  return {{"i", o.i},
          {"j", o.j},
          {"weight", g.describe()},
          {"rows", m.rows},
          {"matrix", rows},
          {"rank", rank(f, m)},
          {"rank_profile", rank_profile(theta, g, o.i, o.j)},
          {"null_vector", nv ? codes_json(*nv) : json(nullptr)}};
}

json cmd_indices(const Options& o) {
  const auto f = make_field(o);
  const std::size_t d = dimension(o);
  const auto theta = make_series(f, o.theta, "--theta", d);
  const auto g = make_weight(o, d);
  const auto tr = indices_sequence(theta, g, parse_ell(o), o.stages, o.j_cutoff);
  json stages = json::array();
  for (const auto& s : tr.stages) {
    stages.push_back({{"m", s.m},
                      {"i", s.i},
                      {"j", opt_json(s.j)},
                      {"status", status_name(s.status)},
                      {"scanned_j", s.scanned_j}});
  }
  return {{"ell", tr.ell},
          {"weight", g.describe()},
          {"stages", stages},
          {"found", tr.found()},
          {"terminated", tr.terminated()}};
}

Certificate load_certificate(const Options& o) { return certificate_from_json(read_json_input(o.input)); }

json cmd_gamma(const Options& o, std::ostream& out) {
  const auto f = make_field(o);
  const std::size_t d = dimension(o);
  const auto theta = make_series(f, o.theta, "--theta", d);
  const auto g = make_weight(o, d);
  DigitPolicy policy = DigitPolicy::LexMin;
  if (o.policy == "random") {
    policy = DigitPolicy::SeededRandom;
  } else if (o.policy != "lexmin") {
    throw Error(Errc::InvalidArgument, "--policy must be lexmin or random");
  }
  const auto cert = gamma_prefix(theta, g, parse_ell(o), o.stages, o.j_cutoff, policy, o.seed);
  const auto rep = verify_certificate(cert);
  json j = certificate_to_json(cert);
  if (!rep.ok()) {
    j["self_check_failures"] = rep.failures;
    emit(o, j, out);
    throw VerificationFailure{};
  }
  return j;
}

json cmd_verify(const Options& o, std::ostream& out) {
  SeriesVector theta;
  SeriesVector gamma;
  std::optional<GeneralizedWeight> g;
  std::size_t ell = parse_ell(o);
  if (!o.input.empty()) {
    const auto cert = load_certificate(o);
    theta = cert.theta;
    gamma = cert.gamma();
    g = cert.g;
    ell = cert.ell;
  } else {
    const auto f = make_field(o);
    const std::size_t d = dimension(o);
    theta = make_series(f, o.theta, "--theta", d);
    gamma = make_series(f, o.gamma, "--gamma", d);
    g = make_weight(o, d);
  }
  const std::size_t precision = o.prec.value_or(o.max_deg + ell + 8);
  const auto r = theta.size() == 1 ? c_depth(theta[0], gamma[0], o.max_deg, precision, o.threads)
                                   : c_depth_weighted(theta, gamma, *g, o.max_deg, precision, o.threads);
  json j{{"value", r.value.to_string()},
         {"exponent", qval_json(r.value)},
         {"witness", r.witness.codes()},
         {"max_deg", o.max_deg},
         {"precision", precision},
         {"precision_limited", r.precision_limited},
         {"weighted", theta.size() > 1}};
  if (o.min_exponent) {
    const bool ok = !r.value.is_zero() && r.value.exponent() >= *o.min_exponent;
    j["bound_exponent"] = *o.min_exponent;
    j["bound_ok"] = ok;
    if (!ok) {
      emit(o, j, out);
      throw VerificationFailure{};
    }
  }
  return j;
}

json cmd_witness(const Options& o) {
  const auto f = make_field(o);
  const auto theta = make_series(f, o.theta, "--theta", 1);
  const auto gamma = make_series(f, o.gamma, "--gamma", 1);
  const std::size_t depth = o.depth.value_or(8);
  const auto w = find_witness_small(theta[0], gamma[0], depth);
  if (!w) return {{"found", false}, {"depth", depth}};
  return {{"found", true},
          {"depth", depth},
          {"n", w->n.codes()},
          {"degree", w->n.degree()},
          {"m", w->m},
          {"m_truncated", w->m_truncated},
          {"value", w->value.to_string()},
          {"exponent", qval_json(w->value)}};
}

json cmd_m0(const Options& o) {
  const auto f = make_field(o);
  const auto theta = make_series(f, o.theta, "--theta", 1);
  const auto s = m0_structure(theta[0], o.depth.value_or(20));
  json violation = nullptr;
  if (s.violation) violation = {s.violation->first, s.violation->second};
  return {{"m0", opt_json(s.m0)},
          {"depth", s.depth},
          {"pattern_consistent", s.pattern_consistent},
          {"violation", violation}};
}

json cmd_liminf(const Options& o, std::ostream& out) {
  const auto f = Field::of_order(o.q == 0 ? 2 : o.q);
  const std::size_t depth = o.depth.value_or((std::size_t{1} << (o.alternations + 1)) - 1);
  const auto s = liminf_structure(make_liminf_theta(f), depth, o.alternations);
  std::string spectrum;
  json inv = json::array();
  json sing = json::array();
  for (std::size_t m = 1; m <= s.spectrum.size(); ++m) {
    spectrum += s.spectrum[m - 1] ? '1' : '0';
    (s.spectrum[m - 1] ? inv : sing).push_back(m);
  }
  json alt = json::array();
  for (const auto& [a, b] : s.alternations) alt.push_back({a, b});
  json j{{"q", f.q()},         {"depth", depth},        {"spectrum", spectrum}, {"invertible", inv},
         {"singular", sing},   {"alternations", alt},   {"k", o.alternations},  {"reaches_k", s.reaches_k}};
  if (!s.reaches_k) {
    emit(o, j, out);
    throw VerificationFailure{};
  }
  return j;
}

json cmd_schedule(const Options& o) {
  unsigned q = 0;
  std::optional<ConstructionSchedule> sched;
  std::size_t m = o.stages;
  if (!o.input.empty()) {
    const auto cert = load_certificate(o);
    q = cert.field.q();
    sched = cantor_schedule(cert);
    m = std::min(m, *sched->length());
  } else {
    q = make_field(o).q();
    std::vector<std::size_t> ell;
    for (unsigned v : parse_code_list(o.ell)) ell.push_back(v);
    std::size_t bar = 0;
    for (auto v : ell) bar += v;
    if (bar == 0) throw Error(Errc::InvalidSchedule, "--ell must have a positive sum");
    sched = ConstructionSchedule::constant(ell, o.ell_prime.value_or(bar - 1));
  }
  const auto meas = measure_after_stages(*sched, q, m);
  const auto dim = dimension_lower_bound(*sched, q, m);
  std::ostringstream num;
  std::ostringstream den;
  num << numerator(meas.measure);
  den << denominator(meas.measure);
  json limit = dim.limit ? json(*dim.limit) : json(nullptr);
  return {{"q", q},
          {"stages", m},
          {"measure", rational_text(meas.measure)},
          {"measure_num", num.str()},
          {"measure_den", den.str()},
          {"tends_to_zero", meas.tends_to_zero ? json(*meas.tends_to_zero) : json(nullptr)},
          {"bound", dim.limit.value_or(dim.at_m)},
          {"bound_at_m", dim.at_m},
          {"bound_limit", limit},
          {"kappa", kappa(q)}};
}

json cmd_weights(const Options& o, std::ostream& out) {
  const std::size_t d = o.d == 0 ? 1 : o.d;
  const auto g = make_weight(o, d);
  json table = json::array();
  const std::size_t shown = std::min<std::size_t>(o.h_max, 32);
  for (std::size_t h = 0; h <= shown; ++h) table.push_back(g.eval(h));
  json j{{"d", d}, {"weight", g.describe()}, {"g", table}};
  if (const auto r = g.real_weight(); r && r->dim() == d) {
    const auto rep = induced_weight_deviation(*r, o.h_max);
    auto rt = [](const Rational& x) {
      return std::to_string(x.numerator()) + (x.denominator() == 1 ? "" : "/" + std::to_string(x.denominator()));
    };
    j["deviation"] = {{"h_max", o.h_max},
                      {"min", rt(rep.min_deviation)},
                      {"max", rt(rep.max_deviation)},
                      {"lower_bound", rt(rep.lower_bound)},
                      {"upper_bound", rt(rep.upper_bound)},
                      {"within_bounds", rep.within_bounds}};
    if (!rep.within_bounds) {
      emit(o, j, out);
      throw VerificationFailure{};
    }
  }
  return j;
}

json cmd_certificate_check(const Options& o, std::ostream& out) {
  const auto cert = load_certificate(o);
  const auto rep = verify_certificate(cert);
  json j{{"ok", rep.ok()},
         {"failures", rep.failures},
         {"first_failing_stage", opt_json(rep.first_failing_stage)},
         {"stages", cert.stages.size()},
         {"truncated", cert.truncated},
         {"covered_j", opt_json(cert.covered_j())}};
  if (!rep.ok()) {
    emit(o, j, out);
    throw VerificationFailure{};
  }
  return j;
}

// --- Option wiring -----------------------------------------------------------

void add_field(CLI::App* sub, Options& o) {
  sub->add_option("--q", o.q, "Field order");
  sub->add_option("--p", o.p, "Characteristic");
  sub->add_option("--k", o.k, "Extension degree");
  sub->add_option("--modulus", o.modulus, "Modulus coefficients, constant term first, e.g. 1,1,1");
}

void add_theta(CLI::App* sub, Options& o, bool with_gamma) {
  sub->add_option("--theta", o.theta, "Series text, once per coordinate");
  if (with_gamma) sub->add_option("--gamma", o.gamma, "Target series text, once per coordinate");
  sub->add_option("--d", o.d, "Dimension");
  sub->add_option("--weight", o.weight, "equal | r:a/b,... | assign:s,...[|s,...]");
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Badly approximable targets over F_q((1/t))", "ffba"};
  app.require_subcommand(1);
  Options o;

  auto* expand = app.add_subcommand("expand", "Expand series digits");
  add_field(expand, o);
  add_theta(expand, o, false);
  expand->add_option("--digits", o.digits, "Digits to print");

  auto* hankel = app.add_subcommand("hankel", "Print Delta[i, j], its rank and a left null vector");
  add_field(hankel, o);
  add_theta(hankel, o, false);
  hankel->add_option("--i", o.i, "Rows (weight argument)");
  hankel->add_option("--j", o.j, "Columns");

  auto* indices = app.add_subcommand("indices", "Run the indices construction");
  add_field(indices, o);
  add_theta(indices, o, false);

  auto* gamma = app.add_subcommand("gamma", "Construct a target prefix with its certificate");
  add_field(gamma, o);
  add_theta(gamma, o, false);
  gamma->add_option("--policy", o.policy, "lexmin | random");
  gamma->add_option("--seed", o.seed, "Seed for --policy random");

  for (auto* sub : {indices, gamma}) {
    sub->add_option("--ell", o.ell, "ell >= 1");
    sub->add_option("--stages", o.stages, "Stage budget");
    sub->add_option("--j-cutoff", o.j_cutoff, "Largest column count examined");
  }

  auto* verify = app.add_subcommand("verify", "Depth-bounded approximation constant");
  add_field(verify, o);
  add_theta(verify, o, true);
  verify->add_option("--input", o.input, "Certificate JSON to take theta, gamma and the weight from");
  verify->add_option("--ell", o.ell, "ell used for the default precision");
  verify->add_option("--max-deg", o.max_deg, "Largest deg N scanned");
  verify->add_option("--prec", o.prec, "Digits of precision (default max-deg + ell + 8)");
  verify->add_option("--threads", o.threads, "Worker threads");
  verify->add_option("--min-exponent", o.min_exponent, "Fail unless the constant is at least q^E");

  auto* witness = app.add_subcommand("witness", "Solve Delta[m, m] n = pi_m(gamma) for small m");
  add_field(witness, o);
  add_theta(witness, o, true);
  witness->add_option("--depth", o.depth, "Largest m");

  auto* m0 = app.add_subcommand("m0", "First singular Delta[m, m] and the singularity pattern");
  add_field(m0, o);
  add_theta(m0, o, false);
  m0->add_option("--depth", o.depth, "Largest m");

  auto* liminf = app.add_subcommand("liminf-theta", "Invertibility spectrum of the liminf series");
  liminf->add_option("--q", o.q, "Field order");
  liminf->add_option("--k", o.alternations, "Alternations required");
  liminf->add_option("--depth", o.depth, "Largest m (default 2^(k+1) - 1)");

  auto* measure = app.add_subcommand("measure", "Cantor measure and dimension bound of a schedule");
  auto* dimension_cmd = app.add_subcommand("dimension", "Dimension lower bound of a schedule");
  for (auto* sub : {measure, dimension_cmd}) {
    add_field(sub, o);
    sub->add_option("--ell", o.ell, "Digits fixed per stage, one value per coordinate");
    sub->add_option("--ell-prime", o.ell_prime, "Excluded exponent per stage (default sum(ell) - 1)");
    sub->add_option("--stages", o.stages, "Stages");
    sub->add_option("--input", o.input, "Certificate JSON to take the schedule from");
  }

  auto* weights = app.add_subcommand("weights", "Tabulate a generalized weight");
  weights->add_option("--d", o.d, "Dimension");
  weights->add_option("--weight", o.weight, "equal | r:a/b,... | assign:s,...[|s,...]");
  weights->add_option("--h-max", o.h_max, "Largest h for the deviation check");

  auto* check = app.add_subcommand("certificate-check", "Re-verify a certificate JSON file");
  check->add_option("--input", o.input, "Certificate JSON path, or - for stdin")->required();

  for (auto* sub : app.get_subcommands({})) add_format(sub, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  try {
    json report;
    if (expand->parsed()) report = cmd_expand(o);
    if (hankel->parsed()) report = cmd_hankel(o);
    if (indices->parsed()) report = cmd_indices(o);
    if (gamma->parsed()) report = cmd_gamma(o, out);
    if (verify->parsed()) report = cmd_verify(o, out);
    if (witness->parsed()) report = cmd_witness(o);
    if (m0->parsed()) report = cmd_m0(o);
    if (liminf->parsed()) report = cmd_liminf(o, out);
    if (measure->parsed() || dimension_cmd->parsed()) report = cmd_schedule(o);
    if (weights->parsed()) report = cmd_weights(o, out);
    if (check->parsed()) report = cmd_certificate_check(o, out);
    emit(o, report, out);
    return Ok;
  } catch (const VerificationFailure&) {
    return VerificationFailed;
  } catch (const InsufficientPrecision& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << "; needed coefficient " << e.needed()
        << ": raise --prec or supply a longer prefix\n";
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what();
    if (e.code() == Errc::BudgetExhaustedBeforeFirstStage) err << "; raise --stages or --j-cutoff";
    err << "\n";
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::logic_error& e) {
    err << "error: internal consistency check failed: " << e.what() << "\n";
    return VerificationFailed;
  }
  return Usage;
}

}  // namespace ffba::cli

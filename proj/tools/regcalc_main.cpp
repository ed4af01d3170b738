// regcalc: batch front-end over the regulated-calculus headers.
//
// One job per invocation: parse a .fn/.seq definition file, run a single
// command against named functions from it, print a report (text or JSON),
// and exit 0 (all assertions passed), 1 (a hypothesis or assertion failed),
// or 2 (bad input: file, flags, names, domains).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <regcalc/errors.hpp>
#include <regcalc/expr.hpp>
#include <regcalc/ext_real.hpp>
#include <regcalc/fnformat.hpp>
#include <regcalc/lhospital.hpp>
#include <regcalc/limit_engine.hpp>
#include <regcalc/lsmeasure.hpp>
#include <regcalc/mvt.hpp>
#include <regcalc/piecewise.hpp>
#include <regcalc/quadrature.hpp>
#include <regcalc/stieltjes.hpp>
#include <regcalc/stolz.hpp>

namespace rc = regcalc;
using ojson = nlohmann::ordered_json;

namespace {

// Input-side failures (flags, names, files): exit code 2, as opposed to
// computation-side assertion failures which exit 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Args {
    std::string command;
    std::string file;
    std::string f_name, g_name, alpha_name;
    std::optional<double> x, s, t;
    std::string endpoint;
    std::optional<double> rtol, atol;
    double agree_rtol = 1e-6;
    bool json = false;
    bool symmetric = false;
    std::string plot_csv;
    std::string f_data, g_data;
    long long probe = 1000000;
};

// ---------------------------------------------------------------- JSON bits

ojson j_num(double d) {
    if (std::isnan(d)) return nullptr;
    if (std::isinf(d)) return d > 0 ? "+inf" : "-inf";
    return d;
}

ojson j_ext(const rc::ExtReal& v) {
    return v.is_finite() ? ojson(v.raw()) : ojson(v.str());
}

ojson j_est(const rc::LimitEstimate& e) {
    ojson j;
    j["status"] = rc::limit_status_name(e.status);
    j["value"] = j_ext(e.value);
    j["err_estimate"] = j_num(e.err_estimate);
    j["samples_used"] = e.samples_used;
    j["subseq_lo"] = j_num(e.subseq_lo);
    j["subseq_hi"] = j_num(e.subseq_hi);
    j["note"] = e.note;
    return j;
}

ojson j_verdict(const rc::GridVerdict& g) {
    ojson j;
    j["property"] = g.property;
    j["checked"] = g.checked;
    j["violations"] = g.violations;
    j["worst_violation"] = j_num(g.worst_violation);
    j["worst_x"] = j_num(g.worst_x);
    j["ok"] = g.ok();
    return j;
}

void j_rule_into(ojson& j, const rc::RuleReport& r) {
    ojson hs = ojson::array();
    for (const auto& h : r.hypotheses) {
        ojson o;
        o["name"] = h.name;
        o["status"] = rc::hypothesis_status_name(h.status);
        o["evidence"] = h.evidence;
        hs.push_back(std::move(o));
    }
    j["hypotheses"] = std::move(hs);
    j["applicable"] = r.applicable;
    j["case"] = r.case_name;
    j["conclusion"] = r.conclusion ? j_ext(*r.conclusion) : ojson(nullptr);
    j["certificate"] = r.certificate ? ojson(*r.certificate) : ojson(nullptr);
    j["rule_limit"] = r.rule_limit ? j_est(*r.rule_limit) : ojson(nullptr);
    if (r.oracle_limit)
        j["oracle"] = j_est(*r.oracle_limit);
    else if (r.oracle_grid)
        j["oracle"] = j_verdict(*r.oracle_grid);
    else
        j["oracle"] = nullptr;
    j["agree"] = r.agree;
}

ojson j_witness(const rc::WitnessPair& w) {
    ojson j;
    j["u"] = j_num(w.u);
    j["v"] = j_num(w.v);
    j["lhs_value"] = j_num(w.lhs_value);
    j["rhs_value"] = j_num(w.rhs_value);
    j["product"] = j_num(w.product);
    j["grid_resolution"] = w.grid_resolution;
    return j;
}

ojson j_sandwich(const rc::SandwichResult& s) {
    ojson j;
    j["lo"] = j_num(s.lo);
    j["mid"] = j_num(s.mid);
    j["hi"] = j_num(s.hi);
    j["ok"] = s.ok;
    j["ratio_monotone"] = s.ratio_monotone;
    j["endpoint_checked"] = s.endpoint_checked;
    j["ratio_at_s"] = j_num(s.ratio_at_s);
    j["ratio_at_t"] = j_num(s.ratio_at_t);
    j["endpoint_ok"] = s.endpoint_ok;
    j["grid_resolution"] = s.grid_resolution;
    return j;
}

// ---------------------------------------------------------------- text bits

std::string est_str(const rc::LimitEstimate& e) {
    std::string out = rc::limit_status_name(e.status);
    out += " ";
    out += e.value.str();
    out += " +/- " + rc::double_str(e.err_estimate);
    out += " (" + std::to_string(e.samples_used) + " samples";
    if (!e.note.empty()) out += "; " + e.note;
    out += ")";
    return out;
}

void print_scalar(std::ostream& os, const std::string& key, const ojson& v, int indent);

void print_tree(std::ostream& os, const ojson& j, int indent) {
    std::string pad(indent, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const ojson& v = it.value();
        if (v.is_object()) {
            os << pad << it.key() << ":\n";
            print_tree(os, v, indent + 2);
        } else if (v.is_array()) {
            os << pad << it.key() << ":\n";
            for (const ojson& e : v) {
                if (e.is_object()) {
                    bool first = true;
                    for (auto ei = e.begin(); ei != e.end(); ++ei) {
                        std::string lead = first ? pad + "  - " : pad + "    ";
                        os << lead;
                        print_scalar(os, ei.key(), ei.value(), indent + 4);
                        first = false;
                    }
                } else {
                    os << pad << "  - " << e.dump() << "\n";
                }
            }
        } else {
            os << pad;
            print_scalar(os, it.key(), v, indent);
        }
    }
}

void print_scalar(std::ostream& os, const std::string& key, const ojson& v, int) {
    os << key << ": ";
    if (v.is_null())
        os << "(none)";
    else if (v.is_string())
        os << v.get<std::string>();
    else if (v.is_boolean())
        os << (v.get<bool>() ? "yes" : "no");
    else if (v.is_number_float())
        os << rc::double_str(v.get<double>());
    else
        os << v.dump();
    os << "\n";
}

// ------------------------------------------------------------ input helpers

const rc::PiecewiseFn& need_fn(const rc::FnFile& ff, const std::string& name,
                               const char* flag) {
    if (name.empty()) throw InputError(std::string("missing required flag ") + flag);
    if (!ff.has_fn(name))
        throw InputError("no function named '" + name + "' in the input file");
    return ff.fn(name);
}

rc::SequencePolyline need_seq(const rc::FnFile* ff, const std::string& name,
                              const std::string& data_path, const char* flag,
                              const char* data_flag) {
    if (!data_path.empty())
        return rc::SequencePolyline::from_data(rc::load_sequence_data(data_path));
    if (name.empty())
        throw InputError(std::string("need ") + flag + " (sequence name) or " + data_flag +
                         " (data file)");
    if (!ff) throw InputError("sequence names require an input file");
    if (!ff->has_seq(name))
        throw InputError("no sequence named '" + name + "' in the input file");
    return rc::SequencePolyline::from_expr(ff->seq(name));
}

rc::Endpoint resolve_endpoint(const std::string& tok, rc::ExtReal a, rc::ExtReal b) {
    if (tok == "a" || tok == "lower") return rc::Endpoint::lower;
    if (tok == "b" || tok == "upper") return rc::Endpoint::upper;
    if (tok == "+inf") {
        if (!b.is_pos_inf())
            throw InputError("--endpoint +inf, but the upper domain end is " + b.str());
        return rc::Endpoint::upper;
    }
    if (tok == "-inf") {
        if (!a.is_neg_inf())
            throw InputError("--endpoint -inf, but the lower domain end is " + a.str());
        return rc::Endpoint::lower;
    }
    try {
        double v = std::stod(tok);
        if (a.is_finite() && std::abs(v - a.raw()) <= 1e-9 * (1.0 + std::abs(v)))
            return rc::Endpoint::lower;
        if (b.is_finite() && std::abs(v - b.raw()) <= 1e-9 * (1.0 + std::abs(v)))
            return rc::Endpoint::upper;
    } catch (const std::exception&) {
    }
    throw InputError("--endpoint '" + tok + "' matches neither domain end (" + a.str() +
                     ", " + b.str() + ")");
}

double need_val(const std::optional<double>& v, const char* flag) {
    if (!v) throw InputError(std::string("missing required flag ") + flag);
    return *v;
}

rc::LimitOptions limit_opts(const Args& a) {
    rc::LimitOptions lo;
    if (a.rtol) lo.rtol = *a.rtol;
    if (a.atol) lo.atol = *a.atol;
    return lo;
}

rc::LHospitalOptions rule_opts(const Args& a) {
    rc::LHospitalOptions opt;
    opt.limits = limit_opts(a);
    opt.dalpha.limits = opt.limits;
    opt.agree_rtol = a.agree_rtol;
    return opt;
}

// ------------------------------------------------------------------ plotting

void write_plot_csv(const Args& a, const rc::FnFile& ff) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f (required by --plot-csv)");
    rc::ExtReal da = f.domain_a(), db = f.domain_b();
    rc::PiecewiseFn alpha = a.alpha_name.empty() ? rc::PiecewiseFn::identity(da, db)
                                                 : ff.fn(a.alpha_name);

    double lo = a.s ? *a.s : (da.is_finite() ? da.raw() : -16.0);
    double hi = a.t ? *a.t : (db.is_finite() ? db.raw() : 16.0);
    if (da.is_finite()) lo = std::max(lo, da.raw());
    if (db.is_finite()) hi = std::min(hi, db.raw());
    if (!(lo < hi)) throw InputError("empty plot window");

    std::vector<double> xs;
    const int n = 512;
    xs.reserve(n + 64);
    for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * (i + 0.5) / n);
    for (const rc::Breakpoint& bp : rc::breakpoints(f, lo, hi, 64)) xs.push_back(bp.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    rc::DAlphaOptions dopt;
    dopt.limits = limit_opts(a);

    std::ofstream out(a.plot_csv);
    if (!out) throw InputError("cannot open '" + a.plot_csv + "' for writing");
    out << "x,f_left,f_right,d_alpha\n";
    for (double x : xs) {
        std::string l = "nan", r = "nan", d = "nan";
        try {
            rc::OneSidedPair p = f.one_sided(x);
            l = rc::double_str(p.left.raw());
            r = rc::double_str(p.right.raw());
        } catch (const rc::Error&) {
        }
        try {
            d = rc::d_alpha(f, alpha, x, dopt).value.str();
        } catch (const rc::Error&) {
        }
        out << rc::double_str(x) << "," << l << "," << r << "," << d << "\n";
    }
}

// ------------------------------------------------------------------ commands

int cmd_eval(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    double x = need_val(a.x, "--x");
    double v = f.value_at(x);
    j["x"] = j_num(x);
    j["value"] = j_num(v);
    return 0;
}

int cmd_limits(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    if (a.x) {
        rc::OneSidedPair p = f.one_sided(*a.x);
        j["x"] = j_num(*a.x);
        j["left"] = j_ext(p.left);
        j["right"] = j_ext(p.right);
        j["jump"] = j_num(p.right.raw() - p.left.raw());
        return 0;
    }
    if (a.endpoint.empty()) throw InputError("limits needs --x or --endpoint");
    rc::Endpoint which = resolve_endpoint(a.endpoint, f.domain_a(), f.domain_b());
    rc::LimitEstimate e = rc::end_behavior(f, which, limit_opts(a));
    j["endpoint"] = a.endpoint;
    j["estimate"] = j_est(e);
    return e.status == rc::LimitStatus::inconclusive ? 1 : 0;
}

int cmd_dalpha(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    double x = need_val(a.x, "--x");
    rc::DAlphaOptions opt;
    opt.limits = limit_opts(a);
    opt.symmetric = a.symmetric;
    rc::DerivativeResult r = rc::d_alpha(f, alpha, x, opt);
    j["x"] = j_num(x);
    j["value"] = j_ext(r.value);
    j["method"] = rc::deriv_method_name(r.method);
    j["estimate"] = r.estimate ? j_est(*r.estimate) : ojson(nullptr);
    return 0;
}

int cmd_mvt(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    double s = need_val(a.s, "--s"), t = need_val(a.t, "--t");
    rc::WitnessOptions opt;
    opt.dalpha.limits = limit_opts(a);
    if (a.g_name.empty()) {
        rc::WitnessPair w = rc::rolle_witness(f, alpha, s, t, opt);
        j["witness"] = j_witness(w);
        return 0;
    }
    const rc::PiecewiseFn& g = need_fn(ff, a.g_name, "--g");
    rc::WitnessPair w = rc::cauchy_witness(f, g, alpha, s, t, opt);
    rc::SandwichResult sw = rc::sandwich_check(f, g, alpha, s, t, opt);
    j["witness"] = j_witness(w);
    j["sandwich"] = j_sandwich(sw);
    return sw.ok && sw.endpoint_ok ? 0 : 1;
}

int cmd_lhospital(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& g = need_fn(ff, a.g_name, "--g");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    if (a.endpoint.empty()) throw InputError("lhospital needs --endpoint");
    rc::ExtReal da = alpha.domain_a(), db = alpha.domain_b();
    rc::Endpoint which = resolve_endpoint(a.endpoint, da, db);
    rc::RuleReport rep = rc::lhospital_limit(f, g, alpha, which, rule_opts(a));
    j_rule_into(j, rep);
    return rep.applicable && rep.agree ? 0 : 1;
}

int cmd_monotone(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& g = need_fn(ff, a.g_name, "--g");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    std::string tok = a.endpoint.empty() ? "a" : a.endpoint;
    rc::Endpoint zero_end = resolve_endpoint(tok, alpha.domain_a(), alpha.domain_b());
    rc::RuleReport rep = rc::monotone_certify(f, g, alpha, zero_end, rule_opts(a));
    j_rule_into(j, rep);
    return rep.applicable && rep.agree ? 0 : 1;
}

int cmd_stolz(const Args& a, const rc::FnFile* ff, ojson& j) {
    rc::SequencePolyline f = need_seq(ff, a.f_name, a.f_data, "--f", "--f-data");
    rc::SequencePolyline g = need_seq(ff, a.g_name, a.g_data, "--g", "--g-data");
    rc::StolzOptions opt;
    opt.probe_n = a.probe;
    opt.rule = rule_opts(a);
    opt.agree_rtol = a.agree_rtol;
    rc::StolzReport rep = rc::stolz_report(f, g, opt);

    j_rule_into(j, rep.rule);
    j["oracle"] = j_est(rep.oracle);  // prefix-ratio oracle supersedes the function one
    j["function_oracle"] =
        rep.rule.oracle_limit ? j_est(*rep.rule.oracle_limit) : ojson(nullptr);
    j["seq_ratio"] = j_est(rep.seq_ratio);
    ojson raw;
    raw["n"] = rep.raw_n;
    raw["numer"] = j_num(rep.raw_numer);
    raw["denom"] = j_num(rep.raw_denom);
    raw["ratio"] = j_num(rep.raw_ratio);
    j["raw"] = std::move(raw);
    j["construction_ok"] = rep.construction_ok;
    j["construction_note"] = rep.construction_note;
    j["positivity_ok"] = rep.positivity_ok;
    j["agree"] = rep.agree;  // overall verdict, not just the rule's
    return rep.rule.applicable && rep.agree ? 0 : 1;
}

int cmd_integrate(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    double s = need_val(a.s, "--s"), t = need_val(a.t, "--t");
    rc::LSMeasure m(alpha);
    j["s"] = j_num(s);
    j["t"] = j_num(t);
    j["measure"] = j_num(m.measure_interval(s, t));
    if (!a.f_name.empty()) {
        const rc::PiecewiseFn& f = need_fn(ff, a.f_name, "--f");
        rc::QuadResult q = rc::integrate_ls(f, m, s, t);
        j["value"] = j_num(q.value);
        j["err_estimate"] = j_num(q.err_estimate);
        j["intervals"] = q.intervals;
    }
    return 0;
}

int cmd_ftc(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& h = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    double s = need_val(a.s, "--s"), t = need_val(a.t, "--t");
    rc::FtcOptions opt;
    opt.dalpha.limits = limit_opts(a);
    opt.residual_rtol = a.agree_rtol;
    rc::FtcResult r = rc::ftc_check(h, alpha, s, t, opt);
    j["lhs"] = j_num(r.lhs);
    j["rhs"] = j_num(r.rhs);
    j["residual"] = j_num(r.residual);
    j["ok"] = r.ok;
    ojson q;
    q["value"] = j_num(r.quad.value);
    q["err_estimate"] = j_num(r.quad.err_estimate);
    q["intervals"] = r.quad.intervals;
    j["quadrature"] = std::move(q);
    return r.ok ? 0 : 1;
}

int cmd_lsrule(const Args& a, const rc::FnFile& ff, ojson& j) {
    const rc::PiecewiseFn& u = need_fn(ff, a.f_name, "--f");
    const rc::PiecewiseFn& v = need_fn(ff, a.g_name, "--g");
    const rc::PiecewiseFn& alpha = need_fn(ff, a.alpha_name, "--alpha");
    rc::RuleReport rep;
    if (!a.endpoint.empty()) {
        rc::Endpoint which =
            resolve_endpoint(a.endpoint, alpha.domain_a(), alpha.domain_b());
        rep = rc::lhospital_integral(u, v, alpha, which, rule_opts(a));
    } else {
        rep = rc::monotone_integral(u, v, alpha, rule_opts(a));
    }
    j_rule_into(j, rep);
    return rep.applicable && rep.agree ? 0 : 1;
}

int dispatch(const Args& a) {
    std::optional<rc::FnFile> ff;
    try {
        if (!a.file.empty()) ff = rc::load_fn_file(a.file);
    } catch (const rc::Error& e) {
        throw InputError(e.what());
    }
    if (!ff && a.command != "stolz") throw InputError("missing input FILE");

    ojson j;
    j["command"] = a.command;
    if (!a.file.empty()) j["file"] = a.file;

    int code;
    if (a.command == "eval")
        code = cmd_eval(a, *ff, j);
    else if (a.command == "limits")
        code = cmd_limits(a, *ff, j);
    else if (a.command == "dalpha")
        code = cmd_dalpha(a, *ff, j);
    else if (a.command == "mvt")
        code = cmd_mvt(a, *ff, j);
    else if (a.command == "lhospital")
        code = cmd_lhospital(a, *ff, j);
    else if (a.command == "monotone")
        code = cmd_monotone(a, *ff, j);
    else if (a.command == "stolz")
        code = cmd_stolz(a, ff ? &*ff : nullptr, j);
    else if (a.command == "integrate")
        code = cmd_integrate(a, *ff, j);
    else if (a.command == "ftc")
        code = cmd_ftc(a, *ff, j);
    else if (a.command == "lsrule")
        code = cmd_lsrule(a, *ff, j);
    else
        throw InputError("unknown command '" + a.command + "'");

    j["exit"] = code;
    if (!a.plot_csv.empty()) write_plot_csv(a, *ff);

    if (a.json)
        std::cout << j.dump(2) << "\n";
    else
        print_tree(std::cout, j, 0);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    Args a;
    CLI::App app{"calculus for regulated functions: one-sided limits, Stieltjes "
                 "derivatives, mean-value witnesses, quotient-limit rules, and "
                 "Lebesgue-Stieltjes integrals"};
    app.require_subcommand(1);

    const char* cmds[] = {"eval",     "limits", "dalpha",    "mvt", "lhospital",
                          "monotone", "stolz",  "integrate", "ftc", "lsrule"};
    const char* descs[] = {
        "evaluate a function at a point",
        "one-sided limits at a point (--x) or end behavior (--endpoint)",
        "generalized derivative of --f against --alpha at --x",
        "Rolle witness (--f), or Cauchy witness plus sandwich bounds (--f and --g)",
        "quotient-limit rule for f/g via the derivative ratio, with direct oracle",
        "monotonicity certificate for f/g from the derivative ratio",
        "sequence quotient limit via the piecewise-linear interpolant construction",
        "Lebesgue-Stieltjes measure of (s,t), and the integral of --f when given",
        "fundamental-theorem check: h-(t) - h+(s) against the integral of the "
        "derivative",
        "integral form of the quotient-limit rule (--endpoint) or of the "
        "monotonicity rule (no --endpoint)"};

    for (int i = 0; i < 10; ++i) {
        CLI::App* c = app.add_subcommand(cmds[i], descs[i]);
        bool is_stolz = std::string(cmds[i]) == "stolz";
        auto* pos = c->add_option("FILE", a.file, "function-definition file");
        if (!is_stolz) pos->required();
        c->add_option("--f", a.f_name, "function (or sequence) name");
        c->add_option("--g", a.g_name, "second function (or sequence) name");
        c->add_option("--alpha", a.alpha_name, "integrator / derivative base name");
        c->add_option("--x", a.x, "evaluation point");
        c->add_option("--s", a.s, "interval left end");
        c->add_option("--t", a.t, "interval right end");
        c->add_option("--endpoint", a.endpoint,
                      "domain end: a|b|lower|upper|+inf|-inf|<value>");
        c->add_option("--rtol", a.rtol, "relative tolerance for limit extrapolation");
        c->add_option("--atol", a.atol, "absolute tolerance for limit extrapolation");
        c->add_option("--agree-rtol", a.agree_rtol,
                      "relative tolerance for rule-vs-oracle agreement");
        c->add_flag("--json", a.json, "emit a machine-readable JSON report");
        c->add_option("--plot-csv", a.plot_csv,
                      "dump (x, f-, f+, D_alpha f) samples of --f to this path");
        if (is_stolz) {
            c->add_option("--f-data", a.f_data, "numeric sequence file for --f");
            c->add_option("--g-data", a.g_data, "numeric sequence file for --g");
            c->add_option("--probe", a.probe, "direct prefix-ratio probe index");
        }
        if (std::string(cmds[i]) == "dalpha")
            c->add_flag("--symmetric", a.symmetric,
                        "sample the mirrored one-sided combination");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 2;
    }
    a.command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(a);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rc::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rc::HorizonError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rc::ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rc::Error& e) {
        // Hypothesis, precondition, witness, quadrature, or evaluation failure.
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#include "dualcurve/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dualcurve/approx.hpp"
#include "dualcurve/config.hpp"
#include "dualcurve/counting.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/errors.hpp"
#include "dualcurve/hausdorff.hpp"
#include "dualcurve/ledger.hpp"
#include "dualcurve/psi.hpp"
#include "dualcurve/util.hpp"

namespace dualcurve {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr long long kDefaultBudget = 50'000'000;
constexpr long long kDefaultMaxIntervals = 40'000'000;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    return out;
}

void check_format(const Config& cfg, const std::string& supported) {
    std::string fmt = cfg.get_string("format", supported);
    if (fmt != supported)
        throw config_error("this command emits " + supported + " only");
}

void note_table_tail(const ApproxFunction& psi, long long max_q, std::ostream& report) {
    long long n = psi.table_size();
    if (n > 0 && max_q > n)
        report << "note: psi table has " << n << " rows; queries beyond q=" << n
               << " use the constant tail\n";
}

int cmd_curve_info(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "psi", "truncate", "seed", "output", "format"});
    PlanarCurve curve = curve_from_config(cfg);
    ExtendedCurve ext = extend(curve);
    const CurveConstants& k = ext.constants();
    report << "c1 = " << format_double(curve.c1) << "\n";
    report << "c2 = " << format_double(curve.c2) << "\n";
    report << "sign = " << curve.sign << "\n";
    report << "M = " << format_double(k.M) << "\n";
    report << "C = " << format_double(k.C) << "\n";
    report << "J = [" << format_double(ext.J().lo) << ", " << format_double(ext.J().hi) << "]\n";
    report << "Iprime = [" << format_double(ext.Iprime().lo) << ", "
           << format_double(ext.Iprime().hi) << "]\n";
    if (cfg.has("psi")) {
        ApproxFunction psi = psi_from_config(cfg, "");
        if (psi.has_q0())
            report << "q0 = " << psi.q0() << "\n";
        else
            report << "q0 = undefined (psi stays above 1/8)\n";
    }
    // duality self-check: q2 f*(q1/q2) against F at the critical point
    std::mt19937_64 rng(static_cast<unsigned long long>(cfg.get_int("seed", 0)));
    double M = k.M;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        long long q2 = 1 + static_cast<long long>(rng() % 500);
        long long span = static_cast<long long>(std::floor(2.0 * M * static_cast<double>(q2)));
        long long q1 = static_cast<long long>(rng() % (2 * span + 1)) - span;
        double lhs = static_cast<double>(q2) * ext.fstar(static_cast<double>(q1) / static_cast<double>(q2));
        double rhs = F_eval(ext, q1, q2, critical_point(ext, q1, q2));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report << "duality_residual = " << format_double(worst) << "\n";
    return exit_ok;
}

int cmd_enumerate(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "psi", "truncate", "qlo", "qhi", "output", "format", "budget", "seed"});
    check_format(cfg, "csv");
    PlanarCurve curve = curve_from_config(cfg);
    ExtendedCurve ext = extend(curve);
    ApproxFunction psi = psi_from_config(cfg, "");
    long long qlo = cfg.get_int("qlo");
    long long qhi = cfg.get_int("qhi");
    if (qlo < 1 || qlo > qhi) throw config_error("enumerate requires 1 <= qlo <= qhi");
    long long budget = cfg.get_int("budget", kDefaultBudget);

    std::ofstream out = open_output(cfg.get_string("output"));
    out << "q1,q2,p,q,case,parts,length\n";
    long long rows = 0;
    bool clipped = false;
    try {
        enumerate_nonempty(ext, psi, qlo, qhi,
                           [&](const DualTriple& t, const IntervalSet& set) {
                               out << t.q1 << ',' << t.q2 << ',' << t.p << ',' << t.q << ','
                                   << triple_case_name(t.kase) << ',' << set.parts.size() << ','
                                   << format_double(set.total_length) << "\n";
                               ++rows;
                           },
                           budget);
    } catch (const budget_error& e) {
        out.flush();
        report << "budget exceeded after " << rows << " rows: " << e.what() << "\n";
        clipped = true;
    }
    note_table_tail(psi, qhi, report);
    report << "wrote " << cfg.get_string("output") << " (" << rows << " rows)\n";
    return clipped ? exit_budget : exit_ok;
}

PhiSpec phi_from_config(const Config& cfg, const ExtendedCurve* ext) {
    const ConfigValue::Table& t = cfg.get_table("phi");
    int line = cfg.entries().at("phi").line;
    auto it = t.find("kind");
    if (it == t.end() || !it->second.is_string())
        throw config_error("phi needs a string 'kind'", line);
    std::string kind = std::get<std::string>(it->second.v);
    if (kind == "poly") {
        auto ct = t.find("coeffs");
        if (ct == t.end() || !ct->second.is_array())
            throw config_error("poly phi needs 'coeffs = [...]'", line);
        return PhiSpec::poly_from_doubles(std::get<std::vector<double>>(ct->second.v));
    }
    if (kind == "dual") {
        if (!ext) throw config_error("dual phi needs a curve in the config", line);
        return PhiSpec::dual(*ext);
    }
    throw config_error("phi kind must be 'poly' or 'dual'", line);
}

int cmd_count(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "phi", "gamma", "jgrid", "kgrid", "lambda",
                       "output", "format", "budget", "seed"});
    check_format(cfg, "csv");
    // the extended curve must outlive the scan when phi = dual
    ExtendedCurve ext;
    bool have_curve = cfg.has("curve");
    if (have_curve) ext = extend(curve_from_config(cfg));
    PhiSpec phi = phi_from_config(cfg, have_curve ? &ext : nullptr);

    Interval gamma(0.0, 1.0);
    if (cfg.has("gamma")) {
        const ConfigValue::Table& g = cfg.get_table("gamma");
        int line = cfg.entries().at("gamma").line;
        auto a = g.find("a"), b = g.find("b");
        if (a == g.end() || b == g.end() || !a->second.is_number() || !b->second.is_number())
            throw config_error("gamma needs numeric keys a and b", line);
        gamma = Interval(std::get<double>(a->second.v), std::get<double>(b->second.v));
    } else if (phi.kind == PhiSpec::Kind::dual) {
        gamma = ext.J();
    }

    std::vector<long long> jg = cfg.get_int_array("jgrid");
    std::vector<long long> kg = cfg.get_int_array("kgrid");
    std::vector<int> jgrid(jg.begin(), jg.end()), kgrid(kg.begin(), kg.end());
    std::optional<double> lambda;
    if (cfg.has("lambda")) lambda = cfg.get_number("lambda");
    long long budget = cfg.get_int("budget", kDefaultBudget);

    std::vector<CountRecord> table = dyadic_scan(phi, gamma, jgrid, kgrid, lambda, budget);

    std::ofstream out = open_output(cfg.get_string("output"));
    out << "j,k,R,delta,count,weighted,boundary_flags\n";
    for (const CountRecord& r : table) {
        out << r.j << ',' << r.k << ',' << r.R << ',' << format_double(r.delta) << ',' << r.count
            << ',' << (r.weighted ? format_double(*r.weighted) : std::string()) << ','
            << r.boundary_flags << "\n";
    }
    report << "wrote " << cfg.get_string("output") << " (" << table.size() << " rows)\n";
    return exit_ok;
}

int cmd_sum(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "psi", "truncate", "s", "Q", "kmin", "kmax",
                       "output", "format", "budget", "seed"});
    check_format(cfg, "json");
    PlanarCurve curve = curve_from_config(cfg);
    ExtendedCurve ext = extend(curve);
    ApproxFunction psi = psi_from_config(cfg, "");
    double s = cfg.get_number("s");
    if (!cfg.has("Q") && !(cfg.has("kmin") && cfg.has("kmax")))
        throw config_error("sum needs Q (series) and/or kmin+kmax (block ledger)");
    long long budget = cfg.get_int("budget", kDefaultBudget);

    ordered_json doc;
    doc["s"] = s;
    if (cfg.has("Q")) {
        long long Q = cfg.get_int("Q");
        doc["Q"] = Q;
        doc["series_partial"] = series_partial(psi, s, Q);
        note_table_tail(psi, Q, report);
    }
    if (cfg.has("kmin")) {
        int kmin = static_cast<int>(cfg.get_int("kmin"));
        int kmax = static_cast<int>(cfg.get_int("kmax"));
        BlockLedger ledger = cover_sum_by_case(ext, psi, s, kmin, kmax, budget);
        ordered_json constants;
        constants["M"] = ledger.M;
        constants["C"] = ledger.C;
        constants["c1"] = ledger.c1;
        constants["c2"] = ledger.c2;
        constants["q0"] = ledger.q0;
        constants["K"] = ledger.K;
        doc["constants"] = constants;
        ordered_json blocks = ordered_json::array();
        for (const BlockRecord& b : ledger.blocks) {
            ordered_json jb;
            jb["k"] = b.k;
            jb["q_lo"] = b.q_lo;
            jb["q_hi"] = b.q_hi;
            jb["below_q0"] = b.below_q0;
            jb["costs"] = {{"theta1", b.cost[0]},
                           {"p_not_p0", b.cost[1]},
                           {"p0_small", b.cost[2]},
                           {"p0_large", b.cost[3]}};
            jb["bounds"] = {{"theta1", b.bound[0]},
                            {"p_not_p0", b.bound[1]},
                            {"p0_small", b.bound[2]},
                            {"p0_large", b.bound[3]}};
            jb["paper_form"] = b.paper_form;
            jb["triples_seen"] = b.triples_seen;
            blocks.push_back(jb);
        }
        doc["blocks"] = blocks;
        note_table_tail(psi, pow2ll(kmax + 1) - 1, report);
    }

    std::ofstream out = open_output(cfg.get_string("output"));
    out << doc.dump(2) << "\n";
    report << "wrote " << cfg.get_string("output") << "\n";
    return exit_ok;
}

int cmd_cover(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "psi", "truncate", "Q0", "Q1", "s", "rho",
                       "output", "format", "budget", "max_intervals", "seed"});
    check_format(cfg, "csv");
    PlanarCurve curve = curve_from_config(cfg);
    ExtendedCurve ext = extend(curve);
    ApproxFunction psi = psi_from_config(cfg, "");
    long long Q0 = cfg.get_int("Q0");
    long long Q1 = cfg.get_int("Q1");
    double s = cfg.get_number("s");
    long long budget = cfg.get_int("budget", kDefaultBudget);
    long long max_iv = cfg.get_int("max_intervals", kDefaultMaxIntervals);
    double rho = cfg.get_number("rho", 2.0 * psi(std::max<long long>(Q0, 1)) / static_cast<double>(Q0));

    std::vector<Interval> cover = build_tail_cover(ext, psi, Q0, Q1, budget, max_iv);
    CoverEstimate est = hs_cost(std::move(cover), s, rho);
    est.Q0 = Q0;
    est.Q1 = Q1;

    std::ofstream out = open_output(cfg.get_string("output"));
    out << "s,Q0,Q1,rho,cost,interval_count\n";
    out << format_double(est.s) << ',' << est.Q0 << ',' << est.Q1 << ','
        << format_double(est.rho) << ',' << format_double(est.cost) << ',' << est.interval_count
        << "\n";
    note_table_tail(psi, Q1, report);
    report << "wrote " << cfg.get_string("output") << "\n";
    return exit_ok;
}

int cmd_dimscan(const Config& cfg, std::ostream& report) {
    cfg.restrict_keys({"curve", "nu", "sgrid", "kgrid", "decay_threshold",
                       "output", "format", "budget", "max_intervals", "seed"});
    check_format(cfg, "csv");
    PlanarCurve curve = curve_from_config(cfg);
    ExtendedCurve ext = extend(curve);
    double nu = cfg.get_number("nu");
    std::vector<double> sgrid = cfg.get_array("sgrid");
    std::vector<long long> kg = cfg.get_int_array("kgrid");
    std::vector<int> kgrid(kg.begin(), kg.end());
    double threshold = cfg.get_number("decay_threshold", 0.95);
    long long budget = cfg.get_int("budget", kDefaultBudget);
    long long max_iv = cfg.get_int("max_intervals", kDefaultMaxIntervals);

    DimScanResult res = dimension_scan(ext, nu, sgrid, kgrid, threshold, budget, max_iv);

    std::ofstream out = open_output(cfg.get_string("output"));
    out << "s,k,Q0,Q1,rho,cost,interval_count,classification\n";
    for (const DimScanRow& r : res.rows) {
        out << format_double(r.s) << ',' << r.k << ',' << r.Q0 << ',' << r.Q1 << ','
            << format_double(r.rho) << ',' << format_double(r.cost) << ',' << r.interval_count
            << ',' << r.classification << "\n";
    }
    if (res.bracketed)
        report << "s_hat = " << format_double(res.s_hat) << " (growing <= "
               << format_double(res.largest_growing) << ", shrinking >= "
               << format_double(res.smallest_shrinking) << ")\n";
    else
        report << "transition not bracketed\n";
    if (!res.note.empty()) report << "note: " << res.note << "\n";
    report << "wrote " << cfg.get_string("output") << " (" << res.rows.size() << " rows)\n";
    return exit_ok;
}

} // namespace

int run_command(const std::string& command, const std::string& config_path,
                std::ostream& report, std::ostream& errors) {
    try {
        Config cfg = Config::parse_file(config_path);
        if (command == "curve-info") return cmd_curve_info(cfg, report);
        if (command == "enumerate") return cmd_enumerate(cfg, report);
        if (command == "count") return cmd_count(cfg, report);
        if (command == "sum") return cmd_sum(cfg, report);
        if (command == "cover") return cmd_cover(cfg, report);
        if (command == "dimscan") return cmd_dimscan(cfg, report);
        errors << "unknown command '" << command << "'\n";
        return exit_config;
    } catch (const config_error& e) {
        errors << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const budget_error& e) {
        errors << "budget error: " << e.what() << "\n";
        return exit_budget;
    } catch (const std::invalid_argument& e) {
        errors << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        errors << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace dualcurve

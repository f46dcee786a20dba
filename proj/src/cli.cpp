#include "rscert/cli.hpp"

#include "rscert/certify1d.hpp"
#include "rscert/certify2d.hpp"
#include "rscert/errors.hpp"
#include "rscert/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rscert {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
    json result = json::object();
    bool ok = true;
    std::string text;
    std::string failure; ///< set when a check fails
};

json to_json(const Enclosure& e)
{
    return {{"lo", e.lo}, {"hi", e.hi}};
}

json config_json(const RunConfig& c)
{
    return {{"grid_log2", c.grid_log2},
            {"max_scale", c.max_scale},
            {"out_dir", c.out_dir},
            {"seed", c.seed},
            {"threads", c.threads}};
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string fixed(double v, int digits = 6)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string rational_string(const Rational& q)
{
    std::ostringstream os;
    os << q;
    return os.str();
}

class Session {
public:
    explicit Session(RunConfig cfg) : cfg_(std::move(cfg)) {}

    const RunConfig& config() const { return cfg_; }

    fs::path output(const std::string& name) const
    {
        const fs::path dir(cfg_.out_dir);
        fs::create_directories(dir);
        return dir / name;
    }

    std::string write_json(const std::string& name, const json& body) const
    {
        const fs::path p = output(name);
        std::ofstream f(p);
        json doc = {{"schema_version", kSchemaVersion}, {"config", config_json(cfg_)}, {"data", body}};
        f << doc.dump(2) << '\n';
        return p.string();
    }

    /// Writes a CSV whose first line records the run configuration.
    std::string write_csv(const std::string& name, const std::string& header,
                          const std::function<void(std::ostream&)>& rows) const
    {
        const fs::path p = output(name);
        std::ofstream f(p);
        f << "# config: " << config_json(cfg_).dump() << '\n' << header << '\n';
        f << std::setprecision(17);
        rows(f);
        return p.string();
    }

private:
    RunConfig cfg_;
};

json record_json(const CertRecord1D& r)
{
    return {{"center", r.center.to_binary()},
            {"center_decimal", r.center.to_double()},
            {"k", r.k},
            {"f", to_json(r.f)},
            {"target", r.target},
            {"margin", r.margin},
            {"certified", r.certified()},
            {"radius", r.radius},
            {"left", to_double(r.left())},
            {"right", to_double(r.right())},
            {"left_exact", rational_string(r.left())},
            {"right_exact", rational_string(r.right())},
            {"binding", std::string(binding_label(r.binding))}};
}

json square_json(const DyadicSquare& sq)
{
    return {{"k", sq.k}, {"r", sq.r}, {"s", sq.s}};
}

json tree_json(const CertTree& tree)
{
    json squares = json::array();
    for (const auto& rec : tree.squares) {
        json j = square_json(rec.square);
        j["status"] = std::string(status_name(rec.status));
        if (rec.corner_x) {
            j["corner"] = {rec.corner_x->to_binary(), rec.corner_y->to_binary()};
            j["value"] = to_json(rec.value);
            j["target_min"] = rec.target;
        }
        squares.push_back(std::move(j));
    }
    return {{"bound", std::string(bound_name(tree.bound))},
            {"N", tree.N},
            {"max_scale", tree.max_scale},
            {"corner_evaluations", tree.corner_evaluations},
            {"squares", std::move(squares)}};
}

std::string write_square_csv(const Session& s, const std::string& name, const CertTree& tree)
{
    return s.write_csv(name, "k,r,s,status", [&](std::ostream& os) {
        for (const auto& rec : tree.squares)
            os << rec.square.k << ',' << rec.square.r << ',' << rec.square.s << ',' << status_name(rec.status) << '\n';
    });
}

json area_json(const AreaReport& a)
{
    return {{"unit", "4^-max_scale"},
            {"certified", a.certified},
            {"bad", a.bad},
            {"skipped", a.skipped},
            {"region", a.region},
            {"consistent", a.consistent}};
}

// ---- commands ----

Outcome cmd_coeffs(std::uint64_t m, std::uint64_t n)
{
    if (n - m > (std::uint64_t{1} << 20))
        throw CapacityError("coeffs prints at most 2^20 signs");
    const auto c = coeff_range(Segment(m, n));
    Outcome o;
    std::string signs;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            signs += ' ';
        signs += c[i] > 0 ? '+' : '-';
    }
    o.result = {{"m", m}, {"n", n}, {"signs", signs}};
    o.text = signs;
    return o;
}

Outcome cmd_eval(const Session& s, std::uint64_t m, std::uint64_t n, const std::string& z_text, bool grid)
{
    const Segment seg(m, n);
    Outcome o;
    o.result = {{"m", m}, {"n", n}};
    if (!z_text.empty()) {
        const auto comma = z_text.find(',');
        if (comma == std::string::npos)
            throw PreconditionError("--z expects re,im");
        const cplx z{std::stod(z_text.substr(0, comma)), std::stod(z_text.substr(comma + 1))};
        const cplx v = eval_point(seg, z);
        o.result["point"] = {{"z", {z.real(), z.imag()}}, {"value", {v.real(), v.imag()}}, {"abs", std::abs(v)}};
        o.text = fixed(v.real(), 9) + " " + fixed(v.imag(), 9);
    }
    if (grid) {
        const std::size_t N = s.config().grid_size();
        const GridValues g = eval_grid(seg, N);
        std::size_t best = 0;
        for (std::size_t j = 1; j < g.values.size(); ++j)
            if (std::abs(g.values[j]) > std::abs(g.values[best]))
                best = j;
        const std::string file = s.write_csv("eval_grid.csv", "j,re,im,abs", [&](std::ostream& os) {
            for (std::size_t j = 0; j < g.values.size(); ++j)
                os << j << ',' << g.values[j].real() << ',' << g.values[j].imag() << ',' << std::abs(g.values[j]) << '\n';
        });
        o.result["grid"] = {{"N", N},
                            {"error_bound", g.error_bound},
                            {"max_abs", std::abs(g.values[best])},
                            {"argmax", best},
                            {"file", file}};
        if (!o.text.empty())
            o.text += '\n';
        o.text += "grid max " + fixed(std::abs(g.values[best]), 9) + " at j=" + std::to_string(best) + " -> " + file;
    }
    if (z_text.empty() && !grid)
        throw PreconditionError("eval needs --z or --grid");
    return o;
}

Outcome enclosure_outcome(const std::string& label, const Enclosure& e, json inputs)
{
    Outcome o;
    o.result = std::move(inputs);
    o.result[label] = to_json(e);
    o.result["mid"] = e.mid();
    o.text = fixed(e.lo, 9) + " " + fixed(e.hi, 9);
    return o;
}

Outcome cmd_certify_f(const Session& s, const std::string& table, std::optional<double> target,
                      const std::vector<std::string>& interval)
{
    std::vector<DyadicPoint> centers;
    DyadicPoint a;
    DyadicPoint b;
    double tgt = 0.0;
    if (table == "table1" || table == "table2") {
        const bool first = table == "table1";
        centers = first ? table1_centers() : table2_centers();
        a = first ? DyadicPoint(11, 3) : DyadicPoint(25, 4);
        b = first ? DyadicPoint(25, 4) : DyadicPoint(2, 0);
        tgt = first ? 7.92 : 9.0;
    } else {
        std::ifstream in(table);
        if (!in)
            throw PreconditionError("cannot read table: " + table);
        centers = read_center_table(in);
        if (!target || interval.empty())
            throw PreconditionError("a table file needs --target and --interval");
    }
    if (target)
        tgt = *target;
    if (!interval.empty()) {
        if (interval.size() != 2)
            throw PreconditionError("--interval expects two binary numbers");
        a = DyadicPoint::parse_binary(interval[0]);
        b = DyadicPoint::parse_binary(interval[1]);
    }
    std::sort(centers.begin(), centers.end());
    const CoverageReport rep = certify_cover(a, b, tgt, centers, s.config().grid_size());

    Outcome o;
    json records = json::array();
    for (const auto& r : rep.records)
        records.push_back(record_json(r));
    o.result = {{"table", table},
                {"interval", {a.to_binary(), b.to_binary()}},
                {"target", tgt},
                {"N", s.config().grid_size()},
                {"covered", rep.covered},
                {"records", records}};
    if (rep.first_gap)
        o.result["first_gap"] = {rational_string(rep.first_gap->first), rational_string(rep.first_gap->second)};
    o.result["log"] = s.write_json("certify_f.json", o.result);
    o.result["csv"] = s.write_csv("certify_f.csv", "center,f_lo,f_hi,left,right,binding", [&](std::ostream& os) {
        for (const auto& r : rep.records)
            os << r.center.to_binary() << ',' << r.f.lo << ',' << r.f.hi << ',' << to_double(r.left()) << ','
               << to_double(r.right()) << ',' << binding_label(r.binding) << '\n';
    });
    std::ostringstream text;
    for (const auto& r : rep.records)
        text << r.center.to_binary() << ' ' << fixed(r.f.mid()) << " [" << fixed(to_double(r.left())) << ", "
             << fixed(to_double(r.right())) << "] " << binding_label(r.binding) << '\n';
    text << (rep.covered ? "covered" : "NOT covered");
    o.text = text.str();
    o.ok = rep.covered;
    if (!o.ok)
        o.failure = "centers do not cover the interval";
    return o;
}

Outcome tree_outcome(const Session& s, const CertTree& tree, const std::string& stem, bool extra_ok, json extra)
{
    const AreaReport area = area_accounting(tree);
    Outcome o;
    o.result = std::move(extra);
    o.result["N"] = tree.N;
    o.result["max_scale"] = tree.max_scale;
    o.result["bad"] = tree.bad().size();
    o.result["subdivided"] = tree.subdivided().size();
    o.result["certified"] = tree.with_status(SquareStatus::Certified).size();
    o.result["corner_evaluations"] = tree.corner_evaluations;
    o.result["area"] = area_json(area);
    o.result["log"] = s.write_json(stem + ".json", tree_json(tree));
    o.result["csv"] = write_square_csv(s, stem + "_squares.csv", tree);
    o.ok = extra_ok && area.consistent;
    o.text = std::string(o.ok ? "ok" : "FAILED") + ": bad=" + std::to_string(tree.bad().size()) +
             " subdivided=" + std::to_string(tree.subdivided().size());
    return o;
}

Outcome cmd_certify_g(const Session& s)
{
    PrefixGridCache cache(s.config().grid_size());
    const CertTree tree = certify_g(cache, s.config().max_scale, s.config().threads);
    const ExclusionResult ex = check_exclusion_region(tree);
    json extra = {{"bad_inside_region_b", ex.bad_inside_region}, {"exclusion_ok", ex.ok}};
    json off = json::array();
    for (const auto& sq : ex.offending)
        off.push_back(square_json(sq));
    extra["offending"] = off;
    Outcome o = tree_outcome(s, tree, "certify_g", ex.ok, std::move(extra));
    if (!o.ok)
        o.failure = "bad squares inside region B outside [1,3/2]x[2,3]";
    return o;
}

Outcome cmd_certify_f2(const Session& s)
{
    PrefixGridCache cache(s.config().grid_size());
    const F2Result res = certify_f2(cache, s.config().max_scale, s.config().threads);
    Outcome o = tree_outcome(s, res.tree, "certify_f2", res.ok, json::object());
    if (!o.ok)
        o.failure = "bad squares outside the analytic region";
    return o;
}

Outcome cmd_extremal(std::optional<int> k)
{
    const int lo = k ? *k : 0;
    const int hi = k ? *k : 10;
    Outcome o;
    json rows = json::array();
    std::ostringstream text;
    for (int j = lo; j <= hi; ++j) {
        const ExtremalPair p = ExtremalPair::at(j);
        const ExtremalValues v = extremal_values(j);
        const SharpPrefix sp = sharp_prefix(j);
        rows.push_back({{"k", j},
                        {"m", p.m},
                        {"n", p.n},
                        {"at_one", v.at_one},
                        {"at_minus_one", v.at_minus_one},
                        {"ok", v.ok},
                        {"sharp_n", sp.n},
                        {"sharp_at_one", sp.at_one},
                        {"sharp_ok", sp.ok}});
        text << "k=" << j << " P(1)=" << v.at_one << " P(-1)=" << v.at_minus_one << " P_<" << sp.n << "(1)=" << sp.at_one
             << (v.ok && sp.ok ? "" : " MISMATCH") << '\n';
        o.ok = o.ok && v.ok && sp.ok;
    }
    o.result = {{"rows", rows}};
    o.text = text.str();
    if (!o.text.empty())
        o.text.pop_back();
    if (!o.ok)
        o.failure = "closed forms not matched";
    return o;
}

Outcome cmd_montgomery(const Session& s, int k)
{
    const MontgomeryReport r = montgomery_counterexample(k, s.config().grid_size());
    Outcome o;
    o.result = {{"k", k},
                {"point_ratio", r.point_ratio},
                {"limit", montgomery_limit()},
                {"exceeds_nine", r.exceeds_nine},
                {"fitted_constant", montgomery_fitted_constant(std::min(4, k), k)}};
    o.text = "ratio " + fixed(r.point_ratio);
    bool grid_exceeds = false;
    if (r.grid_sup_ratio) {
        o.result["grid_sup_ratio"] = to_json(*r.grid_sup_ratio);
        o.result["grid_argmax"] = r.grid_argmax;
        o.result["grid_N"] = r.N;
        grid_exceeds = r.grid_sup_ratio->lo > 9.0;
        o.text += " grid sup [" + fixed(r.grid_sup_ratio->lo) + ", " + fixed(r.grid_sup_ratio->hi) + "]";
    }
    o.ok = r.exceeds_nine || grid_exceeds;
    if (!o.ok)
        o.failure = "ratio does not exceed 9 at this k";
    return o;
}

Outcome cmd_dense(const Session& s, std::uint64_t m, std::uint64_t n, int kmax)
{
    const DenseReport r = dense_limit_empirical(m, n, kmax, s.config().grid_size());
    Outcome o;
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"k", row.k}, {"ratio", to_json(row.ratio)}});
    o.result = {{"m", m},
                {"n", n},
                {"kmax", kmax},
                {"target", to_json(r.target)},
                {"rows", rows},
                {"bounded", r.bounded},
                {"final_gap", r.final_gap},
                {"near_target", r.near_target}};
    o.result["csv"] = s.write_csv("dense.csv", "k,ratio_lo,ratio_hi,target_lo,target_hi", [&](std::ostream& os) {
        for (const auto& row : r.rows)
            os << row.k << ',' << row.ratio.lo << ',' << row.ratio.hi << ',' << r.target.lo << ',' << r.target.hi << '\n';
    });
    o.ok = r.bounded;
    o.text = "target " + fixed(r.target.mid()) + " last " + fixed(r.rows.back().ratio.mid()) + " gap " + fixed(r.final_gap, 4);
    if (!o.ok)
        o.failure = "a ratio exceeds the L-norm target";
    return o;
}

Outcome cmd_figures(const Session& s, int fig1_scale)
{
    if (fig1_scale < 0 || fig1_scale > 14)
        throw PreconditionError("--fig1-scale must be in 0..14");
    const std::size_t N = s.config().grid_size();
    const std::uint64_t lo = std::uint64_t{1} << fig1_scale;
    std::vector<Enclosure> values(lo + 1);
    for (std::uint64_t i = 0; i <= lo; ++i)
        values[i] = f_dyadic(DyadicPoint(lo + i, fig1_scale), N);
    Outcome o;
    o.result["figure1"] = s.write_csv("figure1.csv", "x,f_lo,f_hi", [&](std::ostream& os) {
        for (std::uint64_t i = 0; i <= lo; ++i)
            os << DyadicPoint(lo + i, fig1_scale).to_double() << ',' << values[i].lo << ',' << values[i].hi << '\n';
    });
    PrefixGridCache cache(N);
    const CertTree g = certify_g(cache, s.config().max_scale, s.config().threads);
    const F2Result f2 = certify_f2(cache, s.config().max_scale, s.config().threads);
    o.result["figure2_g"] = write_square_csv(s, "figure2_g.csv", g);
    o.result["figure2_f2"] = write_square_csv(s, "figure2_f2.csv", f2.tree);
    const bool g_ok = check_exclusion_region(g).ok && area_accounting(g).consistent;
    const bool f2_ok = f2.ok && area_accounting(f2.tree).consistent;
    o.result["g_ok"] = g_ok;
    o.result["f2_ok"] = f2_ok;
    o.ok = g_ok && f2_ok;
    o.text = "wrote figure1.csv, figure2_g.csv, figure2_f2.csv";
    if (!o.ok)
        o.failure = "a two-dimensional certification failed";
    return o;
}

Outcome cmd_smallk(const Session& s, const std::string& kind)
{
    Outcome o;
    std::ostringstream text;
    for (const auto& [name, which] : {std::pair{"midrange", SmallKKind::Midrange}, std::pair{"upper", SmallKKind::Upper}}) {
        if (kind != "both" && kind != name)
            continue;
        const SmallKReport rep = check_smallk(which, s.config().grid_size(), s.config().threads);
        json fallback = json::array();
        for (const auto& r : rep.records)
            if (!r.l_ok) {
                json j = {{"k", r.k}, {"n", r.n}, {"bound", r.bound}, {"l_sq", to_json(r.l_sq)}, {"sup_ok", r.sup_ok}};
                if (r.sup_sq)
                    j["sup_sq"] = to_json(*r.sup_sq);
                fallback.push_back(j);
            }
        o.result[name] = {{"pairs", rep.records.size()}, {"ok", rep.ok}, {"l_all", rep.l_all}, {"l_failures", fallback}};
        text << name << ": " << rep.records.size() << " pairs, sup " << (rep.ok ? "ok" : "FAILED") << ", L "
             << (rep.l_all ? "ok" : std::to_string(fallback.size()) + " strict failures") << '\n';
        o.ok = o.ok && rep.ok;
    }
    if (o.result.empty())
        throw PreconditionError("--kind must be midrange, upper or both");
    o.text = text.str();
    o.text.pop_back();
    if (!o.ok)
        o.failure = "small-k check failed";
    return o;
}

Outcome cmd_brute(const Session& s, std::uint64_t n_max)
{
    const BruteOneDimReport r = brute_onedim(n_max, s.config().grid_size(), s.config().threads);
    Outcome o;
    json sharp = json::array();
    for (const auto& [n, ratio] : r.sharp_ratios)
        sharp.push_back({{"n", n}, {"ratio", ratio}});
    o.result = {{"n_max", n_max},
                {"N", r.N},
                {"worst_ratio", r.worst_ratio},
                {"worst_n", r.worst_n},
                {"refined_cases", r.refined_cases},
                {"sharp", sharp},
                {"failures", r.failures}};
    o.ok = r.ok;
    o.text = std::string(r.ok ? "ok" : "FAILED") + " worst ratio " + fixed(r.worst_ratio) + " at n=" + std::to_string(r.worst_n);
    if (!o.ok)
        o.failure = "sup-norm bound not certified for some n";
    return o;
}

Outcome cmd_brute_twodim(const Session& s, std::uint64_t n_max)
{
    // Smallest valid grid; the global grid size is not used here.
    std::size_t N = 16;
    while (N < 4 * n_max)
        N *= 2;
    const BruteTwoDimReport r = brute_twodim(n_max, N, s.config().threads);
    Outcome o;
    json failures = json::array();
    for (const auto& [m, n] : r.failures)
        failures.push_back({m, n});
    o.result = {{"n_max", n_max},
                {"N", r.N},
                {"pairs", r.pairs},
                {"worst_ratio", r.worst_ratio},
                {"worst", {r.worst.first, r.worst.second}},
                {"failures", failures}};
    o.ok = r.ok;
    o.text = std::string(r.ok ? "ok" : "FAILED") + " " + std::to_string(r.pairs) + " pairs, worst ratio " +
             fixed(r.worst_ratio) + " at [" + std::to_string(r.worst.first) + "," + std::to_string(r.worst.second) + ")";
    if (!o.ok)
        o.failure = "L-norm bound violated";
    return o;
}

Outcome cmd_sphere(const Session& s, int k, std::size_t count)
{
    const SpherePoint target = random_sphere_point(s.config().seed);
    const SphereReport r = sphere_sampler(k, cplx{1.0, 0.0}, target, count, s.config().seed + 1);
    Outcome o;
    o.result = {{"k", k},
                {"count", count},
                {"target", {target[0].real(), target[0].imag(), target[1].real(), target[1].imag()}},
                {"min_distance", r.min_distance},
                {"max_norm_error", r.max_norm_error}};
    o.ok = r.max_norm_error <= 1e-9;
    o.text = "min distance " + fixed(r.min_distance, 4);
    if (!o.ok)
        o.failure = "sampled pairs left the unit sphere";
    return o;
}

Outcome cmd_reflection(const Session& s, int k, std::size_t samples)
{
    const ReflectionReport r = reflection_reduction_check(k, samples, s.config().grid_size(), s.config().seed);
    Outcome o;
    o.result = {{"k", k}, {"checked", r.checked}, {"ok", r.ok}};
    if (r.first_failure)
        o.result["first_failure"] = {r.first_failure->first, r.first_failure->second};
    o.ok = r.ok;
    o.text = std::string(r.ok ? "ok" : "FAILED") + " (" + std::to_string(r.checked) + " pairs)";
    if (!o.ok)
        o.failure = "reflected L-norms disagree";
    return o;
}

int emit_error(std::ostream& out, const std::string& command, const std::string& type, const std::string& message)
{
    json doc = {{"schema_version", kSchemaVersion},
                {"command", command},
                {"ok", false},
                {"error", {{"type", type}, {"message", message}}}};
    out << doc.dump(2) << '\n';
    return 2;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    std::string format = "json";

    CLI::App app{"Rudin-Shapiro norm bounds: evaluation, enclosures and certifications", "rscert"};
    app.require_subcommand(1);
    app.add_option("--grid-log2", cfg.grid_log2, "log2 of the evaluation grid size")->check(CLI::Range(4, 26));
    app.add_option("--max-scale", cfg.max_scale, "deepest square scale in 2-D certifications")->check(CLI::Range(1, 12));
    app.add_option("--out-dir", cfg.out_dir, "directory for output files")->envname("RSCERT_OUT_DIR");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--threads", cfg.threads, "worker threads (0 = auto)")->envname("RSCERT_THREADS");
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

    std::uint64_t m = 0;
    std::uint64_t n = 0;
    auto* coeffs = app.add_subcommand("coeffs", "print coefficients a_m .. a_{n-1}");
    coeffs->add_option("m", m)->required();
    coeffs->add_option("n", n)->required();

    std::string z_text;
    bool grid = false;
    auto* eval = app.add_subcommand("eval", "evaluate P_[m,n) at a point or on the grid");
    eval->add_option("m", m)->required();
    eval->add_option("n", n)->required();
    eval->add_option("--z", z_text, "point as re,im");
    eval->add_flag("--grid", grid, "evaluate on the full grid and write a CSV");

    std::string x_text;
    std::string y_text;
    auto* f = app.add_subcommand("f", "enclosure of f(x), x a binary dyadic such as 1.011");
    f->add_option("x", x_text)->required();
    auto* f2 = app.add_subcommand("f2", "enclosure of f(x, y)");
    f2->add_option("x", x_text)->required();
    f2->add_option("y", y_text)->required();
    auto* g = app.add_subcommand("g", "enclosure of g(x, y)");
    g->add_option("x", x_text)->required();
    g->add_option("y", y_text)->required();

    std::string table = "table1";
    std::optional<double> target;
    std::vector<std::string> interval;
    auto* certify_f = app.add_subcommand("certify-f", "certify f <= target on an interval from a center table");
    certify_f->add_option("--table", table, "table1, table2 or a file of binary centers");
    certify_f->add_option("--target", target, "bound to certify");
    certify_f->add_option("--interval", interval, "interval endpoints as binary dyadics")->expected(2);

    auto* certify_g_cmd = app.add_subcommand("certify-g", "certify g <= min{10(x+y),40} over [0,4]^2");
    auto* certify_f2_cmd = app.add_subcommand("certify-f2", "certify f(x,y) <= 10(y-x) off the analytic region");

    std::optional<int> k_opt;
    int k = 12;
    auto* extremal = app.add_subcommand("extremal", "exact values of the extremal tails at z = +-1");
    extremal->add_option("--k", k_opt)->check(CLI::Range(0, 20));
    auto* montgomery = app.add_subcommand("montgomery", "ratio at exp(3 pi i/4) for the extremal tails");
    montgomery->add_option("--k", k, "")->check(CLI::Range(0, 14));

    std::uint64_t dm = 5;
    std::uint64_t dn = 8;
    int kmax = 12;
    auto* dense = app.add_subcommand("dense", "sup-norm ratios of P_[2^k m, 2^k n) against ||P_[m,n)||_L");
    dense->add_option("--m", dm);
    dense->add_option("--n", dn);
    dense->add_option("--kmax", kmax)->check(CLI::Range(0, 20));

    int fig1_scale = 8;
    auto* figures = app.add_subcommand("figures", "write the curve and square CSVs");
    figures->add_option("--fig1-scale", fig1_scale, "dyadic scale of the f(x) samples on [1,2]");

    std::string kind = "both";
    auto* smallk = app.add_subcommand("smallk", "direct checks for small k");
    smallk->add_option("--kind", kind)->check(CLI::IsMember({"midrange", "upper", "both"}));

    std::uint64_t n_max = 4096;
    auto* brute = app.add_subcommand("brute-onedim", "sup-norm bound for every prefix up to n-max");
    brute->add_option("--n-max", n_max)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 16));

    std::uint64_t n_max2 = 512;
    auto* brute2 = app.add_subcommand("brute-twodim", "L-norm bound for every tail [m,n) with n <= n-max");
    brute2->add_option("--n-max", n_max2)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{2048}));

    std::size_t count = 4096;
    int sphere_k = 12;
    auto* sphere = app.add_subcommand("sphere", "closest normalized (P_k, Q_k) pair to a random target");
    sphere->add_option("--k", sphere_k)->check(CLI::Range(0, 24));
    sphere->add_option("--count", count);

    int refl_k = 3;
    std::size_t samples = 1000;
    auto* reflection = app.add_subcommand("reflection", "check the reflection identity for L-norms");
    reflection->add_option("--k", refl_k)->check(CLI::Range(0, 16));
    reflection->add_option("--samples", samples);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return emit_error(out, "", "invalid_arguments", e.what());
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        const Session s(cfg);
        const std::size_t N = cfg.grid_size();
        Outcome o;
        if (sub == coeffs)
            o = cmd_coeffs(m, n);
        else if (sub == eval)
            o = cmd_eval(s, m, n, z_text, grid);
        else if (sub == f) {
            const DyadicPoint x = DyadicPoint::parse_binary(x_text);
            o = enclosure_outcome("f", f_dyadic(x, N), {{"x", x.to_binary()}, {"x_decimal", x.to_double()}, {"N", N}});
        } else if (sub == f2) {
            const DyadicPoint x = DyadicPoint::parse_binary(x_text);
            const DyadicPoint y = DyadicPoint::parse_binary(y_text);
            o = enclosure_outcome("f2", f2_dyadic(x, y, N), {{"x", x.to_binary()}, {"y", y.to_binary()}, {"N", N}});
        } else if (sub == g) {
            const DyadicPoint x = DyadicPoint::parse_binary(x_text);
            const DyadicPoint y = DyadicPoint::parse_binary(y_text);
            o = enclosure_outcome("g", g_dyadic(x, y, N), {{"x", x.to_binary()}, {"y", y.to_binary()}, {"N", N}});
        } else if (sub == certify_f)
            o = cmd_certify_f(s, table, target, interval);
        else if (sub == certify_g_cmd)
            o = cmd_certify_g(s);
        else if (sub == certify_f2_cmd)
            o = cmd_certify_f2(s);
        else if (sub == extremal)
            o = cmd_extremal(k_opt);
        else if (sub == montgomery)
            o = cmd_montgomery(s, k);
        else if (sub == dense)
            o = cmd_dense(s, dm, dn, kmax);
        else if (sub == figures)
            o = cmd_figures(s, fig1_scale);
        else if (sub == smallk)
            o = cmd_smallk(s, kind);
        else if (sub == brute)
            o = cmd_brute(s, n_max);
        else if (sub == brute2)
            o = cmd_brute_twodim(s, n_max2);
        else if (sub == sphere)
            o = cmd_sphere(s, sphere_k, count);
        else if (sub == reflection)
            o = cmd_reflection(s, refl_k, samples);

        if (format == "text") {
            out << o.text << '\n';
        } else {
            json doc = {{"schema_version", kSchemaVersion},
                        {"command", command},
                        {"config", config_json(cfg)},
                        {"timestamp", utc_timestamp()},
                        {"result", o.result},
                        {"ok", o.ok}};
            if (!o.ok)
                doc["error"] = {{"type", "check_failed"}, {"message", o.failure}};
            out << doc.dump(2) << '\n';
        }
        if (!o.ok)
            err << command << ": " << o.failure << '\n';
        return o.ok ? 0 : 1;
    } catch (const PreconditionError& e) {
        return emit_error(out, command, "precondition", e.what());
    } catch (const DomainError& e) {
        return emit_error(out, command, "domain", e.what());
    } catch (const CapacityError& e) {
        return emit_error(out, command, "capacity", e.what());
    } catch (const std::exception& e) {
        return emit_error(out, command, "error", e.what());
    }
}

} // namespace rscert

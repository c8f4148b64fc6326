// Acceptance suite: one PASS/FAIL line per criterion. With an argument N only criterion N
// runs; the exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cslab/harness.hpp"
#include "cslab/intrinsic.hpp"
#include "cslab/verify.hpp"

namespace {

using namespace cslab;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

ExperimentConfig make_config(const std::string& text) { return config_from(parse_key_values(text)); }

// Runs one config per seed, seeds 1..n.
std::vector<RunResult> run_seeds(const std::string& base, int n, const RunOptions& ro = {})
{
    std::vector<RunResult> out;
    for (int s = 1; s <= n; ++s) out.push_back(run(make_config(base + "instance.seed = " + std::to_string(s) + "\n"), ro));
    return out;
}

double mean_regret(const std::vector<RunResult>& rs)
{
    double s = 0.0;
    for (const auto& r : rs) s += r.summary.total_regret;
    return s / static_cast<double>(rs.size());
}

bool all_ok(const std::vector<RunResult>& rs, std::string& why)
{
    for (const auto& r : rs)
        if (!r.ok()) {
            why = r.summary.name + " seed " + std::to_string(r.summary.seed) + ": " + r.summary.status;
            return false;
        }
    return true;
}

long violations_of(const std::vector<RunResult>& rs, const std::string& check)
{
    long n = 0;
    for (const auto& r : rs) {
        auto it = r.summary.checks.find(check);
        if (it != r.summary.checks.end()) n += it->second.violations;
    }
    return n;
}

long checks_of(const std::vector<RunResult>& rs, const std::string& check)
{
    long n = 0;
    for (const auto& r : rs) {
        auto it = r.summary.checks.find(check);
        if (it != r.summary.checks.end()) n += it->second.count;
    }
    return n;
}

std::string game(const std::string& policy, const std::string& loss, const std::string& kind, int d, long T,
                 bool audit)
{
    std::ostringstream os;
    os << "policy = " << policy << "\nloss = " << loss << "\ninstance.kind = " << kind << "\ninstance.d = " << d
       << "\ninstance.T = " << T << "\naudit = " << (audit ? "true" : "false") << "\ntime_limit_s = 3600\n";
    return os.str();
}

// Box intrinsic volumes against subset-product sums and Pascal's triangle.
Outcome box_volumes()
{
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int d = 2 + i % 5;
        Vec lo(d), hi(d);
        std::vector<double> side(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            lo(k) = 2.0 * rng.uniform() - 1.0;
            side[k] = 0.05 + 3.0 * rng.uniform();
            hi(k) = lo(k) + side[k];
        }
        std::vector<double> e(static_cast<std::size_t>(d + 1), 0.0);
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            double prod = 1.0;
            for (int k = 0; k < d; ++k)
                if (mask & (1u << k)) prod *= side[k];
            e[static_cast<std::size_t>(__builtin_popcount(mask))] += prod;
        }
        const auto V = intrinsic_volumes(Polytope::box(lo, hi), 0, rng);
        for (int j = 0; j <= d; ++j) worst = std::max(worst, std::abs(V[j].value - e[j]) / e[j]);
    }
    for (int d = 2; d <= 6; ++d) {
        std::vector<double> row{1.0};
        for (int n = 1; n <= d; ++n) {
            std::vector<double> next(static_cast<std::size_t>(n + 1), 1.0);
            for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
            row = next;
        }
        const auto V = intrinsic_volumes(Polytope::unit_cube(d), 0, rng);
        for (int j = 0; j <= d; ++j) worst = std::max(worst, std::abs(V[j].value - row[j]) / row[j]);
    }
    return {worst <= 1e-12, fmt("worst relative error %.3g <= 1e-12 over 50 boxes and 5 unit cubes", worst)};
}

// Monte-Carlo estimates on the unit cube, d = 3 and 4, budget 10^4, 20 trials.
Outcome mc_accuracy()
{
    double worst_rel = 0.0;
    int worst_cover = 20;
    for (int d : {3, 4}) {
        std::vector<int> covered(static_cast<std::size_t>(d + 1), 0);
        for (int trial = 0; trial < 20; ++trial) {
            const IntrinsicEstimator est(d, 10000, Rng::derive(2, static_cast<std::uint64_t>(100 * d + trial)));
            for (int j = 0; j <= d; ++j) {
                const IntrinsicVolumeEstimate e = est.monte_carlo(Polytope::unit_cube(d), j);
                const double truth = binomial(d, j);
                const double err = std::abs(e.value - truth);
                worst_rel = std::max(worst_rel, err / truth);
                // The rounding allowance only matters for j = 0 and j = d, whose spread is zero.
                if (err <= e.half_width + 1e-12 * truth) ++covered[j];
            }
        }
        for (int j = 0; j <= d; ++j) worst_cover = std::min(worst_cover, covered[j]);
    }
    return {worst_rel <= 0.05 && worst_cover >= 18,
            fmt("worst relative error %.4f <= 0.05; lowest CI coverage %.0f/20 >= 18/20", worst_rel, worst_cover)};
}

Outcome steiner()
{
    const VerifyReport rep = verify("steiner", 3, 100);
    return {rep.ok(), fmt("%.0f of %.0f Steiner cases within 3 combined standard errors",
                          double(rep.cases.size() - rep.failures()), double(rep.cases.size()))};
}

Outcome sym2d_ceiling()
{
    const double bound = 8.0 + 2.0 * std::sqrt(2.0);
    const auto rs = run_seeds(game("sym2d", "symmetric", "uniform-random-contexts", 2, 10000, false), 100);
    std::string why;
    if (!all_ok(rs, why)) return {false, why};
    double worst = 0.0;
    for (const auto& r : rs) worst = std::max(worst, r.summary.total_regret);
    return {worst <= bound + 1e-9, fmt("max total regret %.4f <= %.4f over 100 instances", worst, bound)};
}

Outcome kl_growth()
{
    const long Ts[] = {1000, 10000, 100000, 1000000};
    double kl[4], mid[4];
    std::string why;
    for (int i = 0; i < 4; ++i) {
        for (const char* policy : {"kl1d", "midpoint1d"}) {
            const auto rs = run_seeds(game(policy, "pricing", "uniform-orthant-contexts", 1, Ts[i], false), 50);
            if (!all_ok(rs, why)) return {false, why};
            (std::string(policy) == "kl1d" ? kl : mid)[i] = mean_regret(rs);
        }
    }
    const double rk = kl[3] / kl[0], rm = mid[3] / mid[0];
    return {rk <= 2.5 && rm >= 1.8,
            fmt("kl1d mean regret %.3f, %.3f, %.3f, %.3f", kl[0], kl[1], kl[2], kl[3]) +
                fmt(" (growth %.3f <= 2.5); midpoint %.3f to %.3f (growth %.3f >= 1.8)", rk, mid[0], mid[3], rm)};
}

Outcome symsearch_flat()
{
    const auto a = run_seeds(game("symsearch", "symmetric", "uniform-random-contexts", 3, 1000, true), 20);
    const auto b = run_seeds(game("symsearch", "symmetric", "uniform-random-contexts", 3, 10000, true), 20);
    std::string why;
    if (!all_ok(a, why) || !all_ok(b, why)) return {false, why};
    std::vector<RunResult> all = a;
    all.insert(all.end(), b.begin(), b.end());
    const long pot = violations_of(all, "potential-nonincreasing");
    const long shrink = violations_of(all, "split-shrink");
    const double growth = mean_regret(b) / mean_regret(a) - 1.0;
    return {pot == 0 && shrink == 0 && growth < 0.10 && checks_of(all, "split-shrink") > 0,
            fmt("potential violations %.0f, shrink violations %.0f (of %.0f); mean regret growth %.4f < 0.10",
                double(pot), double(shrink), double(checks_of(all, "split-shrink")), growth)};
}

Outcome pricesearch_suite(const std::string& loss_lines, const std::string& label, bool audit_invariants)
{
    const std::string base10k = game("pricesearch", "one-sided", "uniform-orthant-contexts", 3, 10000, audit_invariants);
    auto with_loss = [&](std::string g) {
        g.replace(g.find("loss = one-sided\n"), 17, loss_lines);
        return g;
    };
    const auto a = run_seeds(with_loss(game("pricesearch", "one-sided", "uniform-orthant-contexts", 3, 1000, false)), 10);
    const auto b = run_seeds(with_loss(base10k), 10);
    std::string why;
    if (!all_ok(a, why) || !all_ok(b, why)) return {false, why};
    const double growth = mean_regret(b) / mean_regret(a) - 1.0;
    long bad = 0;
    std::string counts;
    for (const char* c : {"phi-ladder", "width<=2l_kJ", "bucket-advance"}) {
        bad += violations_of(b, c);
        counts += std::string(" ") + c + " " + std::to_string(violations_of(b, c)) + "/" +
                  std::to_string(checks_of(b, c));
    }
    const bool invariants = !audit_invariants || (bad == 0 && checks_of(b, "bucket-advance") > 0);
    return {invariants && growth <= 0.5,
            label + fmt(" mean regret %.3f to %.3f, growth %.4f <= 0.5", mean_regret(a), mean_regret(b), growth) +
                (audit_invariants ? ";" + counts : "")};
}

Outcome halving_splits()
{
    std::vector<RunResult> wh = run_seeds(game("widthhalf", "symmetric", "uniform-random-contexts", 3, 500, true), 10);
    std::vector<RunResult> vh = run_seeds(game("volhalf", "symmetric", "uniform-random-contexts", 3, 500, true), 10);
    std::string why;
    if (!all_ok(wh, why) || !all_ok(vh, why)) return {false, why};
    const long w = violations_of(wh, "width-split-minus") + violations_of(wh, "width-split-plus");
    const long v = violations_of(vh, "volume-split-width-plus") + violations_of(vh, "volume-split-width-minus");
    const long nw = checks_of(wh, "width-split-minus") + checks_of(wh, "width-split-plus");
    const long nv = checks_of(vh, "volume-split-width-plus") + checks_of(vh, "volume-split-width-minus");
    return {w == 0 && v == 0 && nw > 0 && nv > 0,
            fmt("width-halving violations %.0f of %.0f; volume-halving violations %.0f of %.0f", double(w), double(nw),
                double(v), double(nv))};
}

Outcome lower_bound_instance()
{
    RunOptions ro;
    ro.keep_rounds = true;
    const std::string base = game("widthhalf", "symmetric", "subset-instance", 16, 200, false) + "instance.seed = 1\n";
    const RunResult wh = run(make_config(base), ro);
    if (!wh.ok()) return {false, "widthhalf: " + wh.summary.status};
    long big = 0;
    for (const auto& r : wh.rounds) big += r.loss >= 0.25;
    std::string b2 = base;
    b2.replace(b2.find("widthhalf"), 9, "symsearch");
    const RunResult ss = run(make_config(b2));
    const std::string head = fmt("widthhalf: %.0f rounds with loss >= 0.25 (need 100), total %.3f", double(big),
                                 wh.summary.total_regret);
    if (!ss.ok()) return {false, head + "; symsearch: " + ss.summary.status};
    const double ratio = ss.summary.total_regret / wh.summary.total_regret;
    return {big >= 100 && ratio <= 0.25, head + fmt("; symsearch share %.4f <= 0.25", ratio)};
}

Outcome general_losses()
{
    const auto a = run_seeds(game("symsearch", "power", "uniform-random-contexts", 3, 1000, false) + "loss.beta = 2\n", 20);
    const auto b = run_seeds(game("symsearch", "power", "uniform-random-contexts", 3, 10000, false) + "loss.beta = 2\n", 20);
    std::string why;
    if (!all_ok(a, why) || !all_ok(b, why)) return {false, why};
    const double growth = mean_regret(b) / mean_regret(a) - 1.0;
    const Outcome one_sided = pricesearch_suite("loss = one-sided\nloss.beta = 1\n", "one-sided beta 1:", false);
    return {growth < 0.10 && one_sided.pass,
            fmt("power beta 2 symsearch mean regret growth %.4f < 0.10; ", growth) + one_sided.detail};
}

Outcome oracle_suites()
{
    std::string detail;
    bool pass = true;
    for (const char* suite : {"isoperimetric", "cone", "cylinder"}) {
        const VerifyReport rep = verify(suite, 11, 100);
        pass = pass && rep.ok() && !rep.cases.empty();
        detail += std::string(detail.empty() ? "" : ", ") + suite + " " + std::to_string(rep.failures()) + " failures of " +
                  std::to_string(rep.cases.size());
    }
    return {pass, detail};
}

struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> body;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, 5, box_volumes},
        {2, 120, mc_accuracy},
        {3, 300, steiner},
        {4, 120, sym2d_ceiling},
        {5, 180, kl_growth},
        {6, 1200, symsearch_flat},
        {7, 1800, [] { return pricesearch_suite("loss = pricing\n", "pricing:", true); }},
        {8, 600, halving_splits},
        {9, 900, lower_bound_instance},
        {10, 1200, general_losses},
        {11, 600, oracle_suites},
    };
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failed = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("criterion %d: %s | %s | %.1f s (limit %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs, c.limit_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    return failed;
}

// Copyright 2026 The bmseq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "capi.hpp"

namespace cli {

namespace {

const char* verdict_name(bm_verdict v)
{
    switch (v) {
    case BM_VERDICT_EXACT: return "exact";
    case BM_VERDICT_TRUNCATED: return "truncated";
    case BM_VERDICT_DIVERGENT: return "divergent";
    }
    return "unknown";
}

ojson norm_json(const bm_norm_result& r)
{
    ojson out;
    out["value"] = num(r.value);
    out["remainder_bound"] = num(r.remainder_bound);
    out["verdict"] = verdict_name(r.verdict);
    return out;
}

SeqPtr load_seq(const std::string& path)
{
    if (path.empty()) throw Exit(kExitBadInput, "an input sequence file is required");
    return make<SeqPtr>([&](bm_seq** out) { return bm_seq_load(path.c_str(), out); });
}

ojson seq_value(const bm_seq* x)
{
    return ojson::parse(seq_json(x));
}

void require_positive(double v, const char* name)
{
    if (!(v > 0.0)) throw Exit(kExitBadInput, std::string(name) + " must be positive");
}

bm_norm_result dyadic_result(const bm_seq* x, const bm_params& P)
{
    bm_norm_result r{};
    check(std::isinf(P.q) ? bm_q_infty_norm(x, &P, &r) : bm_dyadic_norm(x, &P, &r));
    return r;
}

SeqPtr sub(const bm_seq* a, const bm_seq* b)
{
    return make<SeqPtr>([&](bm_seq** out) { return bm_seq_sub(a, b, out); });
}

std::vector<std::int64_t> powers_of_two(int lo, int hi)
{
    std::vector<std::int64_t> out;
    for (int e = lo; e <= hi; ++e) out.push_back(std::int64_t{1} << e);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_norm(const Options& o, const NormConfig& c, std::ostream& out)
{
    const bm_params P = parse_params(o);
    require_positive(o.tol, "--tol");
    const SeqPtr x = load_seq(c.input);

    const bm_norm_result dy = dyadic_result(x.get(), P);
    bm_norm_result ce{}, dl{};
    check(bm_centered_norm(x.get(), &P, o.tol, &ce));
    check(bm_dyadic_length_norm(x.get(), &P, o.tol, o.include_singletons, &dl));

    const struct {
        const char* name;
        const bm_norm_result& r;
    } results[] = {{"dyadic", dy}, {"centered", ce}, {"dyadic-length", dl}};

    if (o.scalar) {
        for (const auto& e : results) {
            if (c.norm != e.name) continue;
            if (e.r.verdict == BM_VERDICT_DIVERGENT) {
                throw Exit(kExitDivergent, std::string(e.name) + " norm diverges for these parameters");
            }
            if (e.r.verdict == BM_VERDICT_TRUNCATED && e.r.remainder_bound > o.tol) {
                throw Exit(kExitToleranceUnmet, std::string(e.name) + " norm remainder above tol");
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", e.r.value);
            out << buf << "\n";
            return kExitOk;
        }
        throw Exit(kExitBadInput, "unknown norm '" + c.norm + "'");
    }

    const double l1 = lp(x.get(), 1.0);
    const double lr = lp(x.get(), P.r);
    const SeqPtr e0 = unit(0);
    const double K = dyadic(e0.get(), P);

    ojson report = report_header("norm", P, o);
    report["tolerances"] = {{"tol", o.tol}};
    report["include_singletons"] = o.include_singletons;
    report["input"] = c.input;
    report["support_size"] = bm_seq_size(x.get());
    report["norms"] = {{"dyadic", norm_json(dy)}, {"centered", norm_json(ce)}, {"dyadic_length", norm_json(dl)}};
    report["lp_norms"] = {{"l1", l1}, {"lr", lr}};
    report["embedding_chain"] = {{"K", K},
                                 {"lr_lower_slack", dy.value - lr},
                                 {"K_l1_upper_slack", K * l1 - dy.value}};
    if (std::isinf(P.q)) {
        double lo = 0.0, hi = 0.0;
        check(bm_q_infty_constants(&P, &lo, &hi));
        report["q_infty_sandwich"] = {{"lower_constant", lo},
                                      {"upper_constant", hi},
                                      {"lower_slack", dy.value - lo * lr},
                                      {"upper_slack", hi * lr - dy.value}};
    }

    Table t{{"norm", "value", "remainder_bound", "verdict"}, {}};
    for (const auto& e : results) t.add({e.name, num(e.r.value), num(e.r.remainder_bound), verdict_name(e.r.verdict)});
    emit(report, &t, o, out);

    for (const auto& e : results) {
        if (e.r.verdict == BM_VERDICT_TRUNCATED && e.r.remainder_bound > o.tol) return kExitToleranceUnmet;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int run_renorm_study(const Options& o, const RenormConfig& c, std::ostream& out)
{
    if (c.corpus_size < 0 || c.max_support < 1) throw Exit(kExitBadInput, "bad corpus settings");
    require_positive(o.tol, "--tol");
    const std::string r_text = o.r_set ? o.r : o.p;
    const bm_params base = parse_params(o.p, c.q_grid.empty() ? "inf" : c.q_grid.front(), r_text);

    // Corpus: random supports in [-64, 64), values in [-10, 10].
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    std::vector<SeqPtr> corpus;
    for (int i = 0; i < c.corpus_size; ++i) {
        const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(c.max_support));
        std::set<std::int64_t> idx;
        while (static_cast<int>(idx.size()) < n) idx.insert(static_cast<std::int64_t>(rng() % 128) - 64);
        std::vector<std::int64_t> I(idx.begin(), idx.end());
        std::vector<double> V;
        for (std::size_t k = 0; k < I.size(); ++k) V.push_back(value(rng));
        corpus.push_back(seq_from(I, V));
    }

    ojson report = report_header("renorm-study", base, o);
    report["tolerances"] = {{"tol", o.tol}, {"identity_tol", 1e-12}};
    report["corpus"] = {{"size", c.corpus_size}, {"max_support", c.max_support}, {"index_window", {-64, 63}}};
    ojson summaries = ojson::array();
    Table t{{"q", "index", "support", "dyadic_ratio", "centered_verdict", "centered_ratio", "l1_chain_ok"}, {}};
    bool failed = false;

    for (const auto& q_text : c.q_grid) {
        const bm_params P = parse_params(o.p, q_text, r_text);
        const bool identity = P.r == P.p && std::isfinite(P.q);
        double C = NAN;
        if (std::isfinite(P.q)) check(bm_c_pq_constant(&P, &C));
        const SeqPtr e0 = unit(0);
        const double K = dyadic(e0.get(), P);
        double max_err = 0.0, cmin = INFINITY, cmax = -INFINITY;
        bool chain_ok = true;
        int divergent = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const bm_seq* x = corpus[i].get();
            const double d = dyadic(x, P);
            const double lpn = lp(x, P.p);
            const double l1 = lp(x, 1.0);
            const double ratio = identity ? d / (C * lpn) : NAN;
            if (identity) max_err = std::max(max_err, std::fabs(ratio - 1.0));
            const bool ok = lp(x, P.r) <= d + 1e-10 && d <= K * l1 + 1e-10;
            chain_ok = chain_ok && ok;
            bm_norm_result ce{};
            check(bm_centered_norm(x, &P, o.tol, &ce));
            double cratio = NAN;
            if (ce.verdict == BM_VERDICT_DIVERGENT) {
                ++divergent;
            } else {
                cratio = ce.value / lpn;
                cmin = std::min(cmin, cratio);
                cmax = std::max(cmax, cratio);
            }
            t.add({q_text, static_cast<int>(i), bm_seq_size(x), num(ratio), verdict_name(ce.verdict), num(cratio), ok});
        }
        const bool identity_ok = !identity || max_err <= 1e-12;
        failed = failed || !identity_ok || !chain_ok;
        ojson s;
        s["q"] = params_json(P)["q"];
        s["r"] = P.r;
        s["c_pq"] = num(C);
        s["K"] = K;
        s["identity_checked"] = identity;
        s["max_identity_error"] = identity ? num(max_err) : ojson(nullptr);
        s["identity_holds"] = identity_ok;
        s["chain_holds"] = chain_ok;
        s["centered_divergent_count"] = divergent;
        s["centered_ratio_min"] = num(cmin);
        s["centered_ratio_max"] = num(cmax);
        s["centered_ratio_spread"] = corpus.size() > static_cast<std::size_t>(divergent) ? num(cmax - cmin) : ojson(nullptr);
        summaries.push_back(std::move(s));
    }
    report["summary"] = std::move(summaries);
    report["rows"] = t.to_json();
    emit(report, &t, o, out);
    return failed ? kExitToleranceUnmet : kExitOk;
}

// ---------------------------------------------------------------------------

namespace {

ojson harmonic_study(const Options& o, const CounterexampleConfig& c, Table& t, bool& failed)
{
    const bm_params P = parse_params(o.p_set ? o.p : "2", o.q_set ? o.q : "4", o.r_set ? o.r : "2");
    if (!(P.r > 1.0)) throw Exit(kExitBadInput, "harmonic study needs r > 1");
    const auto sizes = c.harmonic_sizes.empty() ? powers_of_two(4, 16) : c.harmonic_sizes;

    ojson rows = ojson::array();
    std::vector<double> l1s, ds;
    for (const std::int64_t M : sizes) {
        if (M < 1) throw Exit(kExitBadInput, "truncation sizes must be positive");
        std::vector<std::int64_t> I;
        std::vector<double> V;
        for (std::int64_t k = 1; k <= M; ++k) {
            I.push_back(k);
            V.push_back(1.0 / static_cast<double>(k));
        }
        const SeqPtr x = seq_from(I, V);
        const double l1 = lp(x.get(), 1.0);
        const double d = dyadic(x.get(), P);
        const double inc = ds.empty() ? NAN : d - ds.back();
        l1s.push_back(l1);
        ds.push_back(d);
        rows.push_back({{"M", M}, {"l1", l1}, {"log_M", std::log(static_cast<double>(M))}, {"dyadic", d},
                        {"dyadic_increment", num(inc)}});
        t.add({"harmonic", M, l1, d, num(inc), nullptr, nullptr});
    }

    ojson checks;
    bool l1_up = true, d_up = true, inc_down = true, l1_log = true;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        l1_log = l1_log && l1s[i] >= std::log(static_cast<double>(sizes[i]));
        if (i == 0) continue;
        l1_up = l1_up && l1s[i] > l1s[i - 1];
        d_up = d_up && ds[i] >= ds[i - 1];
        if (i >= 2) inc_down = inc_down && (ds[i] - ds[i - 1]) <= (ds[i - 1] - ds[i - 2]) + 1e-15;
    }
    checks["l1_increasing"] = l1_up;
    checks["l1_at_least_log_M"] = l1_log;
    checks["dyadic_increasing"] = d_up;
    if (ds.size() >= 2) {
        const double last = ds.back() - ds[ds.size() - 2];
        checks["dyadic_increments_decreasing"] = inc_down;
        checks["last_increment"] = last;
        checks["last_increment_below_tol"] = last < c.cauchy_tol;
        failed = failed || !l1_up || !d_up || !inc_down || !(last < c.cauchy_tol) || !l1_log;
    } else {
        checks["last_increment"] = nullptr;  // single row: no Cauchy assertion
        failed = failed || !l1_log;
    }
    return {{"params", params_json(P)}, {"rows", rows}, {"checks", checks}};
}

// Streams |k|^{-1/s}, 1 <= |k| <= M, once up to the largest size and reads
// both norms off at every requested M. The side k < 0 is fed mirrored to
// index |k| - 1, which maps its dyadic cells onto those of k >= 0.
ojson power_study(const Options& o, const CounterexampleConfig& c, Table& t, bool& failed)
{
    const bm_params P = parse_params(o.p_set ? o.p : "2", o.q_set ? o.q : "3", o.r_set ? o.r : "4");
    double s = P.q;
    if (!c.s.empty()) check(bm_parse_exponent(c.s.c_str(), &s));
    if (!(P.q <= s && s < P.r)) throw Exit(kExitBadInput, "power study needs q <= s < r");
    auto sizes = c.power_sizes.empty() ? powers_of_two(4, 30) : c.power_sizes;
    for (const std::int64_t M : sizes) {
        if (M < 1) throw Exit(kExitBadInput, "truncation sizes must be positive");
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    const StreamPtr pos = make<StreamPtr>([&](bm_dyadic_stream** h) { return bm_dyadic_stream_create(&P, h); });
    const StreamPtr neg = make<StreamPtr>([&](bm_dyadic_stream** h) { return bm_dyadic_stream_create(&P, h); });
    constexpr std::size_t kBatch = 1 << 16;
    std::vector<std::int64_t> ip, in;
    std::vector<double> pw;
    ip.reserve(kBatch);
    in.reserve(kBatch);
    pw.reserve(kBatch);
    auto flush = [&] {
        check(bm_dyadic_stream_push_powers(pos.get(), ip.data(), pw.data(), pw.size()));
        check(bm_dyadic_stream_push_powers(neg.get(), in.data(), pw.data(), pw.size()));
        ip.clear();
        in.clear();
        pw.clear();
    };

    ojson rows = ojson::array();
    std::vector<double> lrs, ds;
    bool above_lower = true;
    long double lr_power = 0.0L;
    std::int64_t k = 1;
    for (const std::int64_t M : sizes) {
        for (; k <= M; ++k) {
            const double lk = std::log(static_cast<double>(k));
            const double w = std::exp(-P.p / s * lk);
            ip.push_back(k);
            in.push_back(k - 1);
            pw.push_back(w);
            lr_power += 2.0L * (P.r == 2.0 * P.p ? w * w : std::exp(-P.r / s * lk));
            if (pw.size() == kBatch) flush();
        }
        flush();
        double dp = 0.0, dn = 0.0;
        check(bm_dyadic_stream_value(pos.get(), nullptr, &dp));
        check(bm_dyadic_stream_value(neg.get(), nullptr, &dn));
        const double d = std::pow(dp + dn, 1.0 / P.r);
        const double lr = std::pow(static_cast<double>(lr_power), 1.0 / P.r);
        // Each level j with [2^{j-1}, 2^j) inside [1, M] contributes at least
        // 2^{-r/p} 2^{j r (1/q - 1/s)} on each side of 0.
        double lower = 0.0;
        for (int j = 1; (std::int64_t{1} << j) - 1 <= M; ++j) {
            lower += 2.0 * std::exp2(-P.r / P.p) * std::exp2(j * P.r * (1.0 / P.q - 1.0 / s));
        }
        lower = std::pow(lower, 1.0 / P.r);
        above_lower = above_lower && d >= lower;
        const double inc = lrs.empty() ? NAN : lr - lrs.back();
        lrs.push_back(lr);
        ds.push_back(d);
        rows.push_back({{"M", M}, {"lr", lr}, {"lr_increment", num(inc)}, {"dyadic", d}, {"level_lower_bound", lower}});
        t.add({"power", M, lr, d, num(inc), lower, nullptr});
    }

    ojson checks;
    bool d_up = true;
    for (std::size_t i = 1; i < ds.size(); ++i) d_up = d_up && ds[i] > ds[i - 1];
    checks["dyadic_increasing"] = d_up;
    checks["dyadic_above_level_bound"] = above_lower;
    checks["bound"] = c.bound;
    checks["dyadic_exceeds_bound"] = !ds.empty() && ds.back() > c.bound;
    if (lrs.size() >= 2) {
        const double last = lrs.back() - lrs[lrs.size() - 2];
        checks["lr_last_increment"] = last;
        checks["lr_cauchy"] = last < c.cauchy_tol;
        failed = failed || !(last < c.cauchy_tol);
    } else {
        checks["lr_last_increment"] = nullptr;
    }
    failed = failed || !d_up || !above_lower || ds.empty() || !(ds.back() > c.bound);
    return {{"params", params_json(P)}, {"s", s}, {"rows", rows}, {"checks", checks}};
}

}  // namespace

int run_counterexamples(const Options& o, const CounterexampleConfig& c, std::ostream& out)
{
    if (c.study != "harmonic" && c.study != "power" && c.study != "both") {
        throw Exit(kExitBadInput, "--study must be harmonic, power or both");
    }
    ojson report;
    report["command"] = "counterexamples";
    report["version"] = bm_version();
    report["seed"] = o.seed;
    report["tolerances"] = {{"cauchy_tol", c.cauchy_tol}, {"bound", c.bound}};
    Table t{{"study", "M", "sequence_norm", "dyadic", "increment", "level_lower_bound", "note"}, {}};
    bool failed = false;
    if (c.study != "power") report["harmonic"] = harmonic_study(o, c, t, failed);
    if (c.study != "harmonic") report["power"] = power_study(o, c, t, failed);
    report["claims_reproduced"] = !failed;
    emit(report, &t, o, out);
    return failed ? kExitToleranceUnmet : kExitOk;
}

// ---------------------------------------------------------------------------

int run_duality(const Options& o, const DualityConfig& c, std::ostream& out)
{
    const bm_params P = parse_params(o);
    if (c.side != "block" && c.side != "functional" && c.side != "both") {
        throw Exit(kExitBadInput, "--side must be block, functional or both");
    }
    if (c.ladder_max < 0 || c.ladder_max > 62) throw Exit(kExitBadInput, "--ladder-max must lie in [0, 62]");
    const SeqPtr y = load_seq(c.input);
    const bool zero = bm_seq_size(y.get()) == 0;

    ojson report = report_header("duality", P, o);
    report["tolerances"] = {{"gap_bound", c.gap_bound}, {"certificate_target", 1e-6}};
    report["input"] = c.input;
    Table t{{"level", "certificate", "norm", "gap", "tail_bound"}, {}};
    int code = kExitOk;

    if (c.side != "functional") {
        ojson b;
        double lower = 0.0, upper = 0.0;
        int level = o.max_level;
        if (level < 0) check(bm_default_block_max_level(y.get(), &level));
        if (!zero) {
            SeqPtr witness = make<SeqPtr>([&](bm_seq** w) {
                return bm_block_norm_lower_certificate(y.get(), &P, c.candidates, o.seed, &lower, w);
            });
            RepPtr rep = make<RepPtr>([&](bm_block_rep** r) {
                return bm_block_norm_upper(y.get(), &P, level, c.iterations, &upper, r);
            });
            char* s = nullptr;
            const bm_status st = bm_block_rep_to_json(rep.get(), &s);
            b["representation"] = ojson::parse(take_string(st, s));
            b["witness"] = seq_value(witness.get());
        }
        const double gap = lower > 0.0 ? upper / lower - 1.0 : (upper > 0.0 ? INFINITY : 0.0);
        b["max_level"] = level;
        b["iterations"] = c.iterations;
        b["candidates"] = c.candidates;
        b["lower"] = lower;
        b["upper"] = upper;
        b["relative_gap"] = num(gap);
        if (P.r == P.p && std::isfinite(P.q)) {
            double C = 0.0;
            check(bm_c_pq_constant(&P, &C));
            b["exact_value"] = lp(y.get(), P.p / (P.p - 1.0)) / C;
        }
        b["within_gap_bound"] = gap <= c.gap_bound;
        if (!(gap <= c.gap_bound)) code = kExitToleranceUnmet;
        report["block_side"] = std::move(b);
    }

    if (c.side != "block") {
        ojson f;
        ojson rows = ojson::array();
        const double norm = zero ? 0.0 : dyadic(y.get(), P);
        bool increasing = true, within_tail = true;
        double prev = 0.0, cert = 0.0;
        for (int L = 0; L <= c.ladder_max; ++L) {
            double tail = 0.0;
            if (!zero) {
                check(bm_norm_lower_certificate(y.get(), &P, L, &cert, nullptr));
                check(bm_dyadic_tail_bound(y.get(), &P, L, &tail));
            }
            const double gap = std::pow(norm, P.r) - std::pow(cert, P.r);
            increasing = increasing && cert >= prev - 1e-12 * norm;
            within_tail = within_tail && gap <= tail + 1e-12 * std::pow(norm, P.r);
            prev = cert;
            rows.push_back({{"level", L}, {"certificate", cert}, {"norm", norm}, {"gap_power", gap}, {"tail_bound", tail}});
            t.add({L, cert, norm, gap, tail});
        }
        f["norm"] = norm;
        f["ladder"] = std::move(rows);
        f["increasing"] = increasing;
        f["gap_within_tail_bound"] = within_tail;
        f["final_ratio"] = norm > 0.0 ? num(cert / norm) : ojson(1.0);
        report["functional_side"] = std::move(f);
    }
    emit(report, c.side == "block" ? nullptr : &t, o, out);
    return code;
}

// ---------------------------------------------------------------------------

namespace {

KernelPtr load_kernel(const SolveConfig& c)
{
    if (!c.kernel.empty() && !c.geometric.empty()) throw Exit(kExitBadInput, "give --kernel or --geometric, not both");
    if (!c.kernel.empty()) {
        return make<KernelPtr>([&](bm_kernel** k) { return bm_kernel_load(c.kernel.c_str(), k); });
    }
    if (c.geometric.empty()) throw Exit(kExitBadInput, "a kernel is required (--kernel or --geometric)");
    std::stringstream ss(c.geometric);
    double lambda = 0.0, alpha = 0.0;
    long long cutoff = -1;
    char s1 = 0, s2 = 0;
    if (!(ss >> lambda >> s1 >> alpha >> s2 >> cutoff) || s1 != ',' || s2 != ',' || !ss.eof()) {
        throw Exit(kExitBadInput, "--geometric expects lambda,alpha,cutoff");
    }
    return make<KernelPtr>([&](bm_kernel** k) { return bm_kernel_geometric(lambda, alpha, cutoff, k); });
}

ojson solver_json(const char* name, const bm_seq* x, const bm_solve_report& r)
{
    ojson j;
    j["solver"] = name;
    j["solution"] = seq_value(x);
    j["error_bound"] = num(r.error_bound);
    j["residual"] = num(r.residual);
    j["iterations"] = r.iterations;
    j["symbol_min_gap"] = num(r.symbol_min_gap);
    j["operator_bound"] = num(r.operator_bound);
    if (r.resolution) j["resolution"] = r.resolution;
    if (!std::isnan(r.truncated_mass)) j["truncated_mass"] = r.truncated_mass;
    if (!std::isnan(r.contraction)) j["contraction"] = r.contraction;
    if (!std::isnan(r.residual_bound)) j["residual_bound"] = r.residual_bound;
    return j;
}

}  // namespace

int run_solve(const Options& o, const SolveConfig& c, std::ostream& out)
{
    const bm_params P = parse_params(o);
    const double tol = o.tol;
    require_positive(tol, "--tol");
    const KernelPtr k = load_kernel(c);
    if (c.rhs.empty()) throw Exit(kExitBadInput, "--rhs is required");
    const SeqPtr f = load_seq(c.rhs);

    double l1 = 0.0, tail = 0.0;
    check(bm_kernel_info(k.get(), &l1, &tail));
    SeqPtr kseq = make<SeqPtr>([&](bm_seq** s) { return bm_kernel_seq(k.get(), s); });
    std::size_t M = 16;
    if (bm_seq_size(kseq.get()) > 0) {
        int64_t lohi[2];
        std::vector<int64_t> idx(bm_seq_size(kseq.get()));
        check(bm_seq_entries(kseq.get(), idx.data(), nullptr, idx.size()));
        lohi[0] = idx.front();
        lohi[1] = idx.back();
        while (M < 16 * static_cast<std::size_t>(lohi[1] - lohi[0] + 1)) M <<= 1;
    }
    double min_gap = 0.0;
    check(bm_symbol(k.get(), M, &min_gap, nullptr, nullptr));
    double shift = 0.0;
    check(bm_shift_constant(&P, &shift));

    ojson report = report_header("solve", P, o);
    report["tolerances"] = {{"tol", tol}, {"tail_tol", c.tail_tol}};
    report["kernel"] = {{"l1_norm", l1}, {"tail_l1_bound", tail}, {"symbol_min_gap", min_gap}, {"symbol_resolution", M}, {"shift_constant", shift}};
    const double fnorm = dyadic(f.get(), P);
    report["rhs_norm"] = fnorm;

    auto neumann = [&](bm_solve_report& r) {
        return make<SeqPtr>([&](bm_seq** x) { return bm_neumann_solve(k.get(), f.get(), &P, tol, c.max_terms, x, &r); });
    };
    auto wiener = [&](bm_solve_report& r) {
        return make<SeqPtr>([&](bm_seq** x) {
            return bm_wiener_solve(k.get(), f.get(), &P, c.resolution, c.tail_tol, x, nullptr, &r);
        });
    };
    auto stability = [&](const bm_seq* x) {
        ojson s;
        s["ratio"] = fnorm > 0.0 ? num(dyadic(x, P) / fnorm) : ojson(nullptr);
        const double kappa = l1 + tail;
        s["neumann_bound"] = kappa < 1.0 ? num(1.0 + shift * kappa / (1.0 - kappa) + tol) : ojson(nullptr);
        return s;
    };

    SeqPtr solution;
    int code = kExitOk;
    if (c.solver == "neumann" || c.solver == "wiener") {
        bm_solve_report r{};
        solution = c.solver == "neumann" ? neumann(r) : wiener(r);
        if (c.solver == "neumann") r.symbol_min_gap = min_gap;
        report["result"] = solver_json(c.solver.c_str(), solution.get(), r);
        report["stability"] = stability(solution.get());
    } else if (c.solver == "nonlinear") {
        bm_solve_report r{};
        solution = make<SeqPtr>([&](bm_seq** x) {
            return bm_nonlinear_solve(k.get(), c.nonlinearity.c_str(), f.get(), &P, tol, c.max_iterations, x, &r);
        });
        report["nonlinearity"] = c.nonlinearity;
        report["result"] = solver_json("nonlinear", solution.get(), r);
    } else if (c.solver == "compare") {
        bm_solve_report rn{}, rw{};
        SeqPtr xn = neumann(rn);
        rn.symbol_min_gap = min_gap;
        SeqPtr xw = wiener(rw);
        const SeqPtr d = sub(xn.get(), xw.get());
        const double diff = dyadic(d.get(), P);
        const double allowed = rn.error_bound + rw.error_bound;
        report["neumann"] = solver_json("neumann", xn.get(), rn);
        report["wiener"] = solver_json("wiener", xw.get(), rw);
        report["agreement"] = {{"difference", diff}, {"allowed", allowed}, {"agree", diff <= allowed}};
        report["stability"] = stability(xn.get());
        if (!(diff <= allowed)) code = kExitToleranceUnmet;
        solution = std::move(xw);
    } else {
        throw Exit(kExitBadInput, "--solver must be neumann, wiener, nonlinear or compare");
    }
    if (!c.solution_path.empty()) check(bm_seq_save(solution.get(), c.solution_path.c_str()));
    emit(report, nullptr, o, out);
    return code;
}

}  // namespace cli

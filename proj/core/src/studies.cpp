#include "dyadic/studies.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>

#include "dyadic/calculus.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/families.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/paraproducts.hpp"
#include "dyadic/shift.hpp"

namespace dyadic {

using nlohmann::json;

namespace {

using Task = std::function<StudyRow()>;

/// Runs the tasks on `jobs` threads; the output order is the task order.
std::vector<StudyRow> run_tasks(const std::vector<Task>& tasks, int jobs) {
    std::vector<StudyRow> out(tasks.size());
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (workers == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) out[t] = tasks[t]();
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < tasks.size(); t = next++) {
                try {
                    out[t] = tasks[t]();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

double measure(const LinearOperator& T, const Weight& mu, const Weight& lambda, double p, const L2Options& l2,
               int budget, std::uint64_t seed, std::string& method) {
    NormResult r = p == 2.0 ? opnorm_l2(T, mu, lambda, l2) : opnorm_lp_lower(T, mu, lambda, p, budget, seed);
    method = r.method;
    return r.value;
}

void finish(StudyRow& row) { row.ratio = row.norm / row.reference; }

constexpr const char* kVersion = "0.1.0";

}  // namespace

const std::vector<std::string>& study_columns() {
    static const std::vector<std::string> cols{"k",     "i",         "j",     "p",     "alpha",    "seed",
                                               "ap_mu", "ap_lambda", "ap_nu", "ap_w",  "bmo_b",    "bmo_nu_b",
                                               "norm",  "reference", "ratio", "op",    "method",   "trial"};
    return cols;
}

json StudyRow::to_json() const {
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    return json{{"k", num(k)},
                {"i", num(i)},
                {"j", num(j)},
                {"p", num(p)},
                {"alpha", num(alpha)},
                {"seed", seed},
                {"ap_mu", num(ap_mu)},
                {"ap_lambda", num(ap_lambda)},
                {"ap_nu", num(ap_nu)},
                {"ap_w", num(ap_w)},
                {"bmo_b", num(bmo_b)},
                {"bmo_nu_b", num(bmo_nu_b)},
                {"norm", num(norm)},
                {"reference", num(reference)},
                {"ratio", num(ratio)},
                {"op", op},
                {"method", method},
                {"trial", trial < 0 ? json(nullptr) : json(trial)}};
}

std::vector<StudyRow> StudyTable::select(const std::string& op, int k) const {
    std::vector<StudyRow> out;
    for (const auto& r : rows)
        if (r.op == op && (k < 0 || r.k == k)) out.push_back(r);
    return out;
}

double fit_exponent(const std::vector<StudyRow>& rows, const std::function<double(const StudyRow&)>& x,
                    const std::function<double(const StudyRow&)>& y) {
    if (rows.size() < 3) throw InvalidArgument("fit_exponent needs at least three rows");
    double lo = INFINITY, hi = 0.0;
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        const double a = x(r), b = y(r);
        if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("fit_exponent needs positive entries");
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        lx.push_back(std::log(a));
        ly.push_back(std::log(b));
    }
    if (hi <= 1.01 * lo) throw InvalidArgument("fit_exponent: abscissae within 1% of each other");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t t = 0; t < lx.size(); ++t) {
        mx += lx[t] / n;
        my += ly[t] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < lx.size(); ++t) {
        sxy += (lx[t] - mx) * (ly[t] - my);
        sxx += (lx[t] - mx) * (lx[t] - mx);
    }
    return sxy / sxx;
}

double max_ratio(const std::vector<StudyRow>& rows) {
    double m = std::nan("");
    for (const auto& r : rows)
        if (!std::isnan(r.ratio) && !(r.ratio <= m)) m = r.ratio;
    return m;
}

std::vector<SlopeCheck> scaling_slopes(const StudyTable& table) {
    std::vector<std::pair<std::string, int>> groups;
    for (const auto& r : table.rows) {
        const std::pair<std::string, int> key{r.op, std::isnan(r.k) ? -1 : static_cast<int>(r.k)};
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    std::vector<SlopeCheck> out;
    for (const auto& [op, k] : groups) {
        SlopeCheck c{op, k};
        if (op == "commutator") {
            c.limit = k + 1.25;
        } else if (op == "shift" || op == "martingale" || op == "pi" || op == "pi_star" || op == "gamma") {
            c.limit = 1.25;
        } else {
            c.limit = 2.25;
        }
        c.slope = fit_exponent(table.select(op, k), [](const StudyRow& r) { return r.ap_w; },
                               [](const StudyRow& r) { return r.norm; });
        c.passed = c.slope <= c.limit;
        out.push_back(c);
    }
    return out;
}

StudyTable one_weight_scaling(const OneWeightOptions& opt) {
    const TreeParams params(opt.n, opt.J);
    const StepFunction b = log_symbol(params);
    const double nb = bmo2_norm(b);
    const ShiftData data = random_shift(params, opt.i, opt.j, opt.seed);
    const LinearOperator S = shift(data);

    struct OpSpec {
        std::string name;
        double k;
        bool uses_shift;
        std::function<LinearOperator()> build;
        std::function<double(double)> reference;  // of [w]_{A_2}
    };
    std::vector<OpSpec> specs;
    for (int k : opt.k_list)
        specs.push_back({"commutator", double(k), true, [=] { return commutator_iter(b, S, k); },
                         [=](double aw) { return std::pow(nb, k) * std::pow(aw, k + 1); }});
    if (opt.baselines) {
        const double nan = std::nan("");
        auto linear = [](double aw) { return aw; };
        auto para = [nb](double aw) { return nb * aw; };
        auto quad = [nb](double aw) { return nb * nb * aw * aw; };
        const auto sigma = MartingaleSigns::random(params, detail::mix_seed(opt.seed, 1));
        specs.push_back({"shift", 0.0, true, [=] { return S; }, linear});
        specs.push_back({"martingale", nan, false, [=] { return martingale(sigma); }, linear});
        specs.push_back({"pi", nan, false, [=] { return pi(b); }, para});
        specs.push_back({"pi_star", nan, false, [=] { return pi_star(b); }, para});
        if (opt.n >= 2) specs.push_back({"gamma", nan, false, [=] { return gamma(b); }, para});
        specs.push_back({"theta", 1.0, true, [=] { return theta(b, S); }, quad});
        specs.push_back({"lambda", 1.0, false, [=] { return lambda(b, b); }, quad});
        specs.push_back({"lambda_tilde", 1.0, false, [=] { return lambda_tilde(b, b); }, quad});
        specs.push_back({"theta_pi", 1.0, false, [=] { return theta(b, pi(b)); }, quad});
        specs.push_back({"theta_pi_star", 1.0, false, [=] { return theta(b, pi_star(b)); }, quad});
    }

    std::vector<Task> tasks;
    for (double alpha : opt.alphas)
        for (const auto& spec : specs)
            tasks.push_back([=, &opt] {
                const Weight w = power_weight(alpha, params);
                StudyRow row;
                row.k = spec.k;
                if (spec.uses_shift) {
                    row.i = opt.i;
                    row.j = opt.j;
                }
                row.alpha = alpha;
                row.seed = opt.seed;
                row.ap_w = ap_characteristic(w, 2.0);
                row.bmo_b = nb;
                row.op = spec.name;
                row.norm = measure(spec.build(), w, w, 2.0, opt.l2, 0, opt.seed, row.method);
                row.reference = spec.reference(row.ap_w);
                finish(row);
                return row;
            });

    StudyTable table;
    table.metadata = json{{"version", kVersion},
                          {"seed", opt.seed},
                          {"study", "one_weight_scaling"},
                          {"params",
                           {{"n", opt.n},
                            {"J", opt.J},
                            {"i", opt.i},
                            {"j", opt.j},
                            {"k", opt.k_list},
                            {"alphas", opt.alphas},
                            {"baselines", opt.baselines}}}};
    table.rows = run_tasks(tasks, opt.jobs);
    return table;
}

std::pair<Weight, Weight> two_weight_pair(const TreeParams& params, std::uint64_t seed, int trial) {
    std::mt19937_64 rng(detail::mix_seed(seed, 1000 + static_cast<std::uint64_t>(trial)));
    auto power = [&] { return power_weight(0.8 * detail::uniform_pm1(rng), params); };
    auto cascade = [&] {
        const double delta = 0.1 + 0.3 * detail::uniform01(rng);
        return cascade_weight(params, delta, rng());
    };
    switch (trial % 3) {
        case 0: {
            Weight mu = power();
            return {mu, power()};
        }
        case 1: {
            Weight mu = power();
            return {mu, cascade()};
        }
        default: {
            Weight mu = cascade();
            return {mu, cascade()};
        }
    }
}

StudyTable two_weight_study(const TwoWeightOptions& opt) {
    const TreeParams params(opt.n, opt.J);
    auto has = [&](const char* c) { return std::find(opt.classes.begin(), opt.classes.end(), c) != opt.classes.end(); };
    for (const auto& c : opt.classes)
        if (c != "commutator" && c != "theta" && c != "paraproduct" && c != "lambda")
            throw InvalidArgument("unknown row class '" + c + "'");

    struct Trial {
        Weight mu, lambda;
        StepFunction a, b;
        LinearOperator S;
        StudyRow base;
    };
    // Per-trial data is built once and shared by that trial's rows.
    std::vector<std::shared_ptr<const Trial>> trials;
    const StepFunction a = log_symbol(params);
    const double na = bmo2_norm(a);
    for (int t = 0; t < opt.trials; ++t) {
        auto [mu, lambda] = two_weight_pair(params, opt.seed, t);
        const Weight nu = bloom_weight(mu, lambda, opt.p);
        const RandomSymbol rs =
            random_bmo_symbol(detail::mix_seed(opt.seed, 2000 + static_cast<std::uint64_t>(t)), params,
                              SymbolTarget::bloom(nu));
        StudyRow base;
        base.p = opt.p;
        base.seed = opt.seed;
        base.trial = t;
        base.ap_mu = ap_characteristic(mu, opt.p);
        base.ap_lambda = ap_characteristic(lambda, opt.p);
        base.ap_nu = ap_characteristic(nu, 2.0);
        base.bmo_b = rs.bmo2;
        base.bmo_nu_b = rs.bmo2_nu;
        const LinearOperator S =
            shift(random_shift(params, opt.i, opt.j, detail::mix_seed(opt.seed, 3000 + static_cast<std::uint64_t>(t))));
        trials.push_back(std::make_shared<const Trial>(Trial{mu, lambda, a, rs.b, S, base}));
    }

    struct OpSpec {
        std::string name;
        double k;
        bool uses_shift;
        std::function<LinearOperator(const Trial&)> build;
        std::function<double(const Trial&)> reference;
    };
    std::vector<OpSpec> specs;
    const double nan = std::nan("");
    if (has("commutator"))
        for (int k : opt.k_list)
            for (int M = 0; M + k <= opt.max_order; ++M)
                specs.push_back({M == 0 ? "commutator" : "theta" + std::to_string(M) + "_commutator", double(k), true,
                                 [=](const Trial& tr) { return theta_iter(tr.b, commutator_iter(tr.b, tr.S, k), M); },
                                 [=](const Trial& tr) {
                                     return std::pow(tr.base.bmo_b, M + k - 1) * tr.base.bmo_nu_b;
                                 }});
    if (has("theta"))
        for (int k : opt.k_list)
            if (k <= opt.max_order)
                specs.push_back({"theta", double(k), true, [=](const Trial& tr) { return theta_iter(tr.b, tr.S, k); },
                                 [=](const Trial& tr) { return std::pow(tr.base.bmo_b, k - 1) * tr.base.bmo_nu_b; }});
    if (has("paraproduct")) {
        auto ref = [](const Trial& tr) { return tr.base.bmo_nu_b; };
        specs.push_back({"pi", nan, false, [](const Trial& tr) { return pi(tr.b); }, ref});
        specs.push_back({"pi_star", nan, false, [](const Trial& tr) { return pi_star(tr.b); }, ref});
        if (opt.n >= 2) specs.push_back({"gamma", nan, false, [](const Trial& tr) { return gamma(tr.b); }, ref});
    }
    if (has("lambda"))
        for (int k = 1; k <= std::min(2, opt.max_order); ++k) {
            auto ref_p = [=](const Trial& tr) { return na * std::pow(tr.base.bmo_b, k - 1) * tr.base.bmo_nu_b; };
            auto ref_l = [=](const Trial& tr) { return na * std::pow(tr.base.bmo_b, k) * tr.base.bmo_nu_b; };
            specs.push_back({"theta_pi_a", double(k), false,
                             [=](const Trial& tr) { return theta_iter(tr.b, pi(tr.a), k); }, ref_p});
            specs.push_back({"theta_pi_star_a", double(k), false,
                             [=](const Trial& tr) { return theta_iter(tr.b, pi_star(tr.a), k); }, ref_p});
            specs.push_back({"theta_lambda_ab", double(k), false,
                             [=](const Trial& tr) { return theta_iter(tr.b, lambda(tr.a, tr.b), k); }, ref_l});
            specs.push_back({"theta_lambda_ba", double(k), false,
                             [=](const Trial& tr) { return theta_iter(tr.b, lambda(tr.b, tr.a), k); }, ref_l});
        }

    std::vector<Task> tasks;
    for (const auto& tr : trials)
        for (const auto& spec : specs)
            tasks.push_back([=, &opt] {
                StudyRow row = tr->base;
                row.k = spec.k;
                if (spec.uses_shift) {
                    row.i = opt.i;
                    row.j = opt.j;
                }
                row.op = spec.name;
                row.norm = measure(spec.build(*tr), tr->mu, tr->lambda, opt.p, opt.l2, opt.budget,
                                   detail::mix_seed(opt.seed, 4000), row.method);
                row.reference = spec.reference(*tr);
                finish(row);
                return row;
            });

    StudyTable table;
    table.metadata = json{{"version", kVersion},
                          {"seed", opt.seed},
                          {"study", "two_weight_study"},
                          {"params",
                           {{"n", opt.n},
                            {"J", opt.J},
                            {"i", opt.i},
                            {"j", opt.j},
                            {"p", opt.p},
                            {"k", opt.k_list},
                            {"max_order", opt.max_order},
                            {"trials", opt.trials},
                            {"classes", opt.classes}}}};
    table.rows = run_tasks(tasks, opt.jobs);
    return table;
}

StudyTable duality_study(const DualityOptions& opt) {
    const TreeParams params(opt.n, opt.J);
    std::vector<Task> tasks;
    for (int t = 0; t < opt.trials; ++t)
        tasks.push_back([=] {
            const auto ts = static_cast<std::uint64_t>(t);
            std::mt19937_64 rng(detail::mix_seed(opt.seed, 5000 + ts));
            const Weight nu = t % 4 < 2 ? power_weight(0.9 * detail::uniform_pm1(rng), params)
                                        : cascade_weight(params, 0.1 + 0.3 * detail::uniform01(rng), rng());
            const StepFunction phi = random_haar_symbol(params, detail::mix_seed(opt.seed, 6000 + 2 * ts));
            const StepFunction b =
                t % 2 == 1 ? phi : random_haar_symbol(params, detail::mix_seed(opt.seed, 6001 + 2 * ts));
            StudyRow row;
            row.seed = opt.seed;
            row.trial = t;
            row.ap_nu = ap_characteristic(nu, 2.0);
            row.bmo_nu_b = bmo2_norm(b, nu);
            row.bmo_b = bmo2_norm(b);
            row.norm = std::abs(inner_product(b, phi));
            row.reference = row.ap_nu * row.bmo_nu_b * weighted_lp_norm(square_function(phi), nu, 1.0);
            row.op = t % 2 == 1 ? "duality_aligned" : "duality_independent";
            row.method = "exact";
            finish(row);
            return row;
        });
    StudyTable table;
    table.metadata = json{{"version", kVersion},
                          {"seed", opt.seed},
                          {"study", "duality_study"},
                          {"params", {{"n", opt.n}, {"J", opt.J}, {"trials", opt.trials}}}};
    table.rows = run_tasks(tasks, opt.jobs);
    return table;
}

}  // namespace dyadic

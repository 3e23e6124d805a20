// Command-line front end: identity suite, single operator norms and the scaling studies.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 usage or configuration error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dyadic/descriptor.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/families.hpp"
#include "dyadic/identities.hpp"
#include "dyadic/io.hpp"
#include "dyadic/norms.hpp"
#include "dyadic/studies.hpp"

namespace {

using dyadic::StudyTable;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Output {
    std::string path;
    std::string format = "csv";
};

void add_output(CLI::App* cmd, Output& out, const char* default_format) {
    out.format = default_format;
    cmd->add_option("--out", out.path, "Write results here instead of stdout");
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void emit(const Output& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw dyadic::InvalidArgument("cannot open " + out.path + " for writing");
    f << text;
}

std::string render(const StudyTable& t, const std::string& format) {
    if (format == "json") return t.to_json().dump(2) + "\n";
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

/// unit | power:ALPHA | cascade:DELTA:SEED | random:SEED[:SPREAD] | @file.json
dyadic::Weight parse_weight(const std::string& spec, const dyadic::TreeParams& p) {
    if (spec.empty() || spec == "unit") return dyadic::Weight::unit(p);
    if (spec[0] == '@') {
        std::ifstream f(spec.substr(1));
        if (!f) throw dyadic::InvalidArgument("cannot read weight file " + spec.substr(1));
        const json j = json::parse(f);
        if (!j.value("positive", false)) throw dyadic::InvalidArgument("weight file lacks \"positive\": true");
        dyadic::StepFunction w = dyadic::step_function_from_json(j);
        if (w.params() != p) throw dyadic::ParamsMismatch("weight file tree differs from --dim/--depth");
        return dyadic::Weight(std::move(w));
    }
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    try {
        if (parts[0] == "power" && parts.size() == 2) return dyadic::power_weight(std::stod(parts[1]), p);
        if (parts[0] == "cascade" && parts.size() == 3)
            return dyadic::cascade_weight(p, std::stod(parts[1]), std::stoull(parts[2]));
        if (parts[0] == "random" && (parts.size() == 2 || parts.size() == 3))
            return dyadic::random_weight(p, std::stoull(parts[1]), parts.size() == 3 ? std::stod(parts[2]) : 1.0);
    } catch (const std::logic_error&) {
    }
    throw dyadic::InvalidArgument("cannot parse weight '" + spec + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dyadic operator calculus: identities, operator norms and weighted scaling studies"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    // identities
    dyadic::SuiteOptions suite;
    std::string suite_filter;
    auto* ids = app.add_subcommand("identities", "Check the algebraic identities and invariants");
    ids->add_option("--dim", suite.dims, "Dimensions")->delimiter(',')->capture_default_str();
    ids->add_option("--depth", suite.depths, "Depths J")->delimiter(',')->capture_default_str();
    ids->add_option("--trials", suite.trials)->capture_default_str();
    ids->add_option("--seed", suite.seed)->capture_default_str();
    ids->add_option("--tol", suite.tol)->capture_default_str();
    ids->add_option("--filter", suite_filter, "Run only identities whose name contains this text");
    ids->add_flag_callback("--list", [] {
        for (const auto& n : dyadic::identity_names()) std::cout << n << '\n';
        std::exit(kOk);
    }, "List identity names");
    Output ids_out;
    ids->add_option("--out", ids_out.path);
    ids->add_option("--format", ids_out.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    ids_out.format = "text";

    // norm
    int norm_dim = 1, norm_depth = 6, norm_budget = 200;
    double norm_p = 2.0;
    std::uint64_t norm_seed = 0;
    std::string norm_op, norm_mu = "unit", norm_lambda;
    Output norm_out;
    auto* norm = app.add_subcommand("norm", "Norm of one operator given by a JSON descriptor");
    norm->add_option("--op", norm_op, "Operator descriptor (JSON)")->required();
    norm->add_option("--dim", norm_dim)->capture_default_str();
    norm->add_option("--depth", norm_depth)->capture_default_str();
    norm->add_option("--p", norm_p)->capture_default_str();
    norm->add_option("--mu", norm_mu, "Source weight: unit, power:A, cascade:D:SEED, random:SEED[:S], @file")
        ->capture_default_str();
    norm->add_option("--lambda", norm_lambda, "Target weight (default: same as --mu)");
    norm->add_option("--budget", norm_budget, "Ascent budget for p != 2")->capture_default_str();
    norm->add_option("--seed", norm_seed)->capture_default_str();
    add_output(norm, norm_out, "json");

    // scaling
    dyadic::OneWeightOptions ow;
    bool no_baselines = false;
    Output ow_out;
    auto* scaling = app.add_subcommand("scaling", "One-weight power-family sweep");
    scaling->add_option("--k", ow.k_list)->delimiter(',')->capture_default_str();
    scaling->add_option("--i", ow.i)->capture_default_str();
    scaling->add_option("--j", ow.j)->capture_default_str();
    scaling->add_option("--alphas", ow.alphas)->delimiter(',')->capture_default_str();
    scaling->add_option("--dim", ow.n)->capture_default_str();
    scaling->add_option("--depth", ow.J)->capture_default_str();
    scaling->add_option("--seed", ow.seed)->capture_default_str();
    scaling->add_option("--jobs", ow.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    scaling->add_flag("--no-baselines", no_baselines, "Only the commutator rows");
    add_output(scaling, ow_out, "csv");

    // twoweight
    dyadic::TwoWeightOptions tw;
    Output tw_out;
    auto* twoweight = app.add_subcommand("twoweight", "Random two-weight pairs against the Bloom references");
    twoweight->add_option("--k", tw.k_list)->delimiter(',')->capture_default_str();
    twoweight->add_option("--max-order", tw.max_order, "Largest M + k")->capture_default_str();
    twoweight->add_option("--i", tw.i)->capture_default_str();
    twoweight->add_option("--j", tw.j)->capture_default_str();
    twoweight->add_option("--p", tw.p)->capture_default_str();
    twoweight->add_option("--trials", tw.trials)->capture_default_str();
    twoweight->add_option("--seed", tw.seed)->capture_default_str();
    twoweight->add_option("--dim", tw.n)->capture_default_str();
    twoweight->add_option("--depth", tw.J)->capture_default_str();
    twoweight->add_option("--classes", tw.classes, "commutator, theta, paraproduct, lambda")
        ->delimiter(',')
        ->capture_default_str();
    twoweight->add_option("--budget", tw.budget, "Ascent budget for p != 2")->capture_default_str();
    twoweight->add_option("--tol", tw.l2.tol, "Relative tolerance of the iterative L^2 norm")->capture_default_str();
    twoweight->add_option("--jobs", tw.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    add_output(twoweight, tw_out, "csv");

    // duality
    dyadic::DualityOptions du;
    Output du_out;
    auto* duality = app.add_subcommand("duality", "Weighted H^1-BMO pairing ratios");
    duality->add_option("--trials", du.trials)->capture_default_str();
    duality->add_option("--seed", du.seed)->capture_default_str();
    duality->add_option("--dim", du.n)->capture_default_str();
    duality->add_option("--depth", du.J)->capture_default_str();
    duality->add_option("--jobs", du.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    add_output(duality, du_out, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return kUsage;
    }

    try {
        if (*ids) {
            if (!suite_filter.empty()) suite.filter = suite_filter;
            const auto report = dyadic::identity_suite(suite);
            emit(ids_out, ids_out.format == "json" ? report.to_json().dump(2) + "\n" : report.to_text());
            return report.passed() ? kOk : kCheckFailed;
        }
        if (*norm) {
            const dyadic::TreeParams p(norm_dim, norm_depth);
            const json desc = json::parse(norm_op);
            const dyadic::LinearOperator T = dyadic::operator_from_json(desc, p);
            const dyadic::Weight mu = parse_weight(norm_mu, p);
            const dyadic::Weight lambda = norm_lambda.empty() ? mu : parse_weight(norm_lambda, p);
            dyadic::L2Options l2;
            l2.want_certificate = false;
            const auto r = norm_p == 2.0 ? dyadic::opnorm_l2(T, mu, lambda, l2)
                                         : dyadic::opnorm_lp_lower(T, mu, lambda, norm_p, norm_budget, norm_seed);
            if (norm_out.format == "json") {
                json j = r.to_json();
                j["operator"] = desc;
                emit(norm_out, j.dump(2) + "\n");
            } else {
                emit(norm_out, "value,method,iterations,seed\n" + dyadic::format_double(r.value) + "," + r.method + "," +
                                   std::to_string(r.iterations) + "," + std::to_string(r.seed) + "\n");
            }
            return std::isfinite(r.value) ? kOk : kCheckFailed;
        }
        if (*scaling) {
            ow.baselines = !no_baselines;
            const StudyTable t = dyadic::one_weight_scaling(ow);
            emit(ow_out, render(t, ow_out.format));
            bool ok = true;
            for (const auto& c : dyadic::scaling_slopes(t)) {
                std::cerr << (c.passed ? "ok   " : "FAIL ") << c.op << (c.k >= 0 ? " k=" + std::to_string(c.k) : "")
                          << " slope=" << dyadic::format_double(c.slope) << " limit=" << dyadic::format_double(c.limit)
                          << '\n';
                ok = ok && c.passed;
            }
            return ok ? kOk : kCheckFailed;
        }
        if (*twoweight || *duality) {
            const StudyTable t = *twoweight ? dyadic::two_weight_study(tw) : dyadic::duality_study(du);
            emit(*twoweight ? tw_out : du_out, render(t, (*twoweight ? tw_out : du_out).format));
            bool finite = true;
            for (const auto& r : t.rows) finite = finite && std::isfinite(r.ratio);
            std::cerr << "max ratio " << dyadic::format_double(dyadic::max_ratio(t.rows))
                      << (finite ? "" : " (non-finite ratios present)") << '\n';
            return finite ? kOk : kCheckFailed;
        }
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dyadic::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dyadic::DepthExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dyadic::CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dyadic::ParamsMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const dyadic::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}

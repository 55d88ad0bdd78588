#pragma once

// The `qbell` command line.
//
//   qbell check        FILE
//   qbell entropy      FILE --partition N M
//   qbell tomogram     FILE --angles PHI1 THETA1 PHI2 THETA2
//   qbell bell         FILE --angles PHI_A THETA_A PHI_D THETA_D PHI_B THETA_B PHI_C THETA_C
//   qbell bell-max     FILE [--restarts R] [--seed S] [--max-evals E] [--threads T]
//   qbell appendix     FILE --x X [--angles (u1 u2 u3 u4 as PHI THETA pairs)] [--restarts R] [--seed S]
//   qbell embed-qutrit FILE
//
// FILE is a matrix file path or "-" for standard input. Reports go to standard
// output, diagnostics to standard error. Exit codes: 0 all checks hold,
// 1 an inequality is violated, 2 invalid input or usage.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbell/appendix.hpp"
#include "qbell/bell.hpp"
#include "qbell/channels.hpp"
#include "qbell/density.hpp"
#include "qbell/entropy.hpp"
#include "qbell/errors.hpp"
#include "qbell/io.hpp"
#include "qbell/tomography.hpp"

namespace qbell::cli {

enum ExitCode : int { kOk = 0, kViolated = 1, kInvalid = 2 };

struct Options {
    std::string file;
    std::vector<std::size_t> partition;
    std::vector<double> angles;
    std::size_t restarts = 8;
    std::optional<std::uint64_t> seed;
    std::size_t max_evals = 20000;
    unsigned threads = 1;
    std::optional<double> x;
};

namespace detail {

inline OrderedJson verdict(const std::string& name, OrderedJson values, double bound, bool holds, double slack) {
    OrderedJson v;
    v["check"] = name;
    v["values"] = std::move(values);
    v["bound"] = bound;
    v["holds"] = holds;
    v["slack"] = slack;
    return v;
}

inline OrderedJson angles_json(const EulerAngles& a) {
    OrderedJson j;
    j["phi"] = a.phi;
    j["theta"] = a.theta;
    return j;
}

inline OrderedJson setting_json(const BellSetting& s) {
    OrderedJson j;
    j["a"] = angles_json(s.a);
    j["b"] = angles_json(s.b);
    j["c"] = angles_json(s.c);
    j["d"] = angles_json(s.d);
    return j;
}

inline OrderedJson bell_tolerances() {
    OrderedJson t;
    t["bound"] = kBoundTol;
    return t;
}

inline std::vector<OrderedJson> bell_verdicts(double abs_b) {
    OrderedJson values;
    values["abs_B"] = abs_b;
    return {verdict("separable_bound", values, kSeparableBound, abs_b <= kSeparableBound + kBoundTol,
                    kSeparableBound - abs_b),
            verdict("tsirelson_bound", values, kTsirelsonBound, abs_b <= kTsirelsonBound + kBoundTol,
                    kTsirelsonBound - abs_b)};
}

inline std::uint64_t resolve_seed(const Options& opt) {
    if (opt.seed) return *opt.seed;
    if (const char* env = std::getenv("QBELL_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used, 10);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("QBELL_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

inline OrderedJson optimizer_json(const OptimizerStats& s, const BellOptimizerConfig& c) {
    OrderedJson j;
    j["restarts"] = s.restarts;
    j["evaluations"] = s.evaluations;
    j["converged"] = s.converged;
    j["max_evals"] = c.max_evals;
    j["step_tol"] = c.step_tol;
    return j;
}

inline std::string input_label(const MatrixFile& mf, const std::string& path) {
    if (mf.label) return *mf.label;
    return path == "-" ? std::string("<stdin>") : path;
}

struct Outcome {
    OrderedJson report;
    int code = kOk;
};

inline Outcome base(const std::string& command, const std::string& label) {
    Outcome o;
    o.report["command"] = command;
    o.report["input_label"] = label;
    return o;
}

inline Outcome run_check(const Options& opt, const MatrixFile& mf, std::ostream& err) {
    Outcome o = base("check", input_label(mf, opt.file));
    const ValidationTolerances tol;
    const ComplexMatrix& m = mf.matrix;

    OrderedJson t;
    t["hermiticity"] = tol.hermiticity;
    t["trace"] = tol.trace;
    t["psd"] = tol.psd;
    o.report["tolerances"] = t;

    const double herm = hermiticity_defect(m);
    const double trace_dev = std::abs(trace(m) - Complex{1.0, 0.0});
    OrderedJson verdicts = OrderedJson::array();
    {
        OrderedJson v;
        v["max_abs_defect"] = herm;
        verdicts.push_back(verdict("hermiticity", v, tol.hermiticity, herm <= tol.hermiticity, tol.hermiticity - herm));
    }
    {
        OrderedJson v;
        v["trace_re"] = trace(m).real();
        v["trace_im"] = trace(m).imag();
        verdicts.push_back(verdict("unit_trace", v, tol.trace, trace_dev <= tol.trace, tol.trace - trace_dev));
    }
    bool ok = herm <= tol.hermiticity && trace_dev <= tol.trace;
    OrderedJson details;
    details["dim"] = m.rows();
    if (herm <= tol.hermiticity) {
        const auto spectrum = hermitian_eigenvalues(m, tol.hermiticity);
        OrderedJson v;
        v["min_eigenvalue"] = spectrum.front();
        const bool psd_ok = spectrum.front() >= -tol.psd;
        verdicts.push_back(verdict("positive_semidefinite", v, -tol.psd, psd_ok, spectrum.front() + tol.psd));
        details["eigenvalues"] = spectrum;
        if (!psd_ok) err << "error: negative eigenvalue " << format_double(spectrum.front()) << " below −" << tol.psd << '\n';
        ok = ok && psd_ok;
    }
    if (herm > tol.hermiticity) err << "error: hermiticity violated, ‖ρ − ρ†‖_max = " << format_double(herm) << '\n';
    if (trace_dev > tol.trace) err << "error: unit trace violated, |Tr ρ − 1| = " << format_double(trace_dev) << '\n';
    o.report["verdicts"] = verdicts;
    o.report["details"] = details;
    o.code = ok ? kOk : kInvalid;
    return o;
}

inline Outcome run_entropy(const Options& opt, const MatrixFile& mf) {
    Outcome o = base("entropy", input_label(mf, opt.file));
    const DensityMatrix rho = validate(mf.matrix);
    const BlockPartition p{opt.partition.at(0), opt.partition.at(1)};
    const EntropyReport r = entropy_report(rho, p);

    OrderedJson t;
    t["entropy"] = kEntropyTol;
    o.report["tolerances"] = t;

    OrderedJson values;
    values["s_joint"] = r.s_joint;
    values["s_first"] = r.s_first;
    values["s_second"] = r.s_second;
    OrderedJson verdicts = OrderedJson::array();
    verdicts.push_back(verdict("subadditivity", values, r.s_first + r.s_second, r.subadditivity_holds, r.slack_sub));
    verdicts.push_back(
        verdict("araki_lieb", values, std::abs(r.s_first - r.s_second), r.araki_lieb_holds, r.slack_al));
    o.report["verdicts"] = verdicts;

    OrderedJson details;
    details["partition"] = {p.n, p.m};
    details["mutual_information"] = r.mutual_information;
    o.report["details"] = details;
    o.code = (r.subadditivity_holds && r.araki_lieb_holds) ? kOk : kViolated;
    return o;
}

inline Outcome run_tomogram(const Options& opt, const MatrixFile& mf) {
    Outcome o = base("tomogram", input_label(mf, opt.file));
    const DensityMatrix rho = validate(mf.matrix);
    const auto& a = opt.angles;
    const EulerAngles d1 = EulerAngles::direction(a.at(0), a.at(1));
    const EulerAngles d2 = EulerAngles::direction(a.at(2), a.at(3));
    const Tomogram t = joint_tomogram(rho, d1, d2);

    OrderedJson tol;
    tol["normalization"] = 1e-9;
    o.report["tolerances"] = tol;
    OrderedJson values;
    values["sum"] = t.sum();
    OrderedJson verdicts = OrderedJson::array();
    const double dev = std::abs(t.sum() - 1.0);
    verdicts.push_back(verdict("normalization", values, 1.0, dev <= 1e-9, 1e-9 - dev));
    o.report["verdicts"] = verdicts;

    OrderedJson details;
    details["first"] = angles_json(d1);
    details["second"] = angles_json(d2);
    details["outcomes"] = {"++", "+-", "-+", "--"};
    details["probabilities"] = t.probs;
    o.report["details"] = details;
    o.code = dev <= 1e-9 ? kOk : kViolated;
    return o;
}

inline int bell_exit_code(double abs_b) {
    return classify(abs_b) == BellClass::tsirelson_violation_error ? kViolated : kOk;
}

inline Outcome run_bell(const Options& opt, const MatrixFile& mf) {
    Outcome o = base("bell", input_label(mf, opt.file));
    const DensityMatrix rho = validate(mf.matrix);
    const auto& x = opt.angles;
    BellSetting s;
    s.a = EulerAngles::direction(x.at(0), x.at(1));
    s.d = EulerAngles::direction(x.at(2), x.at(3));
    s.b = EulerAngles::direction(x.at(4), x.at(5));
    s.c = EulerAngles::direction(x.at(6), x.at(7));
    const double b = bell_number(rho, s);

    o.report["tolerances"] = bell_tolerances();
    o.report["verdicts"] = bell_verdicts(std::abs(b));
    OrderedJson details;
    details["B"] = b;
    details["classification"] = std::string(to_string(classify(std::abs(b))));
    details["setting"] = setting_json(s);
    o.report["details"] = details;
    o.code = bell_exit_code(std::abs(b));
    return o;
}

inline Outcome run_bell_max(const Options& opt, const MatrixFile& mf) {
    Outcome o = base("bell-max", input_label(mf, opt.file));
    const DensityMatrix rho = validate(mf.matrix);
    BellOptimizerConfig config;
    config.restarts = opt.restarts;
    config.seed = resolve_seed(opt);
    config.max_evals = opt.max_evals;
    config.threads = opt.threads;
    const BellReport r = maximize_bell(rho, config);

    o.report["tolerances"] = bell_tolerances();
    o.report["verdicts"] = bell_verdicts(r.value);
    OrderedJson details;
    details["abs_B"] = r.value;
    details["B_signed_at_setting"] = bell_number(rho, r.setting);
    details["classification"] = std::string(to_string(classify(r)));
    details["setting"] = setting_json(r.setting);
    o.report["details"] = details;
    o.report["seed"] = config.seed;
    o.report["optimizer"] = optimizer_json(r.optimizer_stats, config);
    o.code = bell_exit_code(r.value);
    return o;
}

inline Outcome run_appendix(const Options& opt, const MatrixFile& mf) {
    Outcome o = base("appendix", input_label(mf, opt.file));
    const ObservableMatrix f(mf.matrix);
    const double x = *opt.x;
    const DensityMatrix rho = rho_of_x(f, x);

    BellOptimizerConfig config;
    std::optional<OptimizerStats> stats;
    UnitaryQuadruple q;
    if (opt.angles.empty()) {
        config.restarts = opt.restarts;
        config.seed = resolve_seed(opt);
        config.max_evals = opt.max_evals;
        config.threads = opt.threads;
        const AppendixMaximum best = maximize_appendix(f, x, config);
        q = best.quadruple;
        stats = best.optimizer_stats;
    } else {
        const auto& a = opt.angles;
        q.u1 = EulerAngles::direction(a.at(0), a.at(1));
        q.u2 = EulerAngles::direction(a.at(2), a.at(3));
        q.u3 = EulerAngles::direction(a.at(4), a.at(5));
        q.u4 = EulerAngles::direction(a.at(6), a.at(7));
    }
    const StochasticMatrix omega = stochastic_omega(f, x, q);
    const double value = std::abs(sign_contraction(omega));

    OrderedJson tol;
    tol["bound"] = kBoundTol;
    o.report["tolerances"] = tol;

    OrderedJson verdicts = OrderedJson::array();
    OrderedJson values;
    values["value"] = value;
    const bool rho_ok = value <= kTsirelsonBound + kBoundTol;
    verdicts.push_back(verdict("rho_x_tsirelson_bound", values, kTsirelsonBound, rho_ok, kTsirelsonBound - value));
    bool ok = rho_ok;
    if (f.spectrum().front() > 0.0) {
        const ObservableBoundReport ob = observable_bound_check(f, q);
        OrderedJson v;
        v["value"] = ob.value;
        verdicts.push_back(verdict("observable_bound", v, ob.bound, ob.holds, ob.bound - ob.value));
        ok = ok && ob.holds;
    }
    o.report["verdicts"] = verdicts;

    OrderedJson details;
    details["x"] = x;
    details["x_min_exclusive"] = f.max_abs_eigenvalue();
    details["f_spectrum"] = f.spectrum();
    details["rho_x_spectrum"] = rho.spectrum();
    OrderedJson om = OrderedJson::array();
    for (const auto& row : omega) om.push_back(row);
    details["omega"] = om;
    OrderedJson quad;
    quad["u1"] = angles_json(q.u1);
    quad["u2"] = angles_json(q.u2);
    quad["u3"] = angles_json(q.u3);
    quad["u4"] = angles_json(q.u4);
    details["quadruple"] = quad;
    o.report["details"] = details;
    if (stats) {
        o.report["seed"] = config.seed;
        o.report["optimizer"] = optimizer_json(*stats, config);
    }
    o.code = ok ? kOk : kViolated;
    return o;
}

}  // namespace detail

/// Runs one command. Reports are written to `out` once, after the work is done.
inline int run(int argc, const char* const* argv, std::istream& in = std::cin, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    CLI::App app{"Entropic and Bell-CHSH inequality checks for small density matrices", "qbell"};
    app.require_subcommand(1);
    Options opt;

    auto add_file = [&](CLI::App* sub) {
        sub->add_option("file", opt.file, "Matrix file (JSON), or - for standard input")->required();
    };
    auto add_optimizer = [&](CLI::App* sub) {
        sub->add_option("--restarts", opt.restarts, "Multistart restarts")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "Optimizer seed (default: $QBELL_SEED or 0)");
        sub->add_option("--max-evals", opt.max_evals, "Objective evaluations per restart")->check(CLI::PositiveNumber);
        sub->add_option("--threads", opt.threads, "Worker threads for restarts")->check(CLI::PositiveNumber);
    };

    auto* check = app.add_subcommand("check", "Validate a density matrix");
    add_file(check);

    auto* entropy = app.add_subcommand("entropy", "Subadditivity and Araki-Lieb for a block partition");
    add_file(entropy);
    entropy->add_option("--partition", opt.partition, "Block count n and block size m")->expected(2)->required();

    auto* tomo = app.add_subcommand("tomogram", "Joint tomogram along two directions");
    add_file(tomo);
    tomo->add_option("--angles", opt.angles, "phi1 theta1 phi2 theta2 (radians)")->expected(4)->required();

    auto* bell = app.add_subcommand("bell", "Bell number at fixed directions");
    add_file(bell);
    bell->add_option("--angles", opt.angles, "phi theta for a, d, b, c (radians)")->expected(8)->required();

    auto* bell_max = app.add_subcommand("bell-max", "Maximize |B| over measurement directions");
    add_file(bell_max);
    add_optimizer(bell_max);

    auto* appendix = app.add_subcommand("appendix", "Bell value of rho(x) = (f + x)/(4x + Tr f)");
    add_file(appendix);
    appendix->add_option("--x", opt.x, "Shift x > max|f_j|")->required();
    appendix->add_option("--angles", opt.angles, "phi theta for u1, u2, u3, u4 (radians)")->expected(8);
    add_optimizer(appendix);

    auto* embed = app.add_subcommand("embed-qutrit", "Embed a 3x3 density matrix as 4x4");
    add_file(embed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        const MatrixFile mf = parse_matrix(opt.file, in);
        if (embed->parsed()) {
            const DensityMatrix rho3 = validate(mf.matrix);
            const DensityMatrix rho4 = embed_qutrit(rho3);
            const std::string label = detail::input_label(mf, opt.file) + " (embedded)";
            out << serialize_report(matrix_to_json(rho4.matrix(), label));
            return kOk;
        }

        detail::Outcome o;
        if (check->parsed()) {
            o = detail::run_check(opt, mf, err);
        } else if (entropy->parsed()) {
            o = detail::run_entropy(opt, mf);
        } else if (tomo->parsed()) {
            o = detail::run_tomogram(opt, mf);
        } else if (bell->parsed()) {
            o = detail::run_bell(opt, mf);
        } else if (bell_max->parsed()) {
            o = detail::run_bell_max(opt, mf);
        } else {
            o = detail::run_appendix(opt, mf);
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
        o.report["wall_time_ms"] = static_cast<std::int64_t>(elapsed.count());
        out << serialize_report(o.report);
        return o.code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const SchemaError& e) {
        err << "error: schema: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kInvalid;
}

}  // namespace qbell::cli

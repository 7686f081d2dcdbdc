#pragma once

// Subcommand front end. Exit codes: 0 success, 1 usage error,
// 2 computation error (singular matrix, decode failure, ...), 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deblur/deblur.hpp"

namespace deblur::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kComputation = 2, kIo = 3 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return kUsage;
        case ErrorKind::Io: return kIo;
        default: return kComputation;
    }
}

namespace detail {

struct KernelOptions {
    std::string kind = "gaussian";
    double z = kDefaultHalfWidth;

    void attach(CLI::App* app) {
        app->add_option("--kernel", kind, "Blurring kernel: averaging | hat | gaussian")->capture_default_str();
        app->add_option("--z", z, "Kernel half-width / spread on [0,1]")->capture_default_str();
    }

    KernelSpec spec() const {
        KernelSpec s{parse_kernel_kind(kind), z};
        validate(s);
        return s;
    }
};

/// Writes to a file when path is non-empty, otherwise to the fallback stream.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) throw IoError("cannot write '" + path + "'");
    write(f);
    if (!f) throw IoError("write failed for '" + path + "'");
}

inline void write_vector_to(const std::string& path, std::ostream& fallback, std::span<const double> v) {
    emit(path, fallback, [&](std::ostream& o) { io::write_vector(o, v); });
}

inline nlohmann::json to_json(const upc::DecodeResult& r) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : r.groups) {
        groups.push_back({{"group", g.group + 1},
                          {"digit", g.digit},
                          {"column", g.column},
                          {"widths", g.widths},
                          {"run_lengths", g.run_lengths},
                          {"rounding_residual", g.rounding_residual},
                          {"repaired", g.repaired}});
    }
    return {{"digits", r.digits.str()},
            {"reversed", r.reversed},
            {"checksum_valid", r.checksum_valid},
            {"merged_runs", r.merged_runs},
            {"groups", groups}};
}

inline std::size_t count_mismatches(const upc::BinaryBarVector& a, const upc::BinaryBarVector& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) n += a.bits[i] != b.bits[i];
    return n;
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blur, deblur and decode one-dimensional signals and UPC-A barcodes", "deblur"};
    app.require_subcommand(1);

    // blur
    auto* blur = app.add_subcommand("blur", "Blur a signal (file, built-in test signal or encoded UPC)");
    detail::KernelOptions blur_kernel;
    blur_kernel.attach(blur);
    std::size_t blur_n = 100;
    std::string blur_input, blur_upc, blur_output, blur_truth, blur_clean, blur_noise_out;
    std::size_t blur_ppu = 6;
    double blur_eps = 0.0;
    std::uint64_t blur_seed = 0;
    blur->add_option("--n", blur_n, "Grid size for the built-in test signal")->capture_default_str();
    blur->add_option("--input", blur_input, "Signal f to blur (one value per line)");
    blur->add_option("--upc", blur_upc, "Blur the bar signal of this 12-digit UPC instead");
    blur->add_option("--points-per-unit", blur_ppu, "Samples per bar unit for --upc")->capture_default_str();
    blur->add_option("--noise", blur_eps, "Relative noise level epsilon")->capture_default_str();
    blur->add_option("--seed", blur_seed, "Noise seed")->capture_default_str();
    blur->add_option("--output", blur_output, "Blurred (noisy) signal; stdout if omitted");
    blur->add_option("--truth-output", blur_truth, "Also write the unblurred signal f");
    blur->add_option("--clean-output", blur_clean, "Also write the noise-free blurred signal b");
    blur->add_option("--noise-output", blur_noise_out, "Also write the noise vector e");

    // deblur
    auto* deblur_cmd = app.add_subcommand("deblur", "Recover f from blurred data");
    detail::KernelOptions deblur_kernel;
    deblur_kernel.attach(deblur_cmd);
    std::string deblur_input, deblur_output, deblur_method = "aug";
    double deblur_lambda = 0.0;
    std::size_t deblur_k = 0;
    bool deblur_decode = false, deblur_reversed = false;
    deblur_cmd->add_option("--input", deblur_input, "Blurred data b")->required();
    deblur_cmd->add_option("--lambda", deblur_lambda, "Regularization parameter")->capture_default_str();
    deblur_cmd->add_option("--method", deblur_method, "aug | normal | svd | naive | tsvd")->capture_default_str();
    deblur_cmd->add_option("--k", deblur_k, "Number of retained terms for --method tsvd");
    deblur_cmd->add_option("--output", deblur_output, "Recovered signal; stdout if omitted");
    deblur_cmd->add_flag("--decode", deblur_decode, "Threshold the result and decode it as a UPC (report on stderr)");
    deblur_cmd->add_flag("--allow-reversed", deblur_reversed, "Accept reversed scans when decoding");

    // lcurve
    auto* lcurve_cmd = app.add_subcommand("lcurve", "Sweep lambda and tabulate residual and solution norms");
    detail::KernelOptions lcurve_kernel;
    lcurve_kernel.attach(lcurve_cmd);
    std::string lcurve_input, lcurve_output, lcurve_method = "svd";
    double lo_exp = -7.0, hi_exp = 0.5;
    std::size_t lcurve_count = 100;
    bool lcurve_corner = false;
    lcurve_cmd->add_option("--input", lcurve_input, "Noisy data b_noise")->required();
    lcurve_cmd->add_option("--lambda-min-exp", lo_exp, "log10 of the smallest lambda")->capture_default_str();
    lcurve_cmd->add_option("--lambda-max-exp", hi_exp, "log10 of the largest lambda")->capture_default_str();
    lcurve_cmd->add_option("--count", lcurve_count, "Number of log-spaced lambda values")->capture_default_str();
    lcurve_cmd->add_option("--method", lcurve_method, "aug | normal | svd")->capture_default_str();
    lcurve_cmd->add_option("--output", lcurve_output, "CSV output; stdout if omitted");
    lcurve_cmd->add_flag("--corner", lcurve_corner, "Report the heuristic maximum-curvature corner on stderr");

    // svd-analyze
    auto* svd_cmd = app.add_subcommand("svd-analyze", "Singular values and expansion coefficients of data");
    detail::KernelOptions svd_kernel;
    svd_kernel.attach(svd_cmd);
    std::string svd_input, svd_output, svd_vectors_output;
    std::optional<double> svd_lambda;
    std::vector<std::size_t> svd_vectors;
    svd_cmd->add_option("--input", svd_input, "Data vector b (or b_noise, or a noise vector)")->required();
    svd_cmd->add_option("--lambda", svd_lambda, "Also tabulate Tikhonov-filtered coefficients");
    svd_cmd->add_option("--output", svd_output, "Diagnostics CSV; stdout if omitted");
    svd_cmd->add_option("--vectors", svd_vectors, "1-based indices of right singular vectors to export")
        ->delimiter(',');
    svd_cmd->add_option("--vectors-output", svd_vectors_output, "CSV of t and the selected v_j");

    // upc-encode
    auto* enc = app.add_subcommand("upc-encode", "Encode 12 digits as a sampled bar signal");
    std::string enc_digits, enc_output;
    std::size_t enc_ppu = 6;
    enc->add_option("--digits", enc_digits, "12-digit UPC-A code")->required();
    enc->add_option("--points-per-unit", enc_ppu, "Samples per bar unit")->capture_default_str();
    enc->add_option("--output", enc_output, "Signal output; stdout if omitted");

    // upc-decode
    auto* dec = app.add_subcommand("upc-decode", "Threshold a recovered signal and decode the UPC");
    std::string dec_input;
    bool dec_reversed = false, dec_json = false;
    dec->add_option("--input", dec_input, "Signal (length a multiple of 95)")->required();
    dec->add_flag("--allow-reversed", dec_reversed, "Accept reversed scans");
    dec->add_flag("--json", dec_json, "Print diagnostics as JSON");

    // demo-coke
    auto* demo = app.add_subcommand("demo-coke", "Encode, blur, add noise, deblur, threshold and decode");
    std::string demo_digits = "049000027679", demo_method = "aug", demo_output;
    double demo_eps = 1e-8, demo_lambda = 1e-5, demo_z = 0.01;
    std::uint64_t demo_seed = 0;
    std::size_t demo_ppu = 6;
    demo->add_option("--digits", demo_digits, "UPC to simulate")->capture_default_str();
    demo->add_option("--noise", demo_eps, "Relative noise level epsilon")->capture_default_str();
    demo->add_option("--seed", demo_seed, "Noise seed")->capture_default_str();
    demo->add_option("--lambda", demo_lambda, "Regularization parameter")->capture_default_str();
    demo->add_option("--method", demo_method, "aug | normal | svd")->capture_default_str();
    demo->add_option("--z", demo_z, "Gaussian blur spread")->capture_default_str();
    demo->add_option("--points-per-unit", demo_ppu, "Samples per bar unit")->capture_default_str();
    demo->add_option("--output", demo_output, "Write the recovered f_lambda here");

    // kernel-table
    auto* ktab = app.add_subcommand("kernel-table", "Tabulate the three kernels h(s,t) around a fixed s");
    double ktab_z = kDefaultHalfWidth, ktab_s = 0.5;
    std::size_t ktab_count = 201;
    std::string ktab_output;
    ktab->add_option("--z", ktab_z, "Kernel half-width")->capture_default_str();
    ktab->add_option("--s", ktab_s, "Fixed location s")->capture_default_str();
    ktab->add_option("--count", ktab_count, "Number of t samples on [0,1]")->capture_default_str();
    ktab->add_option("--output", ktab_output, "CSV output; stdout if omitted");

    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    try {
        app.parse(reversed_args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (blur->parsed()) {
            const KernelSpec spec = blur_kernel.spec();
            if (!blur_input.empty() && !blur_upc.empty()) throw InvalidArgument("use either --input or --upc");
            std::optional<Signal> f;
            if (!blur_input.empty()) {
                Vector v = io::read_vector_csv(blur_input);
                if (v.empty()) throw InvalidArgument("input signal is empty");
                f = Signal::on_midpoints(std::move(v));
            } else if (!blur_upc.empty()) {
                f = upc::pattern_to_signal(upc::encode_upc(upc::UpcDigits::parse(blur_upc)), blur_ppu);
            } else {
                f = test_signal(make_grid(blur_n));
            }
            const DenseMatrix a = build_blur_matrix(spec, f->size());
            const Signal b = forward_blur(a, *f);
            const NoiseSpec noise{blur_eps, blur_seed};
            const Vector e = noise_vector(b.values(), noise);
            const Vector b_noise = add_noise(std::span<const double>(b.values()), noise);
            if (!blur_truth.empty()) io::write_vector_csv(blur_truth, f->values());
            if (!blur_clean.empty()) io::write_vector_csv(blur_clean, b.values());
            if (!blur_noise_out.empty()) io::write_vector_csv(blur_noise_out, e);
            detail::write_vector_to(blur_output, out, b_noise);
            return kOk;
        }

        if (deblur_cmd->parsed()) {
            const KernelSpec spec = deblur_kernel.spec();
            const Vector b = io::read_vector_csv(deblur_input);
            if (b.empty()) throw InvalidArgument("input data is empty");
            if (!(deblur_lambda >= 0.0)) throw InvalidArgument("--lambda must be nonnegative");
            const DenseMatrix a = build_blur_matrix(spec, b.size());
            Vector f;
            if (deblur_method == "naive") {
                f = solve_linear(a, b);
            } else if (deblur_method == "tsvd") {
                if (deblur_k == 0) throw InvalidArgument("--method tsvd requires --k");
                f = truncated_svd_solve(svd_econ(a), b, deblur_k);
            } else {
                f = tikhonov_solve(a, b, deblur_lambda, parse_solve_method(deblur_method)).f_lambda;
            }
            detail::write_vector_to(deblur_output, out, f);
            err << "residual_norm=" << io::format_double(vector_norm(subtract(b, multiply(a, f))))
                << " solution_norm=" << io::format_double(vector_norm(f)) << '\n';
            if (deblur_decode) {
                const auto r = upc::decode_upc(upc::threshold_signal(f), {deblur_reversed});
                err << "decoded: " << r.digits.str() << (r.checksum_valid ? "" : " (check digit mismatch)") << '\n';
            }
            return kOk;
        }

        if (lcurve_cmd->parsed()) {
            const KernelSpec spec = lcurve_kernel.spec();
            const Vector b = io::read_vector_csv(lcurve_input);
            if (b.empty()) throw InvalidArgument("input data is empty");
            const DenseMatrix a = build_blur_matrix(spec, b.size());
            const auto lambdas = logspace(lo_exp, hi_exp, lcurve_count);
            const LCurve curve = lcurve_sweep(a, b, lambdas, parse_solve_method(lcurve_method));
            std::vector<std::vector<double>> rows;
            for (const auto& p : curve.points) rows.push_back({p.lambda, p.residual_norm, p.solution_norm});
            const std::vector<std::string> headers{"lambda", "residual_norm", "solution_norm"};
            detail::emit(lcurve_output, out, [&](std::ostream& o) { io::write_table(o, headers, rows); });
            if (lcurve_corner) {
                const std::size_t k = suggest_corner(curve);
                err << "corner (max-curvature heuristic): index=" << k
                    << " lambda=" << io::format_double(curve[k].lambda)
                    << " residual_norm=" << io::format_double(curve[k].residual_norm)
                    << " solution_norm=" << io::format_double(curve[k].solution_norm) << '\n';
            }
            return kOk;
        }

        if (svd_cmd->parsed()) {
            const KernelSpec spec = svd_kernel.spec();
            const Vector b = io::read_vector_csv(svd_input);
            if (b.empty()) throw InvalidArgument("input data is empty");
            if (svd_lambda && !(*svd_lambda > 0.0)) throw InvalidArgument("--lambda must be positive");
            const DenseMatrix a = build_blur_matrix(spec, b.size());
            const SvdFactors svd = svd_econ(a);
            const auto diag = spectral_diagnostics(svd, b, svd_lambda.value_or(0.0));
            std::vector<std::string> headers{"j", "sigma", "abs_coeff", "abs_naive_coeff"};
            if (svd_lambda) headers.push_back("abs_filtered_coeff");
            std::vector<std::vector<double>> rows;
            for (const auto& r : diag) {
                std::vector<double> row{static_cast<double>(r.j), r.sigma, std::abs(r.coeff), std::abs(r.naive_coeff)};
                if (svd_lambda) row.push_back(std::abs(r.filtered_coeff));
                rows.push_back(std::move(row));
            }
            detail::emit(svd_output, out, [&](std::ostream& o) { io::write_table(o, headers, rows); });
            if (!svd_vectors.empty()) {
                if (svd_vectors_output.empty()) throw InvalidArgument("--vectors requires --vectors-output");
                const Grid g = make_grid(b.size());
                std::vector<std::string> vh{"t"};
                for (std::size_t j : svd_vectors) {
                    if (j < 1 || j > svd.sigma.size()) throw InvalidArgument("--vectors index out of range");
                    vh.push_back("v" + std::to_string(j));
                }
                std::vector<std::vector<double>> vrows(b.size());
                for (std::size_t i = 0; i < b.size(); ++i) {
                    vrows[i].push_back(g[i]);
                    for (std::size_t j : svd_vectors) vrows[i].push_back(svd.v(i, j - 1));
                }
                io::write_table_csv(svd_vectors_output, vh, vrows);
            }
            return kOk;
        }

        if (enc->parsed()) {
            const Signal f = upc::pattern_to_signal(upc::encode_upc(upc::UpcDigits::parse(enc_digits)), enc_ppu);
            detail::write_vector_to(enc_output, out, f.values());
            return kOk;
        }

        if (dec->parsed()) {
            const Vector f = io::read_vector_csv(dec_input);
            try {
                const auto r = upc::decode_upc(upc::threshold_signal(f), {dec_reversed});
                if (dec_json) {
                    out << detail::to_json(r).dump(2) << '\n';
                } else {
                    out << r.digits.str() << '\n';
                    if (!r.checksum_valid) err << "warning: check digit does not validate\n";
                }
            } catch (const upc::DecodeError& e) {
                if (dec_json) {
                    nlohmann::json j{{"error", e.what()}};
                    if (e.group()) j["group"] = *e.group() + 1;
                    out << j.dump(2) << '\n';
                }
                throw;
            }
            return kOk;
        }

        if (demo->parsed()) {
            const auto digits = upc::UpcDigits::parse(demo_digits);
            const Signal f = upc::pattern_to_signal(upc::encode_upc(digits), demo_ppu);
            const DenseMatrix a = build_blur_matrix({KernelKind::Gaussian, demo_z}, f.size());
            const Signal b = forward_blur(a, f);
            const Vector b_noise = add_noise(std::span<const double>(b.values()), {demo_eps, demo_seed});
            const auto sol = tikhonov_solve(a, b_noise, demo_lambda, parse_solve_method(demo_method));
            if (!demo_output.empty()) io::write_vector_csv(demo_output, sol.f_lambda);
            const auto truth = upc::threshold_signal(f.values());
            const auto bits = upc::threshold_signal(sol.f_lambda);
            out << "digits: " << digits.str() << '\n';
            out << "n: " << f.size() << '\n';
            out << "lambda: " << demo_lambda << '\n';
            out << "residual_norm: " << io::format_double(sol.residual_norm) << '\n';
            out << "solution_norm: " << io::format_double(sol.solution_norm) << '\n';
            out << "bit_mismatches: " << detail::count_mismatches(truth, bits) << '\n';
            const auto r = upc::decode_upc(bits);
            out << "decoded: " << r.digits.str() << '\n';
            out << "match: " << (r.digits == digits ? "yes" : "no") << '\n';
            out << "checksum: " << (r.checksum_valid ? "valid" : "invalid") << '\n';
            return kOk;
        }

        if (ktab->parsed()) {
            if (ktab_count < 2) throw InvalidArgument("--count must be at least 2");
            const std::vector<std::string> headers{"t", "averaging", "hat", "gaussian"};
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < ktab_count; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(ktab_count - 1);
                rows.push_back({t, eval_kernel({KernelKind::Averaging, ktab_z}, ktab_s, t),
                                eval_kernel({KernelKind::Hat, ktab_z}, ktab_s, t),
                                eval_kernel({KernelKind::Gaussian, ktab_z}, ktab_s, t)});
            }
            detail::emit(ktab_output, out, [&](std::ostream& o) { io::write_table(o, headers, rows); });
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kComputation;
    }
    return kUsage;
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace deblur::cli

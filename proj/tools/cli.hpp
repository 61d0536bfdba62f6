#pragma once

// Command-line front end. run_cli() is the whole tool; main() only forwards
// argv, which lets tests drive every subcommand in-process.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <phisig/phisig.hpp>

namespace phisig::cli {

enum class Format { json, csv };

struct RunConfig {
    std::uint64_t sieve_limit = 0; // 0: derive from the subcommand's inputs
    std::string sieve_cache_path;
    unsigned workers = 1;
    Format output_format = Format::json;
    std::uint64_t cap = default_preimage_cap;
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 2;
    case ErrorKind::domain: return 3;
    case ErrorKind::out_of_range: return 4;
    case ErrorKind::truncation: return 5;
    case ErrorKind::resource: return 6;
    case ErrorKind::overflow: return 7;
    case ErrorKind::format: return 8;
    }
    return 1;
}

inline void report_error(std::ostream& err, std::string_view kind, std::string_view message) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    err << j.dump() << '\n';
}

// ---- report builders ----

inline Report preimage_report(const PreimageLevels& lv, bool all_levels) {
    Report r;
    r.kind = "preimage_levels";
    r.field("target", lv.target)
        .field("word", lv.word.to_string())
        .field("k", static_cast<std::uint64_t>(lv.word.size()))
        .field("truncated", lv.truncated)
        .field("count", lv.complete() ? Cell{Count{lv.deepest().size()}} : Cell{});
    r.table_name = "levels";
    r.columns = {"level", "size", "members"};
    const std::size_t first = all_levels ? 0 : lv.levels.size() - 1;
    for (std::size_t j = first; j < lv.levels.size(); ++j)
        r.add_row({static_cast<std::uint64_t>(j + 1), Count{lv.levels[j].size()}, lv.levels[j]});
    return r;
}

inline void moment_fields(Report& r, const MomentReport& m) {
    r.field("fn", std::string(name(m.fn)));
    if (const auto* a = std::get_if<MomentParamsA>(&m.params)) {
        r.field("x", a->x)
            .field("eta", a->eta_derived ? Cell{a->eta} : Cell{})
            .field("z", a->z)
            .field("A", a->A)
            .field("eta_derived", a->eta_derived)
            .field("analytic_regime", a->analytic_regime());
    } else {
        const auto& b = std::get<MomentParamsB>(m.params);
        r.field("x", b.x).field("B", b.B).field("variant", std::string(to_string(b.variant)));
    }
    r.field("n_terms", Count{m.n_terms})
        .field("empirical_sum", m.empirical_sum)
        .field("empirical_log_excess", m.empirical_log_excess)
        .field("analytic_exponent", m.analytic ? Cell{m.analytic->exponent} : Cell{})
        .field("c_used", m.analytic ? Cell{m.analytic->c} : Cell{})
        .field("analytic_note", m.analytic_note);
}

inline Report smooth_counts_report(const SmoothCounts& s) {
    Report r;
    r.kind = "smooth_counts";
    r.field("x", s.x)
        .field("y", s.y)
        .field("psi", Count{s.psi})
        .field("pi_smooth", Count{s.pi_smooth})
        .field("pi_x", Count{s.pi_x})
        .field("lhs", s.lhs)
        .field("rhs", s.rhs)
        .field("ratio", optional_cell(s.ratio));
    return r;
}

inline Report partition_report(const PartitionReport& p) {
    Report r;
    r.kind = "partition";
    r.field("n", p.n)
        .field("k", static_cast<std::uint64_t>(p.k))
        .field("fn", std::string(name(p.fn)))
        .field("inner_word", p.inner_word)
        .field("alpha", p.alpha)
        .field("eta", p.eta)
        .field("x", p.x)
        .field("z", p.z)
        .field("A", p.A)
        .field("threshold_P", p.threshold_P)
        .field("threshold_Q", p.threshold_Q)
        .field("S", p.S)
        .field("P", p.P)
        .field("Q", p.Q)
        .field("R", p.R)
        .field("preimage_total_P", Count{p.total_P})
        .field("preimage_total_Q", Count{p.total_Q})
        .field("preimage_total_R", Count{p.total_R})
        .field("preimage_total", Count{p.total()});
    r.table_name = "elements";
    r.columns = {"ell", "part", "omega_above_z", "omega", "preimages"};
    for (const auto& e : p.entries)
        r.add_row({e.ell, std::string(to_string(e.part)), std::uint64_t{e.omega_above_z},
                   std::uint64_t{e.omega}, Count{e.preimages}});
    return r;
}

inline Report theorem1_report(const Theorem1Scan& s) {
    Report r;
    r.kind = "theorem1_scan";
    r.field("word", s.word)
        .field("k", static_cast<std::uint64_t>(s.word.size()))
        .field("beta", s.beta)
        .field("max_ratio", s.argmax ? Cell{s.max_ratio} : Cell{})
        .field("argmax", s.argmax ? Cell{s.argmax} : Cell{});
    r.table_name = "rows";
    r.columns = {"n", "count", "ratio", "error"};
    for (const auto& row : s.rows)
        r.add_row({row.n, optional_count(row.count), optional_cell(row.ratio), row.error});
    return r;
}

// ---- dispatch ----

class Runner {
  public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args) {
        CLI::App app{"Exact preimage, moment and smooth-number experiments for phi and sigma",
                     "phisig"};
        app.set_version_flag("--version", std::string(version));
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--sieve-limit", cfg_.sieve_limit,
                       "Sieve limit (default: smallest limit the command needs)");
        app.add_option("--sieve-cache", cfg_.sieve_cache_path,
                       "SPF1 cache file: loaded if present, written after building otherwise");
        app.add_option("--workers", cfg_.workers, "Worker threads for range scans")
            ->check(CLI::PositiveNumber);
        std::string fmt = "json";
        app.add_option("--format", fmt, "Output format")->check(CLI::IsMember({"json", "csv"}));
        app.add_option("--cap", cfg_.cap, "Per-level preimage cap")->check(CLI::PositiveNumber);

        register_commands(app);

        std::vector<const char*> argv{"phisig"};
        for (const auto& a : args)
            argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e, out_, err_);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e, out_, err_);
        } catch (const CLI::ParseError& e) {
            report_error(err_, to_string(ErrorKind::usage), e.what());
            return exit_code(ErrorKind::usage);
        }
        cfg_.output_format = fmt == "csv" ? Format::csv : Format::json;

        try {
            if (!action_)
                fail(ErrorKind::usage, "missing subcommand");
            action_();
            return 0;
        } catch (const Error& e) {
            report_error(err_, to_string(e.kind()), e.what());
            return exit_code(e.kind());
        } catch (const std::bad_alloc&) {
            report_error(err_, to_string(ErrorKind::resource), "out of memory");
            return exit_code(ErrorKind::resource);
        }
    }

  private:
    ScanOptions scan() const { return {cfg_.workers, ScanOptions{}.chunk_size}; }

    PreimageOptions popts() const { return {cfg_.cap, sieve_.get()}; }

    void need_sieve(std::uint64_t required) {
        required = std::max<std::uint64_t>(required, 2);
        namespace fs = std::filesystem;
        if (!cfg_.sieve_cache_path.empty() && fs::exists(cfg_.sieve_cache_path)) {
            sieve_ = std::make_shared<FactorSieve>(FactorSieve::load(cfg_.sieve_cache_path));
            return;
        }
        const std::uint64_t limit = cfg_.sieve_limit ? cfg_.sieve_limit : required;
        sieve_ = std::make_shared<FactorSieve>(limit);
        if (!cfg_.sieve_cache_path.empty())
            sieve_->save(cfg_.sieve_cache_path);
    }

    static std::uint64_t capped(double v) {
        constexpr double cap = 1 << 24;
        return static_cast<std::uint64_t>(std::ceil(std::clamp(v, 2.0, cap)));
    }

    void emit(const Report& r) {
        if (cfg_.output_format == Format::csv) {
            write_csv(out_, r);
            return;
        }
        nlohmann::ordered_json config;
        config["command"] = command_;
        config["format"] = cfg_.output_format == Format::csv ? "csv" : "json";
        config["cap"] = cfg_.cap;
        config["sieve_limit"] =
            cfg_.sieve_limit ? nlohmann::ordered_json(cfg_.sieve_limit) : nullptr;
        config["sieve_cache"] =
            cfg_.sieve_cache_path.empty() ? nlohmann::ordered_json(nullptr)
                                          : nlohmann::ordered_json(cfg_.sieve_cache_path);
        config["args"] = args_;
        write_json(out_, r,
                   {"phisig", std::string(version), std::move(config),
                    sieve_ ? sieve_->limit() : 0});
    }

    template <class T>
    CLI::Option* arg(CLI::App* sub, const std::string& flag, T& var, const std::string& help,
                     bool required = true) {
        auto* opt = sub->add_option(flag, var, help);
        if (required)
            opt->required();
        else
            opt->capture_default_str();
        return opt;
    }

    void on(CLI::App* sub, std::string command, std::function<void()> fn) {
        sub->callback([this, sub, command = std::move(command), fn = std::move(fn)] {
            command_ = command;
            for (const auto* opt : sub->get_options()) {
                if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help")
                    continue;
                const auto& key = opt->get_lnames()[0];
                if (opt->get_type_size() == 0)
                    args_[key] = opt->count() > 0;
                else if (!opt->results().empty())
                    args_[key] = opt->as<std::vector<std::string>>().size() > 1
                                     ? nlohmann::ordered_json(opt->as<std::vector<std::string>>())
                                     : nlohmann::ordered_json(opt->as<std::string>());
                else if (!opt->get_default_str().empty())
                    args_[key] = opt->get_default_str();
            }
            action_ = fn;
        });
    }

    void register_commands(CLI::App& app) {
        // preimage
        {
            auto* sub = app.add_subcommand("preimage", "Preimage levels of a word at n");
            arg(sub, "--fn", s_.word, "Word over {p,s} (outermost first), phi^k or sigma^k");
            arg(sub, "--n", s_.n, "Target value");
            sub->add_flag("--levels", s_.levels, "Emit every level, not only the deepest");
            on(sub, "preimage", [this] {
                const auto w = ArithWord::parse(s_.word);
                need_sieve(capped(static_cast<double>(s_.n)));
                emit(preimage_report(iterated_preimages(w, s_.n, popts()), s_.levels));
            });
        }
        // count
        {
            auto* sub = app.add_subcommand("count", "Preimage counts over a range of targets");
            arg(sub, "--fn", s_.word, "Word");
            arg(sub, "--from", s_.from, "First target");
            arg(sub, "--to", s_.to, "Last target");
            on(sub, "count", [this] {
                const auto w = ArithWord::parse(s_.word);
                if (s_.from < 1 || s_.from > s_.to)
                    fail(ErrorKind::domain, "count: need 1 <= from <= to");
                need_sieve(capped(static_cast<double>(s_.to)));
                const auto po = popts();
                auto so = scan();
                so.chunk_size = 256;
                auto rows = parallel_map(s_.from, s_.to + 1, so, [&](std::uint64_t n) {
                    try {
                        return std::pair<std::optional<std::uint64_t>, std::string>{
                            count_preimages(w, n, po), ""};
                    } catch (const TruncationError&) {
                        return std::pair<std::optional<std::uint64_t>, std::string>{
                            std::nullopt, "truncated"};
                    }
                });
                Report r;
                r.kind = "preimage_counts";
                r.field("word", w.to_string()).field("k", std::uint64_t{w.size()});
                r.table_name = "rows";
                r.columns = {"n", "count", "error"};
                for (std::uint64_t i = 0; i < rows.size(); ++i)
                    r.add_row({s_.from + i, optional_count(rows[i].first), rows[i].second});
                emit(r);
            });
        }
        // moments
        {
            auto* moments = app.add_subcommand("moments", "Moment sums against analytic exponents");
            moments->require_subcommand(1);
            auto* rough = moments->add_subcommand("rough", "sum A^Omega_{>z}(a(n))");
            arg(rough, "--x", s_.x, "Range end");
            arg(rough, "--eta", s_.eta, "eta in (0,1)", false);
            arg(rough, "--fn", s_.fn, "phi or sigma");
            rough->add_option("--A", s_.A_override, "Override A (requires --z)");
            rough->add_option("--z", s_.z_override, "Override z (requires --A)");
            on(rough, "moments rough", [this] {
                const ArithFn fn = parse_fn(s_.fn);
                MomentParamsA p;
                if (s_.A_override || s_.z_override) {
                    if (!s_.A_override || !s_.z_override)
                        fail(ErrorKind::usage, "--A and --z must be given together");
                    p = MomentParamsA::custom(s_.x, *s_.A_override, *s_.z_override);
                } else {
                    p = MomentParamsA::from_eta(s_.x, s_.eta);
                }
                need_sieve(floor_to_u64(s_.x) + 1);
                Report r;
                r.kind = "moment_rough";
                moment_fields(r, empirical_moment_rough(*sieve_, fn, p, scan()));
                emit(r);
            });
            auto* total = moments->add_subcommand("total", "sum B^Omega(a(n))");
            arg(total, "--x", s_.x, "Range end");
            arg(total, "--B", s_.B, "1 <= B < 2^(1/3)");
            arg(total, "--variant", s_.variant, "quarter or third", false)
                ->check(CLI::IsMember({"quarter", "third"}));
            arg(total, "--fn", s_.fn, "phi or sigma");
            on(total, "moments total", [this] {
                const ArithFn fn = parse_fn(s_.fn);
                const auto p = MomentParamsB::make(s_.B, s_.x, parse_variant(s_.variant));
                need_sieve(floor_to_u64(s_.x) + 1);
                Report r;
                r.kind = "moment_total";
                moment_fields(r, empirical_moment_total(*sieve_, fn, p, scan()));
                emit(r);
            });
        }
        // smooth
        {
            auto* smooth = app.add_subcommand("smooth", "Smooth-number statistics");
            smooth->require_subcommand(1);
            auto add_xy = [this](CLI::App* sub) {
                arg(sub, "--x", s_.x, "Range end");
                arg(sub, "--y", s_.y, "Smoothness bound");
            };
            auto count_cmd = [&](const char* cmd, const char* help, const char* kind,
                                 std::function<std::uint64_t()> fn) {
                auto* sub = smooth->add_subcommand(cmd, help);
                add_xy(sub);
                if (std::string(cmd) == "phik")
                    arg(sub, "--k", s_.k, "Iterate depth", false);
                on(sub, std::string("smooth ") + cmd, [this, kind, fn] {
                    need_sieve(floor_to_u64(std::max(s_.x, 2.0)));
                    Report r;
                    r.kind = kind;
                    r.field("x", s_.x).field("y", s_.y);
                    if (std::string(kind) == "phi_smooth_count")
                        r.field("k", std::uint64_t{s_.k});
                    r.field("count", Count{fn()});
                    emit(r);
                });
            };
            count_cmd("psi", "Psi(x,y)", "psi_count",
                      [this] { return psi_count(*sieve_, s_.x, s_.y, scan()); });
            count_cmd("pishift", "Pi(x,y)", "pi_smooth_shifted",
                      [this] { return pi_smooth_shifted(*sieve_, s_.x, s_.y, scan()); });
            count_cmd("phik", "Phi_k(x,y)", "phi_smooth_count",
                      [this] { return phi_smooth_count(*sieve_, s_.k, s_.x, s_.y, scan()); });

            auto* hyp = smooth->add_subcommand("hyp1", "Psi(x,y)/x against Pi(x,y)/pi(x)");
            add_xy(hyp);
            on(hyp, "smooth hyp1", [this] {
                need_sieve(floor_to_u64(std::max(s_.x, 2.0)));
                emit(smooth_counts_report(hypothesis1_report(*sieve_, s_.x, s_.y, scan())));
            });

            auto* trend = smooth->add_subcommand("trend", "Phi_k(x, x^(1/u))/x against rho_k");
            arg(trend, "--x", s_.x, "Range end");
            arg(trend, "--k", s_.k, "Iterate depth", false);
            arg(trend, "--u", s_.us, "u values")->expected(1, -1);
            on(trend, "smooth trend", [this] {
                need_sieve(floor_to_u64(std::max(s_.x, 2.0)));
                Report r;
                r.kind = "theorem2_trend";
                r.field("x", s_.x)
                    .field("k", std::uint64_t{s_.k})
                    .field("note", std::string(asymptotic_label));
                r.table_name = "rows";
                r.columns = {"u", "y", "phi_k", "density", "dickman_rho", "rho_k_asymptotic"};
                for (const auto& row : theorem2_trend(*sieve_, s_.k, s_.x, s_.us, scan()))
                    r.add_row({row.u, row.y, Count{row.phi_k}, row.density, row.dickman,
                               optional_cell(row.asymptotic)});
                emit(r);
            });

            auto* rho = smooth->add_subcommand("rho", "Dickman rho and rho_k main terms");
            arg(rho, "--u", s_.us, "u values")->expected(1, -1);
            arg(rho, "--k", s_.k, "Depth for rho_k", false);
            on(rho, "smooth rho", [this] {
                Report r;
                r.kind = "rho";
                r.field("k", std::uint64_t{s_.k}).field("note", std::string(asymptotic_label));
                r.table_name = "rows";
                r.columns = {"u", "dickman_rho", "rho_k_asymptotic"};
                for (double u : s_.us) {
                    std::optional<double> asym;
                    try {
                        asym = rho_k_asymptotic(s_.k, u);
                    } catch (const Error&) {
                    }
                    r.add_row({u, dickman_rho(u), optional_cell(asym)});
                }
                emit(r);
            });
        }
        // partition
        {
            auto* sub = app.add_subcommand("partition", "P/Q/R split of a preimage set");
            arg(sub, "--fn", s_.fn, "Outer function a (phi or sigma)");
            arg(sub, "--inner", s_.word, "Inner word of length k");
            arg(sub, "--n", s_.n, "Target, >= 16");
            arg(sub, "--alpha", s_.alpha, "alpha < k", false);
            arg(sub, "--eta", s_.eta, "eta in (0,1)", false);
            on(sub, "partition", [this] {
                const ArithFn fn = parse_fn(s_.fn);
                const auto w = ArithWord::parse(s_.word);
                need_sieve(capped(search_limit(std::max<std::uint64_t>(s_.n, 1))));
                emit(partition_report(partition_pqr(fn, w, s_.n, s_.alpha, s_.eta, popts())));
            });
        }
        // scan
        {
            auto* scan_cmd = app.add_subcommand("scan", "Ratio scans");
            scan_cmd->require_subcommand(1);
            auto* t1 = scan_cmd->add_subcommand("theorem1", "N L_{k,beta+1}(n)/n over a range");
            arg(t1, "--fn", s_.word, "Word");
            arg(t1, "--beta", s_.beta, "beta", false);
            arg(t1, "--from", s_.from, "First n (>= 16)");
            arg(t1, "--to", s_.to, "Last n");
            on(t1, "scan theorem1", [this] {
                const auto w = ArithWord::parse(s_.word);
                need_sieve(capped(static_cast<double>(s_.to)));
                emit(theorem1_report(theorem1_scan(w, s_.beta, s_.from, s_.to, popts(), scan())));
            });
        }
        // bounds
        {
            auto* bounds = app.add_subcommand("bounds", "Lemma bound checks");
            bounds->require_subcommand(1);
            auto* l3 = bounds->add_subcommand("lemma3", "Extremal sigma and phi ratios");
            arg(l3, "--from", s_.from, "First n");
            arg(l3, "--to", s_.to, "Last n");
            on(l3, "bounds lemma3", [this] {
                need_sieve(s_.to);
                const auto l = lemma3_ratios(*sieve_, s_.from, s_.to, scan());
                Report r;
                r.kind = "lemma3";
                r.field("from", s_.from)
                    .field("to", s_.to)
                    .field("c1_hat", l.c1_hat)
                    .field("argmax", l.argmax)
                    .field("c2_hat", l.c2_hat)
                    .field("argmin", l.argmin);
                emit(r);
            });
            auto* l4 = bounds->add_subcommand("lemma4", "#{n <= x : d | a(n)} against its bound");
            arg(l4, "--fn", s_.fn, "phi or sigma");
            arg(l4, "--d", s_.d, "Divisor, >= 2");
            arg(l4, "--x", s_.x, "Range end");
            on(l4, "bounds lemma4", [this] {
                const ArithFn fn = parse_fn(s_.fn);
                const double bound = lemma4_bound(s_.d, s_.x);
                need_sieve(floor_to_u64(std::max(s_.x, 2.0)));
                const auto c = count_multiples(*sieve_, fn, s_.d, s_.x, scan());
                Report r;
                r.kind = "lemma4";
                r.field("fn", std::string(name(fn)))
                    .field("d", s_.d)
                    .field("x", s_.x)
                    .field("ell", std::uint64_t{big_omega(factorize_trial(s_.d))})
                    .field("count", Count{c})
                    .field("bound", bound)
                    .field("holds", static_cast<double>(c) <= bound);
                emit(r);
            });
        }
        // sieve
        {
            auto* sieve_cmd = app.add_subcommand("sieve", "Sieve cache management");
            sieve_cmd->require_subcommand(1);
            auto* build = sieve_cmd->add_subcommand("build", "Build and write an SPF1 cache");
            arg(build, "--limit", s_.limit, "Sieve limit");
            arg(build, "--out", s_.out, "Output path");
            on(build, "sieve build", [this] {
                sieve_ = std::make_shared<FactorSieve>(s_.limit);
                sieve_->save(s_.out);
                Report r;
                r.kind = "sieve_build";
                r.field("limit", s_.limit)
                    .field("path", s_.out)
                    .field("primes", Count{sieve_->primes().size()})
                    .field("bytes", std::uint64_t{12 + 4 * (s_.limit - 1)});
                emit(r);
            });
        }
    }

    struct Settings {
        std::string word;
        std::string fn;
        std::string variant = "quarter";
        std::string out;
        std::uint64_t n = 0, from = 0, to = 0, d = 0, limit = 0;
        unsigned k = 1;
        double x = 0, y = 0, eta = 0.5, B = 1.0, alpha = 0.5, beta = 0.0;
        std::optional<double> A_override, z_override;
        std::vector<double> us;
        bool levels = false;
    };

    std::ostream& out_;
    std::ostream& err_;
    RunConfig cfg_;
    Settings s_;
    std::string command_;
    nlohmann::ordered_json args_ = nlohmann::ordered_json::object();
    std::function<void()> action_;
    std::shared_ptr<FactorSieve> sieve_;
};

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Runner(out, err).run(args);
}

} // namespace phisig::cli

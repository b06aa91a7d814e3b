// rpf_cli: tables, figure data and verification reports for the restricted-partition coefficients.

#include "rpf/rpf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>

using namespace rpf;

namespace {

enum Exit { ok = 0, usage = 2, verification = 3, numeric = 4 };

struct Config {
    unsigned bits = 256;
    long sigma = 1;
    std::vector<long> N;
    long m = 0;  // 0: command default
    long tmax = 6;
    long digits = 0;
    std::string format = "csv";
    unsigned threads = 0;
    std::string out;
};

struct Sheet {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> meta;
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(const real& x, const Config& c) { return to_string(x, static_cast<int>(c.digits > 0 ? c.digits : 12)); }
std::string num(const cx& z, const Config& c) { return to_string(z, static_cast<int>(c.digits > 0 ? c.digits : 12)); }

void emit(const Sheet& s, const Config& c) {
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw std::invalid_argument("cannot open " + c.out);
    }
    std::ostream& os = c.out.empty() ? std::cout : file;
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["title"] = s.title;
        j["precision_bits"] = c.bits;
        for (auto& [k, v] : s.meta) j["meta"][k] = v;
        j["columns"] = s.columns;
        j["rows"] = nlohmann::ordered_json::array();
        for (auto& r : s.rows) {
            nlohmann::ordered_json row;
            for (size_t i = 0; i < r.size(); ++i) row[s.columns[i]] = r[i];
            j["rows"].push_back(row);
        }
        os << j.dump(2) << "\n";
        return;
    }
    for (size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << s.columns[i];
    os << "\n";
    for (auto& r : s.rows) {
        for (size_t i = 0; i < r.size(); ++i) {
            bool quote = r[i].find(',') != std::string::npos || r[i].find(' ') != std::string::npos;
            os << (i ? "," : "") << (quote ? "\"" + r[i] + "\"" : r[i]);
        }
        os << "\n";
    }
}

std::vector<long> n_list(const Config& c, std::vector<long> dflt) { return c.N.empty() ? dflt : c.N; }

Subset parse_subset(const std::string& s) {
    static const std::map<std::string, Subset> m{{"A", Subset::A}, {"B", Subset::B},   {"C", Subset::C},
                                                 {"C2", Subset::C2}, {"Cprime", Subset::C2}, {"C2star", Subset::C2star},
                                                 {"D", Subset::D}, {"E", Subset::E}};
    auto it = m.find(s);
    if (it == m.end()) throw std::invalid_argument("unknown subset " + s);
    return it->second;
}

// ---------------------------------------------------------------- commands

Sheet cmd_zeros(long A, long B, const Config& c) {
    if (!dilog_zero_exists(A, B)) throw std::invalid_argument("no zero w(A,B): need B != 0 and -|B|/2 < A <= |B|/2");
    auto z = dilog_zero(A, B);
    Sheet s{"dilogarithm zero", {"A", "B", "w", "residual", "-log|w|"}, {}, {}};
    s.rows.push_back({std::to_string(A), std::to_string(B), num(z.w, c), to_string(z.residual, 3), num(-bmp::log(abs(z.w)), c)});
    return s;
}

Sheet cmd_saddles(long d, long m, const Config& c) {
    auto ctx = saddle_point(d, m, 6);
    real u = -p_d(d, ctx.zstar).re;
    Sheet s{"saddle point", {"d", "m", "zstar", "w", "residual", "Re(-p(zstar))", "v"}, {}, {}};
    s.rows.push_back({std::to_string(d), std::to_string(m), num(ctx.zstar, c), num(ctx.w, c), to_string(ctx.residual, 3), num(u, c),
                      num(ctx.zstar.im / ctx.zstar.re, c)});
    if (d == 0 && m == 1) s.meta["U/2"] = num(u / 2, c);
    return s;
}

Sheet cmd_qcoeff(long h, long k, const Config& c) {
    Sheet s{"Q coefficient", {"h", "k", "sigma", "N", "method", "Q"}, {}, {}};
    for (long N : n_list(c, {k})) {
        auto q = (N <= 40) ? q_exact(h, k, c.sigma, N) : q_auto(h, k, c.sigma, N);
        s.rows.push_back({std::to_string(h), std::to_string(k), std::to_string(c.sigma), std::to_string(N), method_name(q.method), num(q.value, c)});
    }
    return s;
}

Sheet cmd_ccoeff(long h, long k, long ell, const Config& c) {
    Sheet s{"C coefficient", {"h", "k", "l", "N", "C"}, {}, {}};
    for (long N : n_list(c, {k * ell})) s.rows.push_back({std::to_string(h), std::to_string(k), std::to_string(ell), std::to_string(N), num(c_coeff(h, k, ell, N), c)});
    return s;
}

Sheet cmd_sums(const std::string& name, long K, const Config& c) {
    Subset sub = parse_subset(name);
    Sheet s{"subset sum", {"subset", "sigma", "N", "sum"}, {}, {}};
    for (long N : n_list(c, {800})) s.rows.push_back({subset_name(sub), std::to_string(c.sigma), std::to_string(N), num(subset_sum(sub, c.sigma, N, K, c.threads), c)});
    return s;
}

Sheet cmd_table(int which, const Config& c) {
    ExpansionKind kind;
    std::vector<long> dflt{800, 1000};
    std::string head;
    switch (which) {
    case 1: kind = ExpansionKind::C2, head = "C2(N,sigma)"; break;
    case 2: kind = ExpansionKind::C2star, head = "C2*(N,sigma)"; break;
    case 3: kind = ExpansionKind::D1, head = "D1(N,sigma)", dflt = {1000, 1001}; break;
    case 4: kind = ExpansionKind::E1, head = "E1(N,sigma)"; break;
    default: throw std::invalid_argument("table must be 1, 2, 3 or 4");
    }
    long mmax = c.m > 0 ? c.m : 4;
    if (mmax > c.tmax + 1) throw std::invalid_argument("--m exceeds tmax + 1");
    Sheet s{"table " + std::to_string(which), {"N"}, {}, {}};
    for (long m = 1; m <= mmax; ++m) s.columns.push_back("m=" + std::to_string(m));
    s.columns.push_back(head);
    s.meta["sigma"] = std::to_string(c.sigma);
    for (long N : n_list(c, dflt)) {
        if (N < 400) std::cerr << "warning: N = " << N << " is below the regime the expansions are meant for\n";
        auto res = coeff_table(table_kind(kind, N), c.sigma, mmax - 1);
        std::vector<std::string> row{std::to_string(N)};
        for (long m = 1; m <= mmax; ++m) row.push_back(to_string(eval_expansion(res, N, m), 5));
        row.push_back(to_string(subset_sum(subset_of(kind), c.sigma, N, 101, c.threads), 5));
        s.rows.push_back(row);
    }
    return s;
}

Sheet cmd_figure(int which, const Config& c) {
    if (which == 1) {
        Sheet s{"figure 1", {"h", "Psi(h,101)", "bound"}, {}, {}};
        real top = clausen(pi() / 3);
        for (long h = 1; h < 101; ++h) {
            real b = top / (2 * pi() * min_pair(h, 101).D) + estimate_budget(101);
            s.rows.push_back({std::to_string(h), num(psi_recip(h, 101), c), num(b, c)});
        }
        return s;
    }
    if (which == 2) {
        long N = c.N.empty() ? 50 : c.N.front();
        Sheet s{"figure 2", {"k", "log Qbound", "log|Q|"}, {}, {}};
        s.meta["N"] = std::to_string(N);
        for (long k = 2; k <= N; ++k) {
            real q = abs(q_auto(1, k, c.sigma, N).value);
            s.rows.push_back({std::to_string(k), num(bmp::log(q_bound(1, k, c.sigma, N)), c), num(bmp::log(q), c)});
        }
        return s;
    }
    throw std::invalid_argument("figure must be 1 or 2");
}

Sheet cmd_bounds(const Config& c) {
    Sheet s{"bounds", {"check", "value", "status"}, {}, {}};
    bool all = true;
    for (long K : {2L, 101L}) {
        auto x = xi_triple(K);
        s.rows.push_back({"xi(" + std::to_string(K) + ")", num(x.xi1, c) + " " + num(x.xi2, c) + " " + num(x.xi3, c), "info"});
    }
    long N = c.N.empty() ? 50 : c.N.front();
    real worst = -1;
    for (long k = 2; k <= N; ++k) worst = rmax(worst, abs(q_auto(1, k, c.sigma, N).value) / q_bound(1, k, c.sigma, N));
    bool okq = worst <= 1;
    all = all && okq;
    s.rows.push_back({"max |Q_1k(N)|/bound", num(worst, c), okq ? "pass" : "fail"});
    real slack = 1e9;
    for (long h = 1; h < 101; ++h)
        for (long m = 0; m < 101; ++m) {
            auto e = log_product_estimate(m, h, 101);
            slack = rmin(slack, e.errbound - bmp::abs(log_product_lhs(m, h, 101) - e.estimate));
        }
    bool oke = slack >= 0;
    all = all && oke;
    s.rows.push_back({"min estimate slack k=101", num(slack, c), oke ? "pass" : "fail"});
    if (!all) {
        emit(s, c);
        throw VerificationFailure("bounds check failed");
    }
    return s;
}

Sheet cmd_verify(const std::string& what, const Config& c) {
    Sheet s{"verify " + what, {}, {}, {}};
    bool all = true;
    if (what == "paths") {
        s.columns = {"path", "ok", "margin", "middle_certified", "failure"};
        for (auto k : {PathKind::P, PathKind::Q, PathKind::R, PathKind::S}) {
            auto r = verify_path(build_path(k));
            all = all && r.ok && r.margin > 0;
            s.rows.push_back({path_name(k), r.ok ? "pass" : "fail", to_string(r.margin, 6), r.middle_certified ? "yes" : "no", r.failure});
        }
    } else if (what == "zero-sum") {
        s.columns = {"N", "sigma", "|sum|", "status"};
        real tol = pow2(-(static_cast<long>(c.bits) - 32));
        for (long N : n_list(c, {10})) {
            cx sum;
            for (auto f : farey(N)) sum += q_exact(f.h, f.k, c.sigma, N).value;
            // the identity needs sigma < N(N+1)/2
            bool applies = 2 * c.sigma < N * (N + 1), good = abs(sum) < tol;
            if (applies) all = all && good;
            s.rows.push_back({std::to_string(N), std::to_string(c.sigma), to_string(abs(sum), 3),
                              !applies ? "out-of-range" : good ? "pass" : "fail"});
        }
    } else if (what == "identities") {
        s.columns = {"identity", "residual", "status"};
        real tol = pow2(-static_cast<long>(c.bits) / 2);
        auto add = [&](const std::string& name, const real& r, const real& t) {
            bool good = r < t;
            all = all && good;
            s.rows.push_back({name, to_string(r, 3), good ? "pass" : "fail"});
        };
        add("shift_two k=11", half_identities(HalfIdentity::shift_two, 11, 1), tol);
        add("half_decomposition k=11", half_identities(HalfIdentity::half_decomposition, 11, 4), tol);
        add("parity_shift k=11", half_identities(HalfIdentity::parity_shift, 11, 15), tol);
        auto cc = coeff_table(TableKind::C2, c.sigma, 3), e = coeff_table(TableKind::E1, c.sigma, 3);
        for (long t = 0; t <= 3; ++t)
            add("e_" + std::to_string(t) + " - 3c_" + std::to_string(t), abs(e.coeffs[t] - 3 * cc.coeffs[t]), real(t == 0 ? 1e-20 : 1e-15));
    } else {
        throw std::invalid_argument("verify expects paths, zero-sum or identities");
    }
    if (!all) {
        emit(s, c);
        throw VerificationFailure("verification failed: " + what);
    }
    return s;
}

Sheet cmd_sineprod(long h, long k, long m, const Config& c) {
    auto p = sine_product_checked(h, k, m);
    Sheet s{"sine product", {"h", "k", "m", "product", "log-estimate", "errbound"}, {}, {}};
    auto e = log_product_estimate(m, h, k);
    s.rows.push_back({std::to_string(h), std::to_string(k), std::to_string(m), p.zero ? "0" : num(p.value, c), num(e.estimate, c), num(e.errbound, c)});
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rademacher coefficient toolkit: tables, figure data and verification"};
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();
    Config c;
    app.add_option("--bits", c.bits, "working precision in bits")->check(CLI::Range(64u, 1u << 16));
    app.add_option("--sigma", c.sigma, "sigma")->check(CLI::Range(1L, 1000000L));
    app.add_option("--N", c.N, "N value(s)");
    app.add_option("--m", c.m, "number of expansion terms");
    app.add_option("--tmax", c.tmax, "highest coefficient index")->check(CLI::Range(0L, 12L));
    app.add_option("--digits", c.digits, "significant digits in output");
    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app.add_option("--out", c.out, "write output to FILE");

    std::function<Sheet()> run;
    long a = 0, b = 0, e3 = 0, K = 101;
    int which = 0;
    std::string word;

    auto* z = app.add_subcommand("zeros", "zero w(A,B) of the continued dilogarithm");
    z->add_option("A", a)->required();
    z->add_option("B", b)->required();
    z->callback([&] { run = [&] { return cmd_zeros(a, b, c); }; });

    auto* sd = app.add_subcommand("saddles", "saddle point of p_d through w(d,-m)");
    sd->add_option("d", a)->required();
    sd->add_option("m_index", b)->required();
    sd->callback([&] { run = [&] { return cmd_saddles(a, b, c); }; });

    auto* q = app.add_subcommand("qcoeff", "Q_{hk sigma}(N)");
    q->add_option("numerator", a)->required();
    q->add_option("denominator", b)->required();
    q->callback([&] { run = [&] { return cmd_qcoeff(a, b, c); }; });

    auto* cc = app.add_subcommand("ccoeff", "C_{hkl}(N)");
    cc->add_option("numerator", a)->required();
    cc->add_option("denominator", b)->required();
    cc->add_option("ell", e3)->required();
    cc->callback([&] { run = [&] { return cmd_ccoeff(a, b, e3, c); }; });

    auto* su = app.add_subcommand("sums", "sum of Q over a Farey subset (A, B, C, C2, C2star, D, E)");
    su->add_option("subset", word)->required();
    su->add_option("--K", K, "K for the subset B");
    su->callback([&] { run = [&] { return cmd_sums(word, K, c); }; });

    auto* t = app.add_subcommand("table", "expansion columns against the direct sum (1: C2, 2: C2*, 3: D1, 4: E1)");
    t->add_option("which", which)->required();
    t->callback([&] { run = [&] { return cmd_table(which, c); }; });

    auto* f = app.add_subcommand("figure", "figure data sets (1: Psi at k=101, 2: |Q_{1k1}(50)| against its bound)");
    f->add_option("which", which)->required();
    f->callback([&] { run = [&] { return cmd_figure(which, c); }; });

    auto* bo = app.add_subcommand("bounds", "bound checks and xi triples");
    bo->callback([&] { run = [&] { return cmd_bounds(c); }; });

    auto* v = app.add_subcommand("verify", "paths, zero-sum or identities");
    v->add_option("what", word)->required();
    v->callback([&] { run = [&] { return cmd_verify(word, c); }; });

    auto* sp = app.add_subcommand("sineprod", "prod_{j<=m} 2 sin(pi j h/k)");
    sp->add_option("numerator", a)->required();
    sp->add_option("denominator", b)->required();
    sp->add_option("length", e3)->required();
    sp->callback([&] { run = [&] { return cmd_sineprod(a, b, e3, c); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    try {
        set_precision(c.bits);
        if (c.threads) default_threads() = c.threads;
        emit(run(), c);
    } catch (const VerificationFailure& err) {
        std::cerr << err.what() << "\n";
        return Exit::verification;
    } catch (const numeric_error& err) {
        std::cerr << "numeric failure: " << err.what() << "\n";
        return Exit::numeric;
    } catch (const std::invalid_argument& err) {
        std::cerr << "usage: " << err.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return Exit::numeric;
    }
    return Exit::ok;
}

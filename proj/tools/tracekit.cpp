#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "tracekit/tracekit.hpp"

using json = nlohmann::ordered_json;
using namespace tracekit;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<i64, i64> parse_range(const std::string& s)
{
    auto num = [&](const std::string& x) {
        size_t pos = 0;
        i64 v;
        try {
            v = std::stoll(x, &pos);
        } catch (const std::exception&) {
            throw UsageError("bad range: " + s);
        }
        if (pos != x.size()) throw UsageError("bad range: " + s);
        return v;
    };
    auto c = s.find(':');
    if (c == std::string::npos) return {num(s), num(s)};
    i64 a = num(s.substr(0, c)), b = num(s.substr(c + 1));
    if (b < a) throw UsageError("empty range: " + s);
    return {a, b};
}

unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("TRACE_KIT_THREADS");
    if (!env) return hw;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v < 1) throw UsageError("TRACE_KIT_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
}

// evaluate f(i) for i in [0, count) on a small pool; results keep their order
template <class R>
std::vector<R> parallel_map(size_t count, const std::function<R(size_t)>& f)
{
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errs(count);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < count;) {
            try {
                out[i] = f(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const size_t T = std::min<size_t>(worker_count(), count);
    std::vector<std::thread> pool;
    for (size_t t = 1; t < T; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

json int_json(const Int& x)
{
    if (fits_i64(x)) return json(to_i64(x));
    return json(x.get_str());
}

json rational_json(const Rational& r) { return json::array({int_json(r.get_num()), int_json(r.get_den())}); }

json approx_json(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return json(std::strtod(buf, nullptr));
}

json cyclo_json(const CycloNum& z)
{
    json c = json::array();
    for (auto& q : z.coeffs()) c.push_back(rational_json(q));
    return {{"order", z.order()}, {"coeffs", c}};
}

json cyclo_approx(const CycloNum& z)
{
    auto a = z.approx();
    if (z.is_rational()) return approx_json(a.real());
    return json::array({approx_json(a.real()), approx_json(a.imag())});
}

std::string approx_text(const CycloNum& z)
{
    char buf[96];
    auto a = z.approx();
    if (z.is_rational())
        std::snprintf(buf, sizeof buf, "%.15g", a.real());
    else
        std::snprintf(buf, sizeof buf, "%.15g%+.15gi", a.real(), a.imag());
    return buf;
}

enum class Format { table, json, csv };

// Emits one flat record per row in the chosen format.
class Emitter {
public:
    Emitter(Format f, std::vector<std::string> cols) : f_(f), cols_(std::move(cols)) {}

    // text holds the table/csv cell for each column; j is the json record
    void row(const std::vector<std::string>& text, json j)
    {
        rows_.push_back(text);
        records_.push_back(std::move(j));
    }

    void flush(std::ostream& os) const
    {
        if (f_ == Format::json) {
            os << records_.dump(2) << "\n";
            return;
        }
        if (f_ == Format::csv) {
            auto cell = [](const std::string& s) {
                if (s.find_first_of(",\"") == std::string::npos) return s;
                std::string q = "\"";
                for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
                return q + "\"";
            };
            for (size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cell(cols_[i]);
            os << "\n";
            for (auto& r : rows_) {
                for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
                os << "\n";
            }
            return;
        }
        std::vector<size_t> w(cols_.size());
        for (size_t i = 0; i < cols_.size(); ++i) w[i] = cols_[i].size();
        for (auto& r : rows_)
            for (size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(w[i] - r[i].size() + 2, ' ');
            }
            os << "\n";
        };
        line(cols_);
        for (auto& r : rows_) line(r);
    }

private:
    Format f_;
    std::vector<std::string> cols_;
    std::vector<std::vector<std::string>> rows_;
    json records_ = json::array();
};

struct TraceArgs {
    i64 level = 0;
    int weight = 0;
    std::string chr;
    i64 ell = 0;
    std::string n;
    std::string space = "cusp";
};

DirichletChar resolve_char(i64 N, const std::string& label)
{
    if (label.empty()) return trivial_character(N);
    DirichletChar chi = character_from_label(label);
    if (chi.modulus() != N) throw UsageError("character " + label + " is not a character mod " + std::to_string(N));
    return chi;
}

int cmd_trace(const TraceArgs& a, Format fmt)
{
    if (a.level < 1 || a.weight < 2) throw UsageError("need --level >= 1 and --weight >= 2");
    auto [n0, n1] = parse_range(a.n);
    if (n0 < 1) throw UsageError("n must be positive");
    const DirichletChar chi = resolve_char(a.level, a.chr);
    const bool full = a.space == "full";
    if (a.ell) {
        if (!chi.is_trivial()) throw UsageError("--ell needs the trivial character");
        check_exact_divisor(a.level, a.ell);
        if (a.weight % 2) throw UsageError("--ell needs even weight");
    }

    struct Rec {
        CycloNum value;
        json breakdown = json::object();
        std::string warning;
    };
    const size_t count = static_cast<size_t>(n1 - n0 + 1);
    auto recs = parallel_map<Rec>(count, [&](size_t i) {
        const i64 n = n0 + static_cast<i64>(i);
        Rec r;
        if (!a.ell && !parity_ok(chi, a.weight)) {
            r.warning = "character parity differs from (-1)^k; space is zero";
            return r;
        }
        if (a.ell) {
            if (full) {
                r.value = CycloNum(trace_atkin_lehner_full(a.level, a.ell, a.weight, n));
            } else {
                auto t = trace_atkin_lehner(a.level, a.ell, a.weight, n);
                r.value = CycloNum(t.value);
                r.breakdown = {{"elliptic", rational_json(t.elliptic)}, {"cusp", rational_json(t.cusp)}, {"correction", rational_json(t.correction)}};
            }
        } else if (full) {
            r.value = trace_hecke_full(a.level, chi, a.weight, n);
        } else {
            auto t = trace_hecke_cusp(a.level, chi, a.weight, n);
            r.value = t.value;
            r.breakdown = {{"elliptic", cyclo_json(t.elliptic)}, {"cusp", cyclo_json(t.cusp)}, {"correction", cyclo_json(t.correction)}};
        }
        return r;
    });

    Emitter em(fmt, {"N", "k", "char", "n", "ell", "space", "value", "approx", "warning"});
    for (size_t i = 0; i < count; ++i) {
        const i64 n = n0 + static_cast<i64>(i);
        const Rec& r = recs[i];
        json j = {{"N", a.level}, {"k", a.weight}, {"char", chi.label()}, {"n", n}};
        if (a.ell) j["ell"] = a.ell;
        j["space"] = full ? "full" : "cusp";
        j["value"] = cyclo_json(r.value);
        j["approx"] = cyclo_approx(r.value);
        if (!r.breakdown.empty()) j["breakdown"] = r.breakdown;
        if (!r.warning.empty()) j["warning"] = r.warning;
        em.row({std::to_string(a.level), std::to_string(a.weight), chi.label(), std::to_string(n), a.ell ? std::to_string(a.ell) : "",
                full ? "full" : "cusp", r.value.to_string(), approx_text(r.value), r.warning},
               j);
    }
    em.flush(std::cout);
    return 0;
}

int cmd_classnum(const std::string& kind, const std::string& range, const std::string& cache_file, Format fmt)
{
    ClassNumberKind k;
    if (kind == "H")
        k = ClassNumberKind::H;
    else if (kind == "h0")
        k = ClassNumberKind::h0;
    else
        throw UsageError("--kind must be H or h0");
    auto [d0, d1] = parse_range(range);
    auto& cache = ClassNumberCache::instance();
    if (!cache_file.empty()) {
        std::ifstream in(cache_file);
        if (in) cache.load_csv(in);
    }
    Emitter em(fmt, {"kind", "D", "value", "approx"});
    for (i64 D = d0; D <= d1; ++D) {
        Rational v = class_number(k, D);
        em.row({kind, std::to_string(D), to_string(v), approx_text(CycloNum(v))},
               {{"kind", kind}, {"D", D}, {"value", rational_json(v)}, {"approx", approx_json(v.get_d())}});
    }
    if (!cache_file.empty()) {
        std::ofstream out(cache_file);
        if (!out) throw std::runtime_error("cannot write cache file " + cache_file);
        cache.save_csv(out);
    }
    em.flush(std::cout);
    return 0;
}

int cmd_verify_heckeop(const std::string& range, bool dump, Format fmt)
{
    auto [n0, n1] = parse_range(range);
    if (n0 < 1) throw UsageError("n must be positive");
    const size_t count = static_cast<size_t>(n1 - n0 + 1);
    struct Rec {
        ABCReport rep;
        size_t terms = 0;
        std::string op;
    };
    auto recs = parallel_map<Rec>(count, [&](size_t i) {
        const i64 n = n0 + static_cast<i64>(i);
        GroupRingElem Tn = build_Tn(n);
        Rec r{verify_ABC(n, Tn), Tn.size(), dump ? Tn.to_json() : std::string()};
        return r;
    });
    bool ok = true;
    Emitter em(fmt, {"n", "terms", "A", "B", "C", "witnesses"});
    auto pf = [](bool b) { return std::string(b ? "pass" : "FAIL"); };
    for (size_t i = 0; i < count; ++i) {
        const auto& r = recs[i];
        ok = ok && r.rep.all();
        std::string wit;
        for (auto& w : r.rep.witnesses) wit += (wit.empty() ? "" : " | ") + w;
        json j = {{"n", r.rep.n}, {"terms", r.terms}, {"A", r.rep.A}, {"B", r.rep.B}, {"C", r.rep.C}, {"witnesses", r.rep.witnesses}};
        if (dump) j["operator"] = json::parse(r.op);
        em.row({std::to_string(r.rep.n), std::to_string(r.terms), pf(r.rep.A), pf(r.rep.B), pf(r.rep.C), wit}, j);
    }
    em.flush(std::cout);
    if (dump && fmt != Format::json)
        for (size_t i = 0; i < count; ++i) std::cout << "operator n=" << recs[i].rep.n << " " << recs[i].op << "\n";
    return ok ? 0 : 1;
}

int cmd_verify_oracle(const TraceArgs& a, Format fmt)
{
    if (a.level < 1 || a.weight < 2) throw UsageError("need --level >= 1 and --weight >= 2");
    auto [n0, n1] = parse_range(a.n);
    if (n0 < 1) throw UsageError("n must be positive");
    const DirichletChar chi = resolve_char(a.level, a.chr);
    if (a.ell) {
        if (!chi.is_trivial()) throw UsageError("--ell needs the trivial character");
        check_exact_divisor(a.level, a.ell);
        if (a.weight % 2) throw UsageError("--ell needs even weight");
    }
    bool ok = true;
    Emitter em(fmt, {"n", "formula", "oracle", "eisenstein", "coboundary", "status"});
    detail::with_module(a.level, chi, a.weight - 2, [&](auto& m) {
        for (i64 n = n0; n <= n1; ++n) {
            SigmaDesc s = a.ell ? SigmaDesc::atkin_lehner(n, a.ell) : SigmaDesc::hecke(n);
            CycloNum formula, eis;
            if (a.ell) {
                formula = CycloNum(trace_atkin_lehner_full(a.level, a.ell, a.weight, n));
                eis = CycloNum(eisenstein_trace_ell(a.level, a.ell, a.weight, n));
            } else {
                formula = trace_hecke_full(a.level, chi, a.weight, n);
                eis = eisenstein_trace(a.level, chi, a.weight, n);
            }
            CycloNum oracle = trace_on_W(m, s, build_Tn(s.det()));
            CycloNum cob = coboundary_report(m, s).via_C;
            bool pass = formula == oracle && eis == cob;
            ok = ok && pass;
            em.row({std::to_string(n), formula.to_string(), oracle.to_string(), eis.to_string(), cob.to_string(), pass ? "pass" : "FAIL"},
                   {{"n", n},
                    {"formula", cyclo_json(formula)},
                    {"oracle", cyclo_json(oracle)},
                    {"eisenstein", cyclo_json(eis)},
                    {"coboundary", cyclo_json(cob)},
                    {"pass", pass}});
        }
        return CycloNum(0L);
    });
    em.flush(std::cout);
    return ok ? 0 : 1;
}

int cmd_verify_suite(bool quick, Format fmt)
{
    SuiteOptions o;
    o.quick = quick;
    auto results = acceptance::run_suite(o);
    bool ok = true;
    Emitter em(fmt, {"criterion", "status", "name", "detail"});
    for (auto& r : results) {
        ok = ok && r.passed;
        em.row({std::to_string(r.id), r.passed ? "pass" : "FAIL", r.name, r.detail},
               {{"criterion", r.id}, {"pass", r.passed}, {"name", r.name}, {"checks", r.checks}, {"detail", r.detail}});
    }
    em.flush(std::cout);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact traces of Hecke operators on modular forms for Gamma0(N)"};
    app.require_subcommand(1);

    std::string format = "table";
    auto add_format = [&](CLI::App* c) { c->add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"})); };

    TraceArgs ta;
    auto* trace = app.add_subcommand("trace", "trace of T_n on S_k(N, chi) or M_k + S_k");
    trace->add_option("--level", ta.level, "level N")->required();
    trace->add_option("--weight", ta.weight, "weight k")->required();
    trace->add_option("--char", ta.chr, "character label N.i (default: trivial)");
    trace->add_option("--ell", ta.ell, "exact divisor of N: compose with the Atkin-Lehner operator");
    trace->add_option("--n", ta.n, "n or A:B")->required();
    trace->add_option("--space", ta.space, "cusp or full")->check(CLI::IsMember({"cusp", "full"}));
    add_format(trace);

    std::string kind = "H", drange, cache_file;
    auto* classnum = app.add_subcommand("classnum", "extended class numbers H(D) or h0(D)");
    classnum->add_option("--kind", kind, "H or h0")->check(CLI::IsMember({"H", "h0"}));
    classnum->add_option("--d", drange, "D or A:B")->required();
    classnum->add_option("--cache-file", cache_file, "CSV cache to load and update");
    add_format(classnum);

    auto* verify = app.add_subcommand("verify", "verification reports");
    verify->require_subcommand(1);
    std::string hrange;
    bool dump = false;
    auto* heckeop = verify->add_subcommand("heckeop", "check (A), (B), (C) for the universal operator");
    heckeop->add_option("--n", hrange, "n or A:B")->required();
    heckeop->add_flag("--dump-operator", dump, "print the operator's support and coefficients");
    add_format(heckeop);

    TraceArgs oa;
    auto* oracle = verify->add_subcommand("oracle", "compare closed formulas with period-space linear algebra");
    oracle->add_option("--level", oa.level, "level N")->required();
    oracle->add_option("--weight", oa.weight, "weight k")->required();
    oracle->add_option("--char", oa.chr, "character label N.i");
    oracle->add_option("--ell", oa.ell, "exact divisor of N");
    oracle->add_option("--n", oa.n, "n or A:B")->required();
    add_format(oracle);

    bool quick = false;
    auto* suite = verify->add_subcommand("suite", "run the acceptance criteria");
    suite->add_flag("--quick", quick, "smaller grids");
    add_format(suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const Format fmt = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::table;
    try {
        if (*trace) return cmd_trace(ta, fmt);
        if (*classnum) return cmd_classnum(kind, drange, cache_file, fmt);
        if (*heckeop) return cmd_verify_heckeop(hrange, dump, fmt);
        if (*oracle) return cmd_verify_oracle(oa, fmt);
        if (*suite) return cmd_verify_suite(quick, fmt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

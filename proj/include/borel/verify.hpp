#pragma once

#include <borel/decomposition.hpp>
#include <borel/envelope.hpp>
#include <borel/field.hpp>
#include <borel/flag.hpp>
#include <borel/json_io.hpp>
#include <borel/linalg.hpp>
#include <borel/oracles.hpp>
#include <borel/permutation.hpp>
#include <borel/random.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace borel::verify {

/*
 * Seeded property harness behind `borel verify`.
 *
 * Every property is a list of independent cases. Case t of the property
 * keyed (suite, property, field, n) draws its inputs from
 * Rng::for_trial(seed, key, t), so cases can be evaluated on any number of
 * threads; outcomes are stored by index and tallied in index order, which
 * makes the report independent of the thread count.
 */

using json = nlohmann::json;

enum class Suite { All, Envelope, Weyl, Decomp, Flag };

inline Suite parse_suite(const std::string& s)
{
    if (s == "all") return Suite::All;
    if (s == "envelope") return Suite::Envelope;
    if (s == "weyl") return Suite::Weyl;
    if (s == "decomp") return Suite::Decomp;
    if (s == "flag") return Suite::Flag;
    throw InvalidInput("unknown suite '" + s + "' (all|envelope|weyl|decomp|flag)");
}

inline std::string to_string(Suite s)
{
    switch (s) {
    case Suite::All: return "all";
    case Suite::Envelope: return "envelope";
    case Suite::Weyl: return "weyl";
    case Suite::Decomp: return "decomp";
    case Suite::Flag: return "flag";
    }
    return "?";
}

struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 20;
    std::vector<FieldSpec> fields = {FieldSpec::rational(), FieldSpec::prime(2), FieldSpec::prime(3),
                                     FieldSpec::prime(5), FieldSpec::prime(101)};
    std::size_t n_min = 1;
    std::size_t n_max = 4;
    EnvelopeMode mode = EnvelopeMode::Full;
    Suite suite = Suite::All;
    std::size_t threads = 1; // not part of the report

    json to_json() const
    {
        json fs = json::array();
        for (const auto& f : fields)
            fs.push_back(f.to_string());
        return json{{"seed", seed},        {"trials", trials},
                    {"fields", fs},        {"n", json::array({n_min, n_max})},
                    {"mode", borel::to_string(mode)}, {"suite", to_string(suite)}};
    }
};

/// "3" or "2..5".
inline std::pair<std::size_t, std::size_t> parse_n_range(const std::string& text)
{
    auto parse_one = [&](const std::string& s) {
        if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw InvalidInput("malformed --n '" + text + "'");
        return static_cast<std::size_t>(std::stoul(s));
    };
    const auto dots = text.find("..");
    const std::size_t lo = parse_one(text.substr(0, dots));
    const std::size_t hi = dots == std::string::npos ? lo : parse_one(text.substr(dots + 2));
    if (lo < 1 || hi < lo)
        throw InvalidInput("--n range must satisfy 1 <= min <= max");
    return {lo, hi};
}

inline std::vector<FieldSpec> parse_field_list(const std::string& text)
{
    std::vector<FieldSpec> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(FieldSpec::parse(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

struct CaseOutcome {
    bool ok = true;
    json input;         // enough to replay the case
    std::string replay; // matching CLI invocation, input files named after the keys of `input`
    std::string detail;
};

struct PropertyTally {
    std::string suite;
    std::string property;
    std::string field;
    std::size_t n;
    std::size_t checks = 0;
    std::size_t passed = 0;
};

class Harness {
public:
    explicit Harness(RunConfig config) : config_(std::move(config)) {}

    const RunConfig& config() const { return config_; }

    /// Runs `count` cases of one property and records the tally.
    void run(const std::string& suite, const std::string& property, const std::string& field, std::size_t n,
             std::size_t count, const std::function<CaseOutcome(Rng&, std::size_t)>& fn)
    {
        const std::uint64_t key = stream_key(suite + "/" + property + "/" + field + "/" + std::to_string(n));
        std::vector<CaseOutcome> outcomes(count);
        auto work = [&](std::size_t first, std::size_t stride) {
            for (std::size_t t = first; t < count; t += stride) {
                Rng rng = Rng::for_trial(config_.seed, key, t);
                try {
                    outcomes[t] = fn(rng, t);
                } catch (const std::exception& e) {
                    outcomes[t].ok = false;
                    outcomes[t].detail = std::string("exception: ") + e.what();
                }
            }
        };
        const std::size_t threads = std::max<std::size_t>(1, std::min(config_.threads, count));
        if (threads == 1) {
            work(0, 1);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t k = 0; k < threads; ++k)
                pool.emplace_back(work, k, threads);
            for (auto& th : pool)
                th.join();
        }

        PropertyTally tally{suite, property, field, n, count, 0};
        for (std::size_t t = 0; t < count; ++t) {
            if (outcomes[t].ok) {
                ++tally.passed;
            } else if (!counterexample_) {
                counterexample_ = json{{"suite", suite},
                                       {"property", property},
                                       {"field", field},
                                       {"n", n},
                                       {"seed", config_.seed},
                                       {"stream", key},
                                       {"trial", t},
                                       {"input", outcomes[t].input},
                                       {"replay", outcomes[t].replay},
                                       {"detail", outcomes[t].detail}};
            }
        }
        tallies_.push_back(std::move(tally));
    }

    bool ok() const { return !counterexample_; }
    const std::vector<PropertyTally>& tallies() const { return tallies_; }
    const std::optional<json>& counterexample() const { return counterexample_; }

    json report() const
    {
        json suites = json::array();
        for (const auto& t : tallies_)
            suites.push_back(json{{"suite", t.suite},
                                  {"property", t.property},
                                  {"field", t.field},
                                  {"n", t.n},
                                  {"checks", t.checks},
                                  {"passed", t.passed}});
        std::size_t checks = 0, passed = 0;
        for (const auto& t : tallies_) {
            checks += t.checks;
            passed += t.passed;
        }
        return json{{"config", config_.to_json()},
                    {"properties", suites},
                    {"total_checks", checks},
                    {"total_passed", passed},
                    {"counterexample", counterexample_ ? *counterexample_ : json(nullptr)},
                    {"ok", ok()}};
    }

    /// FNV-1a, fixed across platforms.
    static std::uint64_t stream_key(const std::string& s)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    RunConfig config_;
    std::vector<PropertyTally> tallies_;
    std::optional<json> counterexample_;
};

namespace detail {

inline std::string field_label(const FieldSpec& spec) { return spec.to_string(); }

template <ExactField F>
CaseOutcome matrix_case(bool ok, const Matrix<F>& m, std::string replay, std::string detail = {})
{
    return {ok, json{{"matrix", io::matrix_to_json(m)}}, std::move(replay), std::move(detail)};
}

/// Conjugation route to g b_0 g^{-1}, independent of the flag stabilizer equations.
template <ExactField F>
Subspace<F> conjugated_standard(const Matrix<F>& g)
{
    const F& f = g.field();
    const std::size_t n = g.rows();
    const Matrix<F> ginv = inverse(g);
    Matrix<F> rows(f, n * (n + 1) / 2, n * n);
    std::size_t k = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b, ++k) {
            const Matrix<F> c = g * Matrix<F>::unit(f, n, a, b) * ginv;
            for (std::size_t e = 0; e < n * n; ++e)
                rows(k, e) = c.entries()[e];
        }
    return Subspace<F>::from_rows(rows);
}

/// Coordinates of the witnesses w.r.t. {e^{i,j}}, one column per witness,
/// both indexed lexicographically over i >= j.
template <ExactField F>
Matrix<F> witness_change_of_basis(const std::vector<DevissageWitness<F>>& ws, const F& f, std::size_t n)
{
    const std::size_t m = n * (n + 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            order.emplace_back(i, j);
    Matrix<F> c(f, m, m);
    for (std::size_t col = 0; col < ws.size(); ++col)
        for (std::size_t row = 0; row < m; ++row)
            c(row, col) = ws[col].a(order[row].first, order[row].second);
    return c;
}

template <ExactField F>
bool witness_basis_ok(const Matrix<F>& u, std::string& detail)
{
    const F& f = u.field();
    const std::size_t n = u.rows();
    const auto ws = witness_basis(u);
    if (ws.size() != n * (n + 1) / 2) {
        detail = "wrong witness count";
        return false;
    }
    const Matrix<F> u_inv = inverse(u);
    SpanAccumulator<F> acc(f, n * n);
    for (const auto& w : ws) {
        if (!w.a.is_lower_triangular() || !borel::detail::in_translated_borel(w.a, u, u_inv, w.s)) {
            detail = "witness (" + std::to_string(w.i) + "," + std::to_string(w.j) + ") outside its intersection";
            return false;
        }
        acc.add(w.a.entries());
    }
    if (!(acc.result() == weyl_borel(longest_element(n), f))) {
        detail = "witnesses do not span the lower triangular algebra";
        return false;
    }
    const Matrix<F> c = witness_change_of_basis(ws, f, n);
    if (!c.is_lower_triangular() || !c.has_unit_diagonal()) {
        detail = "change of basis is not unipotent lower triangular";
        return false;
    }
    return true;
}

} // namespace detail

template <ExactField F>
void envelope_suite(Harness& h, const F& f, std::size_t n)
{
    const auto& cfg = h.config();
    const std::string field = detail::field_label(f.spec());
    const std::size_t trials = cfg.trials;
    if (n <= max_full_group_degree) {
        const auto group = enumerate_group(n);
        h.run("envelope", "envelope_identity", field, n, trials, [&](Rng& rng, std::size_t) {
            const auto g = random_invertible(f, n, rng);
            const bool ok = envelope_bruteforce(g, group) == borel_from_g(g).algebra();
            return detail::matrix_case(ok, g, "borel envelope --matrix matrix.json");
        });
    }
    if (cfg.mode == EnvelopeMode::Full ? n <= max_full_group_degree : n <= max_restricted_degree) {
        const bool restricted = cfg.mode == EnvelopeMode::Restricted;
        h.run("envelope", restricted ? "restricted_certificate" : "full_certificate", field, n, trials,
              [&](Rng& rng, std::size_t) {
                  const auto g = random_invertible(f, n, rng);
                  const auto cert =
                      envelope_certificate(g, restricted ? WeylSelection::restricted() : WeylSelection::full());
                  const bool ok = cert.spans && verify_certificate(cert) &&
                                  (!restricted || cert.weyl_set.size() == (n * n - n + 2) / 2);
                  return detail::matrix_case(ok, g,
                                             std::string("borel envelope --matrix matrix.json") +
                                                 (restricted ? " --restricted" : ""));
              });
    }
    h.run("envelope", "witness_basis", field, n, trials, [&](Rng& rng, std::size_t) {
        const auto u = random_upper_invertible(f, n, rng);
        std::string why;
        const bool ok = detail::witness_basis_ok(u, why);
        return CaseOutcome{ok, json{{"u", io::matrix_to_json(u)}}, "", why};
    });
}

template <ExactField F>
void decomp_suite(Harness& h, const F& f, std::size_t n)
{
    const std::string field = detail::field_label(f.spec());
    const std::size_t trials = h.config().trials;
    auto sample = [&](Rng& rng, std::size_t t) {
        if (t == 0)
            return Matrix<F>(f, n, n);
        return t % 3 == 1 ? random_singular(f, n, rng) : random_matrix(f, n, n, rng);
    };
    h.run("decomp", "ulp_unit_lower", field, n, trials, [&](Rng& rng, std::size_t t) {
        const auto m = sample(rng, t);
        const auto d = ulp_decompose(m, UlpNormalization::UnipotentLower);
        return detail::matrix_case(d.well_formed() && d.recompose() == m, m,
                                   "borel decomp --kind ulp --normalize lower --matrix matrix.json");
    });
    // The unit-upper form can be missing for singular m; it must exist otherwise.
    h.run("decomp", "ulp_unit_upper", field, n, trials, [&](Rng& rng, std::size_t t) {
        const auto m = sample(rng, t);
        const std::string replay = "borel decomp --kind ulp --normalize upper --matrix matrix.json";
        try {
            const auto d = ulp_decompose(m, UlpNormalization::UnipotentUpper);
            return detail::matrix_case(d.well_formed() && d.recompose() == m, m, replay);
        } catch (const NoFactorization&) {
            return detail::matrix_case(!is_invertible(m), m, replay, "no unit-upper factorization reported");
        }
    });
    h.run("decomp", "bruhat_recomposition", field, n, trials, [&](Rng& rng, std::size_t) {
        const auto g = random_invertible(f, n, rng);
        const auto b = bruhat_decompose(g);
        const auto b1 = random_upper_invertible(f, n, rng);
        const auto b2 = random_upper_invertible(f, n, rng);
        const bool ok = b.recompose() == g && b.u1.is_upper_triangular() && b.u2.is_upper_triangular() &&
                        b.u1.has_nonzero_diagonal() && b.u2.has_nonzero_diagonal() && b.s == bruhat_cell(g) &&
                        bruhat_decompose(b1 * g * b2).s == b.s;
        return detail::matrix_case(ok, g, "borel decomp --kind bruhat --matrix matrix.json");
    });
}

template <ExactField F>
void flag_suite(Harness& h, const F& f, std::size_t n)
{
    const std::string field = detail::field_label(f.spec());
    const std::size_t trials = h.config().trials;
    if (n <= max_full_group_degree) {
        const auto group = enumerate_group(n);
        h.run("flag", "theorem26", field, n, trials, [&](Rng& rng, std::size_t) {
            const auto hm = random_invertible(f, n, rng);
            const auto d = theorem26_details(hm);
            const bool ok = d.holds && gl_part(d.sum, n) == envelope_bruteforce(inverse(hm), group);
            return detail::matrix_case(ok, hm, "borel theorem26 --matrix matrix.json");
        });
    }
    h.run("flag", "stabilizer_conjugation", field, n, trials, [&](Rng& rng, std::size_t) {
        const auto g = random_invertible(f, n, rng);
        const auto stab = stabilizer_algebra(flag_from_matrix(g));
        const bool ok = stab.dim() == n * (n + 1) / 2 && stab == detail::conjugated_standard(g) &&
                        stabilizer_algebra(flag_from_matrix(inverse(g))) == borel_from_g(g).algebra();
        return detail::matrix_case(ok, g, "");
    });
    h.run("flag", "relative_position", field, n, trials, [&](Rng& rng, std::size_t) {
        const auto g1 = random_invertible(f, n, rng);
        const auto g2 = random_invertible(f, n, rng);
        const auto b = random_upper_invertible(f, n, rng);
        const Flag<F> f1(g1), f2(g2);
        const auto w = relative_position(f1, f2);
        // g1 b g1^{-1} stabilizes f1
        const Flag<F> moved(g1 * b * inverse(g1) * g2);
        const bool ok = relative_position(f2, f1) == w.inverse() && relative_position(f1, moved) == w &&
                        relative_position(standard_flag(f, n), Flag<F>(inverse(g1) * g2)) == w;
        return CaseOutcome{ok,
                           json{{"flag1", io::matrix_to_json(g1)}, {"flag2", io::matrix_to_json(g2)}},
                           "borel relpos --flag1 flag1.json --flag2 flag2.json",
                           ""};
    });
}

inline void weyl_suite(Harness& h, std::size_t n)
{
    constexpr std::size_t max_exhaustive = 5;
    if (n > max_exhaustive)
        return;
    const auto group = enumerate_group(n);
    const std::size_t g = group.size();
    auto pair_input = [](const Permutation& u, const Permutation& w) {
        return json{{"u", io::permutation_to_json(u)}, {"w", io::permutation_to_json(w)}};
    };

    h.run("weyl", "bruhat_matches_subword", "-", n, g * g, [&](Rng&, std::size_t k) {
        const auto& u = group[k / g];
        const auto& w = group[k % g];
        const bool ok = bruhat_leq(u, w) == oracle::subword_bruhat_leq(u, w);
        return CaseOutcome{ok, pair_input(u, w), "borel weyl leq " + u.to_string() + " " + w.to_string(), ""};
    });
    h.run("weyl", "bruhat_partial_order", "-", n, g * g, [&](Rng&, std::size_t k) {
        const auto& u = group[k / g];
        const auto& w = group[k % g];
        bool ok = bruhat_leq(u, u);
        if (bruhat_leq(u, w) && bruhat_leq(w, u))
            ok = ok && u == w;
        if (bruhat_leq(u, w))
            for (const auto& x : group)
                if (bruhat_leq(w, x))
                    ok = ok && bruhat_leq(u, x);
        return CaseOutcome{ok, pair_input(u, w), "borel weyl leq " + u.to_string() + " " + w.to_string(), ""};
    });
    h.run("weyl", "length_exchange", "-", n, g, [&](Rng&, std::size_t k) {
        const auto& w = group[k];
        bool ok = true;
        for (std::size_t j = 1; j < n; ++j) {
            const auto ws = compose(w, Permutation::transposition(n, j, j + 1));
            const auto a = w.length(), b = ws.length();
            ok = ok && (b == a + 1 || b + 1 == a);
        }
        return CaseOutcome{ok, json{{"w", io::permutation_to_json(w)}}, "borel weyl length " + w.to_string(), ""};
    });
    h.run("weyl", "longest_element", "-", n, 1, [&](Rng&, std::size_t) {
        const auto w0 = longest_element(n);
        bool ok = w0.length() == n * (n - 1) / 2 && compose(w0, w0).is_identity();
        for (const auto& w : group)
            ok = ok && bruhat_leq(w, w0) && bruhat_leq(Permutation(n), w);
        ok = ok && transposition_set(n).size() == (n * n - n + 2) / 2;
        return CaseOutcome{ok, json{{"n", n}}, "borel weyl longest " + std::to_string(n), ""};
    });
    if (n <= 4) {
        const RationalField q;
        h.run("weyl", "perm_matrix_homomorphism", "-", n, g * g, [&](Rng&, std::size_t k) {
            const auto& u = group[k / g];
            const auto& w = group[k % g];
            const bool ok = perm_matrix(compose(u, w), q) == perm_matrix(u, q) * perm_matrix(w, q) &&
                            ((perm_matrix(u, q) == perm_matrix(w, q)) == (u == w));
            return CaseOutcome{ok, pair_input(u, w), "borel weyl compose " + u.to_string() + " " + w.to_string(), ""};
        });
        h.run("weyl", "intersection_dimension", "-", n, g, [&](Rng&, std::size_t k) {
            const auto& w = group[k];
            const bool ok = borel_intersection_dim(Permutation(n), w) == n * (n + 1) / 2 - w.length();
            return CaseOutcome{ok, json{{"w", io::permutation_to_json(w)}}, "", ""};
        });
    }
}

/// Runs the configured suites; suites, fields and n are visited in a fixed order.
inline Harness run(const RunConfig& config)
{
    Harness h(config);
    const auto wants = [&](Suite s) { return config.suite == Suite::All || config.suite == s; };
    for (std::size_t n = config.n_min; n <= config.n_max; ++n) {
        if (wants(Suite::Weyl))
            weyl_suite(h, n);
        for (const auto& spec : config.fields)
            dispatch(spec, [&](const auto& f) {
                if (wants(Suite::Envelope))
                    envelope_suite(h, f, n);
                if (wants(Suite::Decomp))
                    decomp_suite(h, f, n);
                if (wants(Suite::Flag))
                    flag_suite(h, f, n);
            });
    }
    return h;
}

} // namespace borel::verify

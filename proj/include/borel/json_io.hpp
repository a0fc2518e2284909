#pragma once

#include <borel/decomposition.hpp>
#include <borel/envelope.hpp>
#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/flag.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace borel::io {

/*
 * JSON formats
 *
 *   field        "Q" | {"Fp": 5}
 *   matrix       {"field": <field>, "rows": [["1", "-2/3"], ["0", "1"]]}
 *                rationals as "num/den" strings (den omitted when 1),
 *                F_p entries as integers in [0, p)
 *   permutation  [2, 1, 3]   (1-based images)
 *   flag         a matrix whose columns are an adapted basis
 */

using json = nlohmann::json;

inline json field_to_json(const FieldSpec& spec)
{
    if (spec.is_rational())
        return "Q";
    return json{{"Fp", spec.modulus()}};
}

inline FieldSpec field_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Q" || s == "q")
            return FieldSpec::rational();
        return FieldSpec::parse(s);
    }
    if (j.is_object() && j.size() == 1 && j.contains("Fp") && j["Fp"].is_number_unsigned())
        return FieldSpec::prime(j["Fp"].get<std::uint64_t>());
    throw InvalidInput("malformed field " + j.dump() + " (expected \"Q\" or {\"Fp\": p})");
}

template <ExactField F>
json scalar_to_json(const F& field, const typename F::value_type& v)
{
    if constexpr (std::is_same_v<F, RationalField>)
        return field.to_string(v);
    else
        return v;
}

template <ExactField F>
typename F::value_type scalar_from_json(const F& field, const json& j)
{
    if (j.is_string())
        return field.parse(j.get<std::string>());
    if (j.is_number_integer()) {
        if constexpr (std::is_same_v<F, RationalField>)
            return field.parse(j.dump());
        else {
            if (j.is_number_unsigned())
                return field.parse(std::to_string(j.get<std::uint64_t>()));
            throw InvalidInput("residue " + j.dump() + " outside [0, " + std::to_string(field.modulus()) + ")");
        }
    }
    throw InvalidInput("malformed scalar " + j.dump());
}

template <ExactField F>
json vector_to_json(const F& field, std::span<const typename F::value_type> v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(scalar_to_json(field, x));
    return out;
}

template <ExactField F>
json matrix_rows_to_json(const Matrix<F>& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows.push_back(vector_to_json(m.field(), m.row(i)));
    return rows;
}

template <ExactField F>
json matrix_to_json(const Matrix<F>& m)
{
    return json{{"field", field_to_json(m.field().spec())}, {"rows", matrix_rows_to_json(m)}};
}

/// The field named by a matrix document, if any.
inline std::optional<FieldSpec> matrix_field(const json& j)
{
    if (!j.is_object())
        throw InvalidInput("matrix document must be a JSON object");
    if (!j.contains("field"))
        return std::nullopt;
    return field_from_json(j["field"]);
}

/// Resolves the field of a matrix document against an optional override.
inline FieldSpec resolve_field(const json& j, const std::optional<FieldSpec>& requested)
{
    const auto declared = matrix_field(j);
    if (declared && requested && !(*declared == *requested))
        throw InvalidInput("matrix declares field " + declared->to_string() + " but " + requested->to_string() +
                           " was requested");
    if (declared)
        return *declared;
    if (requested)
        return *requested;
    throw InvalidInput("no field given (set \"field\" in the matrix or pass --field)");
}

template <ExactField F>
Matrix<F> matrix_from_json(const F& field, const json& j)
{
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw InvalidInput("matrix document needs a \"rows\" array");
    const json& rows = j["rows"];
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : (rows[0].is_array() ? rows[0].size() : 0);
    Matrix<F> m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c)
            throw InvalidInput("row " + std::to_string(i + 1) + " is not an array of length " + std::to_string(c));
        for (std::size_t k = 0; k < c; ++k)
            m(i, k) = scalar_from_json(field, rows[i][k]);
    }
    return m;
}

inline json permutation_to_json(const Permutation& w) { return w.images(); }

inline Permutation permutation_from_json(const json& j)
{
    if (!j.is_array())
        throw InvalidInput("permutation must be a JSON array of 1-based images");
    std::vector<std::size_t> images;
    for (const auto& x : j) {
        if (!x.is_number_unsigned())
            throw InvalidInput("permutation entries must be positive integers");
        images.push_back(x.get<std::size_t>());
    }
    return Permutation::from_images(std::move(images));
}

/// "2,1,3", "[2,1,3]" or "2 1 3".
inline Permutation parse_permutation(const std::string& text)
{
    std::vector<std::size_t> images;
    std::size_t value = 0;
    bool in_number = false;
    for (char ch : text) {
        if (ch >= '0' && ch <= '9') {
            value = value * 10 + static_cast<std::size_t>(ch - '0');
            in_number = true;
            if (value > 1000000)
                throw InvalidInput("permutation entry too large in '" + text + "'");
        } else if (ch == ',' || ch == ' ' || ch == '[' || ch == ']') {
            if (in_number)
                images.push_back(value);
            value = 0;
            in_number = false;
        } else {
            throw InvalidInput("malformed permutation '" + text + "'");
        }
    }
    if (in_number)
        images.push_back(value);
    return Permutation::from_images(std::move(images));
}

template <ExactField F>
json certificate_to_json(const EnvelopeCertificate<F>& cert)
{
    const F& f = cert.target.field();
    json entries = json::array();
    for (const auto& e : cert.entries)
        entries.push_back(json{{"vector", vector_to_json(f, std::span<const typename F::value_type>(e.vector))},
                               {"w", permutation_to_json(e.w)}});
    json weyl_set = json::array();
    for (const auto& w : cert.weyl_set)
        weyl_set.push_back(permutation_to_json(w));
    return json{{"g", matrix_rows_to_json(cert.target.g())},
                {"field", field_to_json(f.spec())},
                {"mode", to_string(cert.mode)},
                {"weyl_set", weyl_set},
                {"entries", entries},
                {"spans", cert.spans}};
}

template <ExactField F>
json bruhat_to_json(const BruhatFactors<F>& b)
{
    return json{{"kind", "bruhat"},
                {"field", field_to_json(b.u1.field().spec())},
                {"u1", matrix_rows_to_json(b.u1)},
                {"s", permutation_to_json(b.s)},
                {"u2", matrix_rows_to_json(b.u2)}};
}

template <ExactField F>
json ulp_to_json(const UlpFactors<F>& d)
{
    return json{{"kind", "ulp"},
                {"field", field_to_json(d.u.field().spec())},
                {"normalization", d.normalization == UlpNormalization::UnipotentUpper ? "upper" : "lower"},
                {"u", matrix_rows_to_json(d.u)},
                {"l", matrix_rows_to_json(d.l)},
                {"p", permutation_to_json(d.p)}};
}

inline json ledger_to_json(const std::vector<LedgerEntry>& ledger)
{
    json out = json::array();
    for (const auto& e : ledger)
        out.push_back(json{{"w", permutation_to_json(e.w)}, {"dim", e.dim}});
    return out;
}

} // namespace borel::io

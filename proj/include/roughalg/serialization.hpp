#pragma once

#include <string>

#include "json.hpp"
#include "roughalg/one_forms.hpp"
#include "roughalg/paths.hpp"
#include "roughalg/permutations.hpp"
#include "roughalg/tensor_series.hpp"
#include "roughalg/words.hpp"

namespace roughalg::serialization {

using json = nlohmann::ordered_json;

// Wire formats. Every parser throws std::invalid_argument with a message
// naming the offending key, index, or line; the file loaders prefix the
// filename. Writers emit keys in a fixed order so a document's rendering is
// reproducible byte for byte.

// {"terms":[{"word":[...],"coeff":"<decimal>"},...]} with terms in the
// container's canonical order and coefficients as exact decimal strings.
json word_polynomial_to_json(const words::WordPolynomial& p);
words::WordPolynomial word_polynomial_from_json(const json& doc);

// Same shape; each word must be a permutation in one line notation.
json permutation_sum_to_json(const words::PermutationSum& s);
words::PermutationSum permutation_sum_from_json(const json& doc);

// {"dim":d,"depth":N,"levels":[...]} with depth+1 row major level arrays,
// level 0 included.
json tensor_to_json(const tensor::TruncatedTensorSeries& ts);
tensor::TruncatedTensorSeries tensor_from_json(const json& doc);

// {"dim_in":d,"dim_out":e,"degree":n,"coeffs":[...]}; coeffs[k] is row major
// of size e*d^(k+1).
json one_form_to_json(const oneforms::PolynomialOneForm& form);
oneforms::PolynomialOneForm one_form_from_json(const json& doc);

// CSV with header exactly t,x1,...,xd, strictly increasing times, at least
// two data rows. Line numbers in diagnostics are 1 based; CRLF endings and
// trailing blank lines are tolerated.
paths::PiecewiseLinearPath path_from_csv_text(const std::string& text);
paths::PiecewiseLinearPath path_from_csv_file(const std::string& filename);

json load_json_file(const std::string& filename);

}  // namespace roughalg::serialization

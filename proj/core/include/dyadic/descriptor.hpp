#pragma once

#include <nlohmann/json.hpp>

#include "dyadic/operator.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic {

/// Builds a symbol from its JSON form.
///
///   "log" | "log0"                      log symbol, unit BMO^2 (log0: root average removed)
///   {"random": {"seed": s}}              random_bmo_symbol with unit BMO^2
///   {"haar": {"g":..,"m":[..],"eps":[..]}}
///   {"constant": c}
///   {"values": [...]}                    row-major cell values
StepFunction symbol_from_json(const nlohmann::json& j, const TreeParams& params);

/// Builds an operator from a descriptor such as
/// {"theta": {"k": 2, "b": "log", "of": {"shift": {"i": 1, "j": 2, "seed": 7}}}}.
///
/// Operator forms: identity, zero, shift{i,j,seed,cancellative}, shift00{seed},
/// martingale{seed | constant}, pi / pi_star / gamma / frak_p / multiply / averaging{symbol},
/// lambda / lambda_tilde{a,b}, u{symbol,j}, theta / commutator{k,b,of},
/// theta_closed_form{k,b,shift}, compose[..], add[..], bracket[S,T], scale{c,of}, adjoint.
/// A missing symbol defaults to "log". The result carries the input as its descriptor.
/// Throws InvalidArgument on malformed input.
LinearOperator operator_from_json(const nlohmann::json& j, const TreeParams& params);

}  // namespace dyadic

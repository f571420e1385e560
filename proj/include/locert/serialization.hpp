#pragma once

#include <string>

#include <json.hpp>

#include "locert/certify.hpp"
#include "locert/discrimination.hpp"
#include "locert/games.hpp"
#include "locert/strategies.hpp"

namespace locert {

using json = nlohmann::json;

// Canonical text form: sorted keys (nlohmann objects iterate sorted), two
// space indent, numbers at 17 significant digits.  parse + canonical_dump is
// byte-stable on files produced by canonical_dump.
std::string canonical_dump(const json &j);

json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const json &j);

json game_to_json(const Game &g);
Game game_from_json(const json &j);

json correlation_to_json(const Correlation &c);
Correlation correlation_from_json(const json &j);

json strategy_to_json(const Strategy &s);
Strategy strategy_from_json(const json &j);

json instance_to_json(const DiscriminationInstance &inst);
DiscriminationInstance instance_from_json(const json &j);

// Report serialization carries every computed quantity plus tolerances, the
// seed, and solver gap budgets.
json report_to_json(const CertificationReport &rep, std::uint64_t seed);

// File helpers; loading throws parse_error on malformed JSON and propagates
// the domain validation errors otherwise.
json load_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &content);

Game load_game(const std::string &path);
Strategy load_strategy(const std::string &path);
Correlation load_correlation(const std::string &path);
DiscriminationInstance load_instance(const std::string &path);

} // namespace locert

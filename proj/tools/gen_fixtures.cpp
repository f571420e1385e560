// Regenerates the bundled fixture files with the canonical serializer.
// Usage: gen_fixtures <output-dir>

#include <iostream>
#include <string>

#include "locert/serialization.hpp"

namespace {

locert::Strategy classical_deterministic_strategy() {
    using locert::ComplexMatrix;
    using locert::HermitianOperator;
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    std::vector<std::vector<HermitianOperator>> meas(
        2, {HermitianOperator(p0), HermitianOperator(p1)});
    ComplexMatrix gamma(4, 4);
    gamma(0, 0) = 1.0; // |00><00|
    return locert::Strategy(2, 2, locert::PovmFamily(2, meas), locert::PovmFamily(2, meas),
                            locert::DensityOperator(std::move(gamma)));
}

} // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixtures <output-dir>\n";
        return 1;
    }
    const std::string dir = argv[1];
    using locert::canonical_dump;
    locert::write_text_file(dir + "/chsh.json", canonical_dump(locert::game_to_json(locert::chsh())));
    locert::write_text_file(dir + "/chsh_opt.json",
                            canonical_dump(locert::strategy_to_json(locert::chsh_optimal_strategy())));
    locert::write_text_file(dir + "/classical_det.json",
                            canonical_dump(locert::strategy_to_json(classical_deterministic_strategy())));
    locert::write_text_file(dir + "/pr_box.json",
                            canonical_dump(locert::correlation_to_json(locert::pr_box())));
    return 0;
}

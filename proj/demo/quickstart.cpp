// Walks the library end to end on a 2x2 toppling matrix: validation,
// stabilization, both enumerations, the d - f bijection, lattice classes,
// and the sandpile digraph.

#include <iostream>

#include "chipfire/chipfire.hpp"

int main() {
    using namespace chipfire;

    const ToppleMatrix delta = ToppleMatrix::from_rows({{Int(2), Int(-1)}, {Int(-3), Int(4)}});
    std::cout << "det: " << delta.det() << "\n";
    std::cout << "canonical rate: " << to_string(canonical_rate(delta).r) << "\n";

    const RateVector rate = make_rate_vector(delta, {Int(2), Int(1)});
    std::cout << "c = r*Delta: " << to_string(rate.c) << "\n";

    const StabilizeResult stab = stabilize(delta, {Int(2), Int(5)});
    std::cout << "stabilize (2, 5) -> " << to_string(stab.configuration) << " via";
    for (int v : stab.record.sequence) std::cout << ' ' << v;
    std::cout << "\n";

    std::cout << "parking functions:";
    for (const Vec& f : enumerate_parking(delta, rate)) std::cout << ' ' << to_string(f);
    std::cout << "\n";

    std::cout << "recurrent configurations:";
    for (const Vec& u : enumerate_recurrent(delta, rate)) std::cout << ' ' << to_string(u);
    std::cout << "\n";

    const Vec f{Int(1), Int(1)};
    std::cout << to_string(f) << " parks, image d - f = "
              << to_string(parking_to_recurrent(delta, f)) << " is recurrent: "
              << (is_recurrent(delta, rate, parking_to_recurrent(delta, f)) ? "yes" : "no")
              << "\n";

    std::cout << "class of (5, 5) is represented by "
              << to_string(recurrent_representative(delta, rate, {Int(5), Int(5)})) << "\n";

    const SandpileDigraph d = build_digraph(delta, rate);
    std::cout << "arborescences rooted at the sink: " << count_arborescences(d, 0) << "\n";
    return 0;
}

// Prints the first few Gardner Hamiltonians, gradients and fluxes in
// appendix-style notation.

#include "hierlab/hierarchy/gardner.hpp"
#include "hierlab/io/table_io.hpp"

#include <iostream>

int main() {
    using namespace hierlab;
    auto lenard = hierarchy::lenard_sequence(2);
    auto tab = hierarchy::gardner_hamiltonians(3, lenard);
    for (int n = 0; n <= 3; ++n) {
        tab.entries[static_cast<std::size_t>(n)].flux = hierarchy::gardner_flux(tab, n);
        std::cout << io::entry_pretty(tab, n) << "\n";
    }
    return 0;
}

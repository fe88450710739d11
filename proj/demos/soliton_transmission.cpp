// Transmission coefficient of the one-soliton well u = -2 sech^2 x along the
// imaginary axis, against the closed form T(z) = (z + i)/(z - i).

#include "hierlab/scattering/jost.hpp"

#include <iostream>

int main() {
    using namespace hierlab;
    scattering::Potential p;
    p.kind = scattering::Potential::Kind::Sech2;
    p.amp = -2.0;
    std::cout << "tau      T(i tau)          closed form\n";
    for (double tau : {1.5, 2.0, 3.0, 4.0, 6.0}) {
        cdouble z(0.0, tau);
        cdouble T = scattering::jost_solutions(p, z).T;
        cdouble exact = (z + cdouble(0, 1)) / (z - cdouble(0, 1));
        std::cout << tau << "     " << T.real() << "     " << exact.real() << "\n";
    }
    return 0;
}

#include <iostream>
#include "spansim/spansim.h"
int main(){ std::cout << spansim_version() << "\n"; }

#include "dtlab/library.h"
#include <cstdio>
int main() { std::printf("%zu\n", dtlab::Catalog().size()); }

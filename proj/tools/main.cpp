#include "bneck/cli.hpp"

int main(int argc, char** argv) { return bneck::run(argc, argv); }

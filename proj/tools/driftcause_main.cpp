#include "driftcause/io.hpp"

int main(int argc, char** argv) { return driftcause::run_cli(argc, argv); }

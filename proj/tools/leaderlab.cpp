#include "leaderlab/cli.hpp"

int main(int argc, char** argv) { return leaderlab::cli::run(argc, argv); }

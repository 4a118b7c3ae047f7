#include "lsoup/cli.hpp"

int main(int argc, char** argv) { return lsoup::cli::dispatch(argc, argv); }

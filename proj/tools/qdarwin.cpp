#include "qdarwin/cli.hpp"

int main(int argc, char** argv) { return qdarwin::cli::run(argc, argv); }

#include "cli_app.hpp"

int main(int argc, char** argv) { return fms::cli::run(argc, argv); }

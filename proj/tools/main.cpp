#include "cli_app.hpp"

int main(int argc, char** argv) { return chaoskit::cli::main_entry(argc, argv); }

#include "sip_cli.hpp"

int main(int argc, char** argv) { return sip::cli::run(argc, argv); }
